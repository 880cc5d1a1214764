#pragma once

#include "pseudoh/core.hpp"

namespace pseudoh::specfun {

// Gamma at positive half-integers and integers, by recurrence from Gamma(1/2) and Gamma(1).
double gamma_half(double x);

// Orders nu = (n-1)/2 with v >= 0. Integer orders also accept v < 0 through parity.
double bessel_j(double nu, double v);
double struve_h(double nu, double v);
double bessel_y(double nu, double v);  // v > 0

// int_0^1 (1-rho^2)^{(n-2)/2} e^{i v rho} drho
cplx jh_rho_integral(int n, double v);
// J_nu(v) + i H_nu(v) for nu = (n-1)/2; for v < 0 continued by conjugation.
cplx jh_combo(int n, double v);

}  // namespace pseudoh::specfun
