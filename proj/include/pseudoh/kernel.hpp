#pragma once

#include <utility>
#include <vector>

#include "pseudoh/clifford.hpp"
#include "pseudoh/testfn.hpp"

namespace pseudoh::kernel {

using clifford::Signature;
using testfn::GaussPoly;

// (rho/4) coth(rho/2), continuous at 0 with value 1/2
double kappa(double rho);
// ((rho/2)/sinh(rho/2))^n
double volume_element(double rho, int n);

struct KernelSelector {
    enum class Kind { Constant, HeavisideSign };
    Kind kind = Kind::Constant;
    cplx lambda0 = 1.0;
    cplx mu0 = 0.0;

    static KernelSelector constant(cplx lambda, cplx mu);
    static KernelSelector heaviside();
    // (lambda(theta), mu(theta))
    std::pair<cplx, cplx> at(const Vec& theta) const;
};

// i (2 pi)^{-(n+s/2)}
cplx kernel_constant(const Signature& sig);

// int_0^1 (1-rho^2)^{(n-2)/2} rho^k e^{i v rho} drho
cplx rho_integral(int n, double v, int k = 0);

cplx kernel_q(const Signature& sig, const Vec& xi, const Vec& theta);
cplx kernel_q_lm(const Signature& sig, const Vec& xi, const Vec& theta, const KernelSelector& sel);
// Same kernel through J_nu + i H_nu.
cplx kernel_q_lm_bessel(const Signature& sig, const Vec& xi, const Vec& theta, const KernelSelector& sel);

// [Gbar q](xi, theta); equals (2 pi)^{-(n+s/2)}
cplx gbar_residual(const Signature& sig, const Vec& xi, const Vec& theta);

// (-1)^{n-1} d^{n-1}/dlambda^{n-1} [lambda w^{-(s+1)/2}] = sum_j Q_j(lambda) w^{-(s+1)/2-j}, w = lambda^2 + |z|^2.
// Coefficients exclude the constant c_s; q[j][m] multiplies lambda^m.
struct QTable {
    int n = 0, s = 0;
    std::vector<std::vector<double>> q;
    int degree(int j) const;
};
const QTable& offcone_qtable(int n, int s);
// 2^{s/2} Gamma((s+1)/2) / sqrt(pi)
double c_s(int s);

// Smooth kernel away from the cone |P(x)| <= 4|z|.
cplx smooth_kernel_offcone(const Signature& sig, const Vec& x, const Vec& z, double rel_tol = 1e-10);

// Flat ultra-hyperbolic operator sum_{j<n} d_j^2 - d_{j+n}^2 on R^{2n}.
GaussPoly flat_L(const GaussPoly& psi);

// lim_{eps->0} int psi / (P - i eps)^{n-1}
cplx inv_P_power(const GaussPoly& psi, double rel_tol = 1e-10);

// 1 / (4^k prod_{j=1..k} (lambda+j)(n+lambda+j-1))
cplx Lambda(cplx lambda, int k, int n);

struct ConeOptions {
    int sphere_order = 16;
    int laguerre_nodes = 48;
    double step = 0.125;  // trapezoid step in log|P|
};

// ((P+i0)^mu, phi) for Re mu > -1 from cone coordinates. The grid depends on phi only,
// so many exponents cost one pass over the nodes.
class ConePairing {
public:
    ConePairing(const GaussPoly& phi, double min_re_mu, const ConeOptions& opt = {});
    cplx operator()(cplx mu) const;

private:
    std::vector<double> s_;
    std::vector<cplx> fplus_, fminus_;  // densities of phi pushed forward by P, at u = +-e^s
    double h_;
    double min_re_mu_;
};

// Lambda(lambda,k) ((P+i0)^{lambda+k}, L^k psi). Removable points lambda in {-1,...,-n+1} are
// evaluated by a Cauchy mean on a small circle; integer lambda <= -n is a pole.
cplx p_plus_i0_power(cplx lambda, const GaussPoly& psi, int k, const ConeOptions& opt = {});

}  // namespace pseudoh::kernel
