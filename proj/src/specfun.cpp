#include "pseudoh/specfun.hpp"

#include <cmath>

#include "pseudoh/quadrature.hpp"

namespace pseudoh::specfun {

namespace {

bool is_half_integer(double x) { return std::abs(2 * x - std::round(2 * x)) < 1e-12; }

// The integrand e^{i v rho} is entire, so Gauss-Jacobi converges like (e v / 4N)^{2N};
// N = 32 + |v| is below 1e-16 on the whole supported range.
cplx half_jacobi_exp(double alpha, double v) {
    const auto& r = quad::half_jacobi(32 + static_cast<int>(std::ceil(std::abs(v))), alpha);
    cplx acc = 0;
    for (std::size_t i = 0; i < r.size(); ++i) acc += r.w[i] * std::exp(cplx(0, v * r.x[i]));
    return acc;
}

void check_order(double nu) {
    if (nu < 0 || !is_half_integer(nu)) throw NonPositiveArgument("order must be a non-negative half-integer");
}

// 2 (v/2)^nu / (sqrt(pi) Gamma(nu + 1/2))
double prefactor(double nu, double v) { return 2 * std::pow(0.5 * v, nu) / (std::sqrt(M_PI) * gamma_half(nu + 0.5)); }

}  // namespace

double gamma_half(double x) {
    if (!(x > 0) || !is_half_integer(x)) throw NonPositiveArgument("gamma_half: argument must be a positive half-integer");
    const int two = static_cast<int>(std::lround(2 * x));
    double g = two % 2 ? std::sqrt(M_PI) : 1.0;
    for (int k = two % 2 ? 1 : 2; k < two; k += 2) g *= 0.5 * k;
    return g;
}

double bessel_j(double nu, double v) {
    check_order(nu);
    if (v < 0) {
        if (!is_half_integer(nu) || std::abs(nu - std::round(nu)) > 1e-12)
            throw NonPositiveArgument("bessel_j: negative argument needs an integer order");
        return (std::lround(nu) % 2 ? -1.0 : 1.0) * bessel_j(nu, -v);
    }
    return prefactor(nu, v) * half_jacobi_exp(nu - 0.5, v).real();
}

double struve_h(double nu, double v) {
    check_order(nu);
    if (v < 0) {
        if (std::abs(nu - std::round(nu)) > 1e-12)
            throw NonPositiveArgument("struve_h: negative argument needs an integer order");
        return (std::lround(nu) % 2 ? 1.0 : -1.0) * struve_h(nu, -v);
    }
    if (v == 0) return 0.0;
    return prefactor(nu, v) * half_jacobi_exp(nu - 0.5, v).imag();
}

double bessel_y(double nu, double v) {
    check_order(nu);
    if (!(v > 0)) throw NonPositiveArgument("bessel_y: pole at v = 0");
    // int_0^inf e^{-v rho} (1+rho^2)^{nu-1/2} drho; panels grow geometrically until they reach 2/v
    const double top = 50.0 / v;
    const auto r = quad::graded_rule(0.0, top, std::min(0.5, 0.5 / v), 24, 2.0, std::max(0.5, 2.0 / v));
    double L = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
        L += r.w[i] * std::exp(-v * r.x[i]) * std::pow(1 + r.x[i] * r.x[i], nu - 0.5);
    return struve_h(nu, v) - prefactor(nu, v) * L;
}

cplx jh_rho_integral(int n, double v) {
    if (n < 1) throw UnsupportedN("jh_rho_integral: n must be positive");
    return half_jacobi_exp(0.5 * (n - 2), v);
}

cplx jh_combo(int n, double v) {
    if (n < 1) throw UnsupportedN("jh_combo: n must be positive");
    if (v < 0) return std::conj(jh_combo(n, -v));
    const double nu = 0.5 * (n - 1);
    return prefactor(nu, v) * jh_rho_integral(n, v);
}

}  // namespace pseudoh::specfun
