#include "pseudoh/kernel.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "pseudoh/quadrature.hpp"
#include "pseudoh/specfun.hpp"

namespace pseudoh::kernel {

using namespace testfn;

namespace {

const cplx I(0, 1);

void require_r0(const Signature& sig) {
    if (sig.r != 0) throw UnknownSignature("kernel: only r = 0 signatures carry these kernels");
}

double theta_norm(const Signature& sig, const Vec& xi, const Vec& theta) {
    require_dim(xi.size(), 2 * sig.n, "kernel xi");
    require_dim(theta.size(), sig.s, "kernel theta");
    const double t = theta.norm();
    if (t == 0) throw ThetaZero("kernel: theta = 0");
    return t;
}

bool near_int(cplx z, double tol = 1e-12) {
    return std::abs(z.imag()) < tol && std::abs(z.real() - std::round(z.real())) < tol;
}

}  // namespace

double kappa(double rho) {
    if (rho < 0) throw NonPositiveArgument("kappa: rho must be non-negative");
    if (rho == 0) return 0.5;
    // coth(x/2) = 1 + 2/expm1(x)
    return 0.25 * rho + 0.5 * rho / std::expm1(rho);
}

double volume_element(double rho, int n) {
    if (rho < 0) throw NonPositiveArgument("volume_element: rho must be non-negative");
    if (rho == 0) return 1.0;
    const double h = 0.5 * rho;
    return std::pow(h / std::sinh(h), n);
}

KernelSelector KernelSelector::constant(cplx lambda, cplx mu) {
    if (std::abs(lambda + mu - 1.0) > 1e-12) throw Error("KernelSelector: lambda + mu must equal 1");
    return {Kind::Constant, lambda, mu};
}

KernelSelector KernelSelector::heaviside() { return {Kind::HeavisideSign, 1.0, 0.0}; }

std::pair<cplx, cplx> KernelSelector::at(const Vec& theta) const {
    if (kind == Kind::Constant) return {lambda0, mu0};
    require_dim(theta.size(), 1, "heaviside selector needs s = 1");
    return theta[0] >= 0 ? std::pair<cplx, cplx>{1.0, 0.0} : std::pair<cplx, cplx>{0.0, 1.0};
}

cplx kernel_constant(const Signature& sig) { return I * std::pow(2 * M_PI, -(sig.n + 0.5 * sig.s)); }

cplx rho_integral(int n, double v, int k) {
    if (n < 1) throw UnsupportedN("rho_integral: n must be positive");
    const double av = std::abs(v);
    if (av <= 100) {
        const int N = 32 + 16 * static_cast<int>(std::ceil(0.7 * av / 16));
        const auto& r = quad::half_jacobi(N, 0.5 * (n - 2));
        cplx acc = 0;
        for (std::size_t i = 0; i < r.size(); ++i) acc += r.w[i] * std::pow(r.x[i], k) * std::exp(I * (v * r.x[i]));
        return acc;
    }
    // rho = sin(theta) removes the endpoint weight; composite Gauss-Legendre resolves the oscillation
    const int panels = static_cast<int>(std::ceil(av / 8));
    const auto& g = quad::gauss_legendre(16);
    const double hp = 0.5 * M_PI / panels;
    cplx acc = 0;
    for (int p = 0; p < panels; ++p)
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double th = hp * (p + 0.5 * (g.x[i] + 1));
            const double sn = std::sin(th);
            acc += 0.5 * hp * g.w[i] * std::pow(std::cos(th), n - 1) * std::pow(sn, k) * std::exp(I * (v * sn));
        }
    return acc;
}

cplx kernel_q(const Signature& sig, const Vec& xi, const Vec& theta) {
    return kernel_q_lm(sig, xi, theta, KernelSelector{});
}

cplx kernel_q_lm(const Signature& sig, const Vec& xi, const Vec& theta, const KernelSelector& sel) {
    require_r0(sig);
    const double t = theta_norm(sig, xi, theta);
    const double v = quad_p(xi) / t;
    const auto [lam, mu] = sel.at(theta);
    cplx a = 0;
    if (lam != 0.0) a += lam * rho_integral(sig.n, v);
    if (mu != 0.0) a -= mu * rho_integral(sig.n, -v);
    return kernel_constant(sig) / t * a;
}

cplx kernel_q_lm_bessel(const Signature& sig, const Vec& xi, const Vec& theta, const KernelSelector& sel) {
    require_r0(sig);
    const double t = theta_norm(sig, xi, theta);
    const double v = quad_p(xi) / t;
    const int n = sig.n;
    const double nu = 0.5 * (n - 1);
    auto A = [&](double x) -> cplx {
        if (x == 0) return std::sqrt(M_PI) * specfun::gamma_half(0.5 * n) / (2 * specfun::gamma_half(0.5 * (n + 1)));
        const double ax = std::abs(x);
        const double pref = 2 * std::pow(0.5 * ax, nu) / (std::sqrt(M_PI) * specfun::gamma_half(0.5 * n));
        const cplx c = cplx(specfun::bessel_j(nu, ax), specfun::struve_h(nu, ax)) / pref;
        return x > 0 ? c : std::conj(c);
    };
    const auto [lam, mu] = sel.at(theta);
    return kernel_constant(sig) / t * (lam * A(v) - mu * A(-v));
}

cplx gbar_residual(const Signature& sig, const Vec& xi, const Vec& theta) {
    require_r0(sig);
    const double t = theta_norm(sig, xi, theta);
    const double v = quad_p(xi) / t;
    const cplx a0 = rho_integral(sig.n, v, 0);
    const cplx a1 = I * rho_integral(sig.n, v, 1);
    const cplx a2 = -rho_integral(sig.n, v, 2);
    return -kernel_constant(sig) * (v * a0 + static_cast<double>(sig.n) * a1 + v * a2);
}

// ---------------------------------------------------------------- off-cone kernel

int QTable::degree(int j) const {
    for (int m = static_cast<int>(q[j].size()) - 1; m >= 0; --m)
        if (q[j][m] != 0.0) return m;
    return -1;
}

double c_s(int s) { return std::pow(2.0, 0.5 * s) * specfun::gamma_half(0.5 * (s + 1)) / std::sqrt(M_PI); }

const QTable& offcone_qtable(int n, int s) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, QTable> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, s});
    if (it != cache.end()) return it->second;
    if (n < 1 || s < 1) throw UnsupportedN("offcone_qtable: n and s must be positive");
    const double p = 0.5 * (s + 1);
    // terms Q_j(lambda) w^{-p-j}; d/dlambda: Q_j' w^{-p-j} - 2 (p+j) lambda Q_j w^{-p-j-1}
    std::vector<std::vector<double>> q{{0.0, (n - 1) % 2 ? -1.0 : 1.0}};
    for (int d = 0; d < n - 1; ++d) {
        std::vector<std::vector<double>> nq(q.size() + 1);
        for (std::size_t j = 0; j < q.size(); ++j) {
            auto& a = nq[j];
            auto& b = nq[j + 1];
            a.resize(std::max(a.size(), q[j].size()), 0.0);
            for (std::size_t m = 1; m < q[j].size(); ++m) a[m - 1] += m * q[j][m];
            b.resize(std::max(b.size(), q[j].size() + 1), 0.0);
            for (std::size_t m = 0; m < q[j].size(); ++m) b[m + 1] += -2 * (p + j) * q[j][m];
        }
        q = std::move(nq);
    }
    return cache.emplace(std::pair{n, s}, QTable{n, s, q}).first->second;
}

cplx smooth_kernel_offcone(const Signature& sig, const Vec& x, const Vec& z, double rel_tol) {
    require_r0(sig);
    require_dim(x.size(), 2 * sig.n, "smooth_kernel_offcone x");
    require_dim(z.size(), sig.s, "smooth_kernel_offcone z");
    const double P = quad_p(x), zn2 = z.squaredNorm();
    if (std::abs(P) <= 4 * std::sqrt(zn2))
        throw OnConeRegion("smooth_kernel_offcone: the representation needs |P(x)| > 4|z|");
    const int n = sig.n;
    const QTable& Q = offcone_qtable(n, sig.s);
    const double p = 0.5 * (sig.s + 1), cs = c_s(sig.s), sg = P > 0 ? 1.0 : -1.0;
    auto integrand = [&](double t) -> cplx {
        const double ct = 1 / std::tanh(t);
        const cplx lam = I * (0.25 * P * ct);
        const double w = zn2 - std::pow(0.25 * P * ct, 2);  // < 0 off the cone; approached from sign(P) * i0
        cplx acc = 0;
        for (std::size_t j = 0; j < Q.q.size(); ++j) {
            cplx qv = 0, lp = 1;
            for (double c : Q.q[j]) {
                qv += c * lp;
                lp *= lam;
            }
            const double e = p + j;
            acc += qv * std::pow(-w, -e) * std::exp(cplx(0, -M_PI * sg * e));
        }
        return cs * acc / std::pow(2 * std::sinh(t), n);
    };
    const double T = 60.0 / n;
    return quad::adaptive_gk<cplx>(integrand, 0.0, T, 1e-300, rel_tol, 20000).value;
}

// ---------------------------------------------------------------- 1/P^{n-1}

GaussPoly flat_L(const GaussPoly& psi) {
    if (psi.dim % 2) throw DimensionMismatch("flat_L: dimension must be even");
    const int n = psi.dim / 2;
    GaussPoly out = psi;
    out.poly.clear();
    for (int j = 0; j < 2 * n; ++j) poly_axpy(out.poly, differentiate(differentiate(psi, j), j).poly, j < n ? 1.0 : -1.0);
    poly_prune(out.poly);
    return out;
}

cplx inv_P_power(const GaussPoly& psi, double rel_tol) {
    if (psi.dim % 2) throw DimensionMismatch("inv_P_power: dimension must be even");
    const int n = psi.dim / 2;
    if (n < 2) throw UnsupportedN("inv_P_power: needs n >= 2");
    std::vector<int> all(psi.dim);
    for (int i = 0; i < psi.dim; ++i) all[i] = i;
    const Mat tau = tau_matrix(n);
    const PhaseIntegral direct(psi, all, Vec(), tau);
    const PhaseIntegral dual(inverse_fourier(psi), all, Vec(), tau);
    const cplx pref = std::pow(I, n - 1) / specfun::gamma_half(n - 1);
    auto f1 = [&](double t) { return std::pow(t, n - 2) * direct(cplx(-t)); };
    auto f2 = [&](double u) { return dual(cplx(0.25 * u)); };
    const cplx I1 = quad::adaptive_gk<cplx>(f1, 0.0, 1.0, 1e-300, rel_tol).value;
    const cplx I2 = quad::adaptive_gk<cplx>(f2, 0.0, 1.0, 1e-300, rel_tol).value;
    return pref * (I1 + std::pow(2.0, -n) * I2);
}

// ---------------------------------------------------------------- (P + i0)^lambda

cplx Lambda(cplx lambda, int k, int n) {
    cplx d = std::pow(4.0, k);
    for (int j = 1; j <= k; ++j) d *= (lambda + static_cast<double>(j)) * (static_cast<double>(n + j - 1) + lambda);
    if (d == 0.0) throw PolePosition("Lambda: a factor vanishes");
    return 1.0 / d;
}

ConePairing::ConePairing(const GaussPoly& phi, double min_re_mu, const ConeOptions& opt)
    : h_(opt.step), min_re_mu_(min_re_mu) {
    if (phi.dim % 2) throw DimensionMismatch("ConePairing: dimension must be even");
    const int n = phi.dim / 2;
    if (n < 2) throw UnsupportedN("ConePairing: needs n >= 2");
    if (!(min_re_mu > -1)) throw Error("ConePairing: Re(mu) must exceed -1");
    const Evaluator ev(phi);
    Eigen::SelfAdjointEigenSolver<Mat> es(phi.quad);
    const double lmin = es.eigenvalues().minCoeff();
    const double beta = 0.5 * lmin;
    const double U = 2 * (90 / lmin + phi.shift.squaredNorm());
    const double smin = -40 / (min_re_mu + 1), smax = std::log(U);

    const auto sph = quad::sphere_rule(n, opt.sphere_order);
    const double alpha = 0.5 * (n - 2);
    const auto& lag = quad::gauss_laguerre(opt.laguerre_nodes, alpha);
    // int_0^inf f(w) w^alpha dw with w = t / beta
    const double wscale = std::pow(beta, -alpha - 1) * std::pow(2.0, -alpha) / 8;

    std::vector<double> xbuf(2 * n);
    auto sphere_sum = [&](double a, double b) {
        cplx acc = 0;
        for (std::size_t i = 0; i < sph.x.size(); ++i)
            for (std::size_t j = 0; j < sph.x.size(); ++j) {
                for (int k = 0; k < n; ++k) {
                    xbuf[k] = a * sph.x[i][k];
                    xbuf[n + k] = b * sph.x[j][k];
                }
                acc += sph.w[i] * sph.w[j] * ev(xbuf.data());
            }
        return acc;
    };
    for (double s = smin; s <= smax + 1e-12; s += h_) {
        const double u = std::exp(s);
        cplx fp = 0, fm = 0;
        for (std::size_t l = 0; l < lag.size(); ++l) {
            const double w = lag.x[l] / beta;
            const double wt = lag.w[l] * std::exp(lag.x[l]) * wscale;
            const double big = std::sqrt(u + 0.5 * w), small = std::sqrt(0.5 * w);
            const double bigpow = std::pow(big, n - 2);
            fp += wt * bigpow * sphere_sum(big, small);
            fm += wt * bigpow * sphere_sum(small, big);
        }
        s_.push_back(s);
        fplus_.push_back(fp);
        fminus_.push_back(fm);
    }
}

cplx ConePairing::operator()(cplx mu) const {
    if (mu.real() < min_re_mu_ - 1e-12) throw Error("ConePairing: exponent below the grid's design range");
    const cplx rot = std::exp(I * M_PI * mu);
    cplx acc = 0;
    for (std::size_t i = 0; i < s_.size(); ++i) acc += std::exp((mu + 1.0) * s_[i]) * (fplus_[i] + rot * fminus_[i]);
    return h_ * acc;
}

cplx p_plus_i0_power(cplx lambda, const GaussPoly& psi, int k, const ConeOptions& opt) {
    if (psi.dim % 2) throw DimensionMismatch("p_plus_i0_power: dimension must be even");
    const int n = psi.dim / 2;
    if (n < 2) throw UnsupportedN("p_plus_i0_power: needs n >= 2");
    if (k < 0) throw Error("p_plus_i0_power: k must be non-negative");
    if (near_int(lambda) && std::lround(lambda.real()) <= -n)
        throw PolePosition("p_plus_i0_power: (P+i0)^lambda has a pole at integer lambda <= -n");
    GaussPoly Lk = psi;
    for (int j = 0; j < k; ++j) Lk = flat_L(Lk);
    const bool removable = near_int(lambda) && lambda.real() < 0 && -std::lround(lambda.real()) <= k;
    const double radius = removable ? 0.25 : 0.0;
    if (!(lambda.real() + k - radius > -1)) throw Error("p_plus_i0_power: needs Re(lambda) + k > -1");
    const ConePairing cone(Lk, lambda.real() + k - radius, opt);
    if (!removable) return Lambda(lambda, k, n) * cone(lambda + static_cast<double>(k));
    const int M = 24;
    const cplx center(std::round(lambda.real()), 0.0);
    cplx acc = 0;
    for (int m = 0; m < M; ++m) {
        const cplx l = center + radius * std::exp(I * (2 * M_PI * (m + 0.5) / M));
        acc += Lambda(l, k, n) * cone(l + static_cast<double>(k));
    }
    return acc / static_cast<double>(M);
}

}  // namespace pseudoh::kernel
