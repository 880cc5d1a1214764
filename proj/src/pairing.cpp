#include "pseudoh/pairing.hpp"

#include <cmath>

#include "pseudoh/group.hpp"
#include "pseudoh/quadrature.hpp"
#include "pseudoh/specfun.hpp"

namespace pseudoh::pairing {

using testfn::Evaluator;
using testfn::PhaseIntegral;

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kTail = 45.0;  // Gaussian tails below e^{-45} are dropped

double lambda_min(const Mat& A) {
    return Eigen::SelfAdjointEigenSolver<Mat>(A, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double decay_radius(const Mat& A, const Vec& center, int deg) {
    return center.norm() + std::sqrt(2 * (kTail + deg) / lambda_min(A));
}

std::vector<int> iota(int a, int b) {
    std::vector<int> v;
    for (int i = a; i < b; ++i) v.push_back(i);
    return v;
}

// Quadratic form of the marginal over the trailing `m` axes after integrating out the leading ones.
Mat trailing_marginal(const Mat& A, int m) {
    const int k = static_cast<int>(A.rows()) - m;
    if (k == 0) return A;
    return A.bottomRightCorner(m, m) - A.bottomLeftCorner(m, k) * A.topLeftCorner(k, k).llt().solve(A.topRightCorner(k, m));
}

// Crude bound on int |f|, used only as an absolute tolerance floor.
double mass_scale(const GaussPoly& f) {
    double c = 0;
    for (const auto& [k, v] : f.poly) c += std::abs(v);
    return c * std::pow(2 * M_PI, 0.5 * f.dim) / std::sqrt(f.quad.determinant());
}

void require_r0(const Signature& sig, const char* what) {
    if (sig.r != 0) throw UnknownSignature(std::string(what) + ": needs r = 0");
}

struct Pass {
    cplx value = 0;
    std::vector<int> nodes;
};

template <class F>
PairingResult refine_pair(F&& pass, const Budget& b) {
    const Pass p0 = pass(b);
    const Pass p1 = pass(b.refine());
    return {p1.value, std::abs(p1.value - p0.value), p1.nodes};
}

// ---------------------------------------------------------------- pair_K

Pass pair_K_pass(const Signature& sig, const GaussPoly& g, const KernelSelector& sel, const Budget& b) {
    const int n = sig.n, s = sig.s, m = 2 * n;
    const Mat tau = tau_matrix(n);
    const Mat Qxi = g.quad.topLeftCorner(m, m);
    const double c0 = 0.5 * lambda_min(Qxi);  // below this |c| the phase barely moves E(c)
    const double R = decay_radius(trailing_marginal(g.quad, s), g.shift.tail(s), testfn::poly_degree(g.poly));
    const double floor_abs = 1e-13 * mass_scale(g);  // roundoff level of the moment sums

    // the kernel oscillates in |theta| like exp(-i P(x) |theta| / 4) over the x-extent of phi
    const double X = g.freq.head(m).norm() + std::sqrt(16 * Qxi.eigenvalues().real().maxCoeff());
    const double max_panel = std::min(R / 8, 2 / (1 + 0.25 * X * X));
    const auto radial = quad::graded_rule(0, R, 1e-7 * R, b.per_panel, 2.0, max_panel);
    const auto sph = quad::sphere_rule(s, b.sphere_order);
    const auto xi_axes = iota(0, m);

    cplx total = 0;
    long evals = 0;
    PhaseIntegral E(g, xi_axes, Vec::Zero(s), tau);
    for (std::size_t ir = 0; ir < radial.size(); ++ir) {
        const double r = radial.x[ir];
        for (std::size_t is = 0; is < sph.x.size(); ++is) {
            const Vec theta = r * sph.x[is];
            const auto [lam, mu] = sel.at(theta);
            if (lam == 0.0 && mu == 0.0) continue;
            E.rebind(theta);
            auto f = [&](double ang) {
                const double c = std::sin(ang) / r;
                cplx v = 0;
                if (lam != 0.0) v += lam * E(c);
                if (mu != 0.0) v -= mu * E(-c);
                return std::pow(std::cos(ang), n - 1) * v;
            };
            // breakpoints at rho = r c0 2^k resolve the decay of E on the scale rho ~ r
            std::vector<double> br;
            double scale = std::abs(E(0.0));
            for (double rho = r * c0;; rho *= 2) {
                br.push_back(rho >= 1 ? 0.5 * M_PI : std::asin(rho));
                scale = std::max(scale, std::abs(E(std::min(rho, 1.0) / r)));
                if (rho >= 1) break;
            }
            scale *= std::abs(lam) + std::abs(mu);
            cplx inner = 0;
            double lo = 0;
            for (double hi : br) {
                const auto res = quad::adaptive_gk<cplx>(f, lo, hi, std::max(floor_abs, b.tol * scale) * (hi - lo),
                                                        b.tol, 64);
                inner += res.value;
                evals += res.evaluations;
                lo = hi;
            }
            total += radial.w[ir] * sph.w[is] * std::pow(r, s - 2) * inner;
        }
    }
    const int per_node = static_cast<int>(evals / std::max<long>(1, radial.size() * sph.x.size()));
    return {kernel::kernel_constant(sig) * total,
            {static_cast<int>(radial.size()), static_cast<int>(sph.x.size()), per_node}};
}

// ---------------------------------------------------------------- Heisenberg iterated integral

Pass mr_pass(const GaussPoly& g, int n, const Budget& b) {
    const Evaluator ev(g);
    const double R = decay_radius(g.quad, g.shift, testfn::poly_degree(g.poly));
    const double W = R * R;
    // the z-slices only have a kink at u = 0, which the split z > 0 / z < 0 puts on panel ends
    const auto taus = quad::graded_rule(0, 1, 0.25, b.per_panel, 1.0, 0.25);
    const auto zs = quad::graded_rule(0, R, R / 4, b.per_panel, 1.0, R / 4);
    const auto ws = quad::graded_rule(0, W, W / 4, b.per_panel, 1.0, W / 4);
    const auto sph = quad::sphere_rule(n, b.sphere_order);

    std::vector<double> buf(2 * n + 1);
    auto sphere_sum = [&](double a, double bb, double z) {
        buf[2 * n] = z;
        cplx acc = 0;
        for (std::size_t i = 0; i < sph.x.size(); ++i) {
            for (int k = 0; k < n; ++k) buf[k] = a * sph.x[i][k];
            cplx inner = 0;
            for (std::size_t j = 0; j < sph.x.size(); ++j) {
                for (int k = 0; k < n; ++k) buf[n + k] = bb * sph.x[j][k];
                inner += sph.w[j] * ev(buf.data());
            }
            acc += sph.w[i] * inner;
        }
        return acc;
    };

    cplx total = 0;
    for (std::size_t it = 0; it < taus.size(); ++it) {
        const double t = taus.x[it];
        cplx J = 0;
        for (int sgn : {1, -1})
            for (std::size_t iz = 0; iz < zs.size(); ++iz) {
                const double z = sgn * zs.x[iz];
                const double u = -4 * t * z;
                cplx acc = 0;
                for (std::size_t iw = 0; iw < ws.size(); ++iw) {
                    const double v = ws.x[iw] + std::abs(u);
                    const double jac = std::pow(0.25 * (v * v - u * u), 0.5 * (n - 2));
                    acc += ws.w[iw] * jac * sphere_sum(std::sqrt(0.5 * (v + u)), std::sqrt(0.5 * (v - u)), z);
                }
                J += zs.w[iz] * acc;
            }
        total += taus.w[it] * 0.5 * std::pow(t, 1 - n) * std::pow(1 - t * t, 0.5 * (n - 2)) * J;
    }
    // overall sign: the inversion step picks up i * i^{1-n} = -i^{-n}
    return {-std::pow(4.0 * M_PI * I, -n) * total,
            {static_cast<int>(taus.size()), static_cast<int>(2 * zs.size()), static_cast<int>(ws.size()),
             static_cast<int>(sph.x.size() * sph.x.size())}};
}

// ---------------------------------------------------------------- second form

Pass second_form_pass(const Signature& sig, const GaussPoly& fz, const Budget& b) {
    const int n = sig.n, s = sig.s, m = 2 * n;
    const Mat tau = tau_matrix(n);
    const double R = decay_radius(fz.quad.bottomRightCorner(s, s), fz.shift.tail(s), testfn::poly_degree(fz.poly));
    const auto rs = quad::graded_rule(0, R, R / 6, b.per_panel, 1.0, R / 6);
    const auto Ts = quad::graded_rule(0, 1, 1e-4, b.per_panel, 3.0, 0.25);
    const auto& gl = quad::gauss_legendre(2 * b.per_panel);
    const auto sph = quad::sphere_rule(s, b.sphere_order);
    const auto x_axes = iota(0, m);

    // T-integrand accumulated over (omega, r): sum w_omega w_r 1/P^{n-1}[...] at coth t = 1/T
    std::vector<cplx> acc(Ts.size(), 0.0);
    for (std::size_t is = 0; is < sph.x.size(); ++is) {
        Mat M = Mat::Zero(m + s, m + 1);
        M.topLeftCorner(m, m).setIdentity();
        M.col(m).tail(s) = sph.x[is];
        GaussPoly h = testfn::precompose_affine(fz, M, Vec::Zero(m + s));
        for (int k = 0; k < n + s - 2; ++k) h = testfn::multiply_coord(h, m);
        for (int k = 0; k < n - 1; ++k) h = testfn::differentiate(h, m);
        PhaseIntegral E(h, x_axes, Vec::Zero(1), tau);
        for (std::size_t ir = 0; ir < rs.size(); ++ir) {
            const double r = rs.x[ir];
            E.rebind(Vec::Constant(1, r));
            for (std::size_t iT = 0; iT < Ts.size(); ++iT) {
                const double A = r / (4 * Ts.x[iT]);
                cplx v = 0;
                for (std::size_t q = 0; q < gl.size(); ++q) {
                    const double y = 0.5 * (gl.x[q] + 1), wq = 0.5 * gl.w[q];
                    v += wq * std::pow(y, n - 2) * E(-(A + y));
                    v += wq * std::pow(y, -n) * E(-(A + 1 / y));
                }
                acc[iT] += sph.w[is] * rs.w[ir] * v;
            }
        }
    }
    cplx total = 0;
    for (std::size_t iT = 0; iT < Ts.size(); ++iT) {
        const double T = Ts.x[iT];
        total += Ts.w[iT] * std::pow(1 - T * T, 0.5 * (n - 2)) / T * acc[iT];
    }
    const cplx pref = std::pow(2.0 / I, n - 2) * std::pow(2 * M_PI, -(n + 0.5 * s)) * std::pow(I, n - 1) /
                      specfun::gamma_half(n - 1);
    return {pref * total,
            {static_cast<int>(Ts.size()), static_cast<int>(sph.x.size()), static_cast<int>(rs.size()),
             static_cast<int>(2 * gl.size())}};
}

}  // namespace

GaussPoly slice(const GaussPoly& f, const std::vector<int>& fixed, const Vec& values) {
    require_dim(values.size(), static_cast<long>(fixed.size()), "slice values");
    std::vector<int> isfixed(f.dim, -1);
    for (std::size_t i = 0; i < fixed.size(); ++i) isfixed[fixed[i]] = static_cast<int>(i);
    const int k = f.dim - static_cast<int>(fixed.size());
    Mat M = Mat::Zero(f.dim, k);
    Vec c = Vec::Zero(f.dim);
    for (int i = 0, col = 0; i < f.dim; ++i) {
        if (isfixed[i] >= 0)
            c[i] = values[isfixed[i]];
        else
            M(i, col++) = 1;
    }
    return testfn::precompose_affine(f, M, c);
}

PairingResult pair_K(const Signature& sig, const GaussPoly& phi, const KernelSelector& sel, const Budget& b) {
    require_r0(sig, "pair_K");
    require_dim(phi.dim, 2 * sig.n + sig.s, "pair_K test function");
    const GaussPoly g = testfn::fourier(phi);
    return refine_pair([&](const Budget& bb) { return pair_K_pass(sig, g, sel, bb); }, b);
}

PairingResult pair_MR_heisenberg(const GaussPoly& phi, const Budget& b) {
    if (phi.dim % 2 == 0) throw DimensionMismatch("pair_MR_heisenberg: dimension must be 2n+1");
    const int n = (phi.dim - 1) / 2;
    if (n % 2) throw OddN("pair_MR_heisenberg: the iterated integral needs n even");
    GaussPoly g = phi;
    for (int k = 0; k < n - 1; ++k) g = testfn::differentiate(g, 2 * n);
    return refine_pair([&](const Budget& bb) { return mr_pass(g, n, bb); }, b);
}

PairingResult pair_second_form(const Signature& sig, const GaussPoly& phi, const Budget& b) {
    require_r0(sig, "pair_second_form");
    if (sig.n < 2) throw UnsupportedN("pair_second_form: needs n >= 2");
    require_dim(phi.dim, 2 * sig.n + sig.s, "pair_second_form test function");
    const GaussPoly fz = testfn::fourier_axes(phi, iota(2 * sig.n, phi.dim));
    return refine_pair([&](const Budget& bb) { return second_form_pass(sig, fz, bb); }, b);
}

std::pair<cplx, cplx> pseudo_pair_n2(const Signature& sig, const GaussPoly& phi, const Budget& b) {
    require_r0(sig, "pseudo_pair_n2");
    if (sig.n != 2) throw UnsupportedN("pseudo_pair_n2: needs n = 2");
    const int s = sig.s, m = 4;
    require_dim(phi.dim, m + s, "pseudo_pair_n2 test function");
    const auto G = group::make_group(sig);
    const GaussPoly Fpsi = testfn::fourier(group::apply_delta_rs(G, phi));
    const auto theta_axes = iota(m, m + s);

    const double R =
        decay_radius(trailing_marginal(Fpsi.quad, s), Fpsi.shift.tail(s), testfn::poly_degree(Fpsi.poly));
    const auto radial = quad::graded_rule(0, R, R / 6, b.per_panel, 1.0, R / 6);
    const auto sph = quad::sphere_rule(s, b.sphere_order);
    cplx lhs = 0;
    for (std::size_t ir = 0; ir < radial.size(); ++ir)
        for (std::size_t is = 0; is < sph.x.size(); ++is) {
            const double r = radial.x[ir];
            const GaussPoly slab = slice(Fpsi, theta_axes, r * sph.x[is]);
            lhs += radial.w[ir] * sph.w[is] * std::pow(r, s - 1) * kernel::inv_P_power(slab, b.tol);
        }
    lhs *= -std::pow(2 * M_PI, -(2 + 0.5 * s));

    const GaussPoly h = slice(testfn::fourier(phi), iota(0, m), Vec::Zero(m));
    GaussPoly h2 = testfn::scale(h, 0.0);
    for (int j = 0; j < s; ++j) h2 = testfn::add(h2, testfn::multiply_coord(testfn::multiply_coord(h, j), j), 1.0, 0.25);
    const cplx rhs = testfn::evaluate(phi, Vec::Zero(phi.dim)) + std::pow(2 * M_PI, -0.5 * s) * testfn::integral(h2);
    return {lhs, rhs};
}

}  // namespace pseudoh::pairing
