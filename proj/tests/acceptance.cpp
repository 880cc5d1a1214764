#include <boost/math/special_functions/bessel.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "pseudoh/clifford.hpp"
#include "pseudoh/group.hpp"
#include "pseudoh/kernel.hpp"
#include "pseudoh/pairing.hpp"
#include "pseudoh/quadrature.hpp"
#include "pseudoh/specfun.hpp"
#include "pseudoh/witness.hpp"

using namespace pseudoh;
using clifford::Signature;
using kernel::KernelSelector;
using testfn::GaussPoly;

namespace {

const cplx I(0, 1);

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

cplx at_zero(const GaussPoly& f) { return testfn::evaluate(f, Vec::Zero(f.dim)); }

// Isotropic, shifted anisotropic (optionally without x-z coupling) and polynomial-weighted test functions.
std::vector<GaussPoly> family(int d, bool separable_z = false, int s = 1) {
    std::vector<GaussPoly> out;
    out.push_back(testfn::isotropic_gaussian(d, 2.0));
    Mat A = Mat::Identity(d, d);
    Vec c = Vec::Zero(d);
    for (int i = 0; i < d; ++i) {
        A(i, i) = 1.0 + 0.3 * i;
        c[i] = 0.15 * (i % 3) - 0.1;
    }
    A(0, 1) = A(1, 0) = 0.2;
    if (!separable_z) A(0, d - 1) = A(d - 1, 0) = 0.25;
    out.push_back(testfn::gaussian(A, c));
    Mat B = Mat::Identity(d, d) * 1.5;
    for (int i = 0; i + 1 < d - s; ++i) B(i, i + 1) = B(i + 1, i) = -0.2;
    GaussPoly g = testfn::gaussian(B);
    testfn::MultiIndex a(d, 0), b(d, 0);
    a[0] = 1;
    a[d - 1] = 1;
    b[1] = 2;
    g.poly[a] = 0.5;
    g.poly[b] = cplx(-0.3, 0.2);
    out.push_back(g);
    return out;
}

Outcome algebra() {
    std::mt19937 gen(1);
    std::normal_distribution<double> nd;
    double worst = 0, worst_eig = 0;
    for (const auto& sig : clifford::catalog()) {
        const auto m = clifford::build_module(sig);
        worst = std::max(worst, clifford::validate_module(m).max_residual());
        const auto G = group::make_group(sig);
        const Mat& tau = G.module.tau;
        const int d = 2 * G.n;
        for (int t = 0; t < 50; ++t) {
            Vec eta(G.k);
            for (int i = 0; i < G.k; ++i) eta[i] = nd(gen);
            const Mat O = group::omega(G, eta);
            const double q = group::eta_norm2(G, eta);
            worst = std::max(worst, (O + O.transpose()).norm());
            worst = std::max(worst, (O.transpose() * tau * O - 0.25 * q * tau).norm());
            const Mat tO = tau * O;
            worst = std::max(worst, (tO * tO + 0.25 * q * Mat::Identity(d, d)).norm());
            if (q > 0) {
                Eigen::ComplexEigenSolver<Mat> es(tO);
                int up = 0;
                for (int i = 0; i < d; ++i) {
                    const cplx ev = es.eigenvalues()[i];
                    worst_eig = std::max(worst_eig, std::abs(ev.real()));
                    worst_eig = std::max(worst_eig, std::abs(std::abs(ev.imag()) - 0.5 * std::sqrt(q)));
                    up += ev.imag() > 0;
                }
                if (up != G.n) worst_eig = std::max(worst_eig, 1.0);
            }
        }
    }
    return {worst <= 1e-12 && worst_eig <= 1e-10,
            "identities " + fmt("%.2e", worst) + " (tol 1e-12), eigenvalues " + fmt("%.2e", worst_eig) + " (tol 1e-10)"};
}

Outcome gbar() {
    std::mt19937 gen(5);
    std::normal_distribution<double> nd;
    double worst = 0;
    for (auto [n, s] : {std::pair{1, 2}, {2, 1}, {2, 2}}) {
        const Signature sig{0, s, n};
        const double ref = std::pow(2 * M_PI, -(n + 0.5 * s));
        for (int k = 0; k < 1000; ++k) {
            Vec xi(2 * n), th(s);
            for (int i = 0; i < 2 * n; ++i) xi[i] = 2 * nd(gen);
            for (int i = 0; i < s; ++i) th[i] = nd(gen);
            worst = std::max(worst, std::abs(kernel::gbar_residual(sig, xi, th) - ref));
        }
    }
    return {worst <= 1e-8, "max |Gbar q - (2pi)^{-(n+s/2)}| = " + fmt("%.2e", worst) + " (tol 1e-8)"};
}

// (n,s) = (1,2) has no admissible module; (1,1) and (2,2) stand in for it.
const Signature kStandIns[] = {{0, 1, 1}, {0, 2, 2}};

Outcome delta_reproduction() {
    double w1 = 0, w2 = 0;
    for (const auto& sig : kStandIns) {
        const auto G = group::make_group(sig);
        for (const auto& phi : family(G.dim())) {
            const auto r = pairing::pair_K(sig, group::apply_delta_rs(G, phi), KernelSelector::constant(1, 0));
            w1 = std::max(w1, rel(r.value, at_zero(phi)));
        }
    }
    const Signature H2{0, 1, 2};
    const auto G = group::make_group(H2);
    for (const auto& phi : family(G.dim())) {
        const auto r = pairing::pair_K(H2, group::apply_delta_rs(G, phi), KernelSelector::heaviside());
        w2 = std::max(w2, rel(r.value, at_zero(phi)));
    }
    return {w1 <= 1e-3 && w2 <= 1e-2, "(n,s) in {(1,1),(2,2)}: " + fmt("%.2e", w1) + " (tol 1e-3); (2,1) heaviside: " +
                                          fmt("%.2e", w2) + " (tol 1e-2)"};
}

Outcome family_equivalence() {
    double worst = 0;
    for (const auto& sig : kStandIns) {
        const auto G = group::make_group(sig);
        for (const auto& phi : family(G.dim())) {
            const GaussPoly psi = group::apply_delta_rs(G, phi);
            const cplx a = pairing::pair_K(sig, psi, KernelSelector::constant(1, 0)).value;
            const cplx b = pairing::pair_K(sig, psi, KernelSelector::constant(0, 1)).value;
            const cplx c = pairing::pair_K(sig, psi, KernelSelector::constant(0.5, 0.5)).value;
            worst = std::max({worst, rel(b, a), rel(c, a), rel(c, b)});
        }
    }
    return {worst <= 1e-3, "max pairwise relative difference " + fmt("%.2e", worst) + " (tol 1e-3)"};
}

Outcome representations() {
    // the centred isotropic Gaussian pairs to 0 under P -> -P, so the relative comparison uses three
    // non-degenerate test functions
    const Signature H2{0, 1, 2}, S22{0, 2, 2};
    const auto fam = family(5);
    Vec c = Vec::Zero(5);
    c[4] = 0.3;
    const std::vector<GaussPoly> fs{fam[1], fam[2], testfn::gaussian(Mat::Identity(5, 5) * 2.0, c)};
    double w_mr = 0;
    for (const auto& phi : fs) {
        const cplx mr = pairing::pair_MR_heisenberg(phi).value;
        const cplx k = pairing::pair_K(H2, phi, KernelSelector::heaviside()).value;
        w_mr = std::max(w_mr, rel(mr, k));
    }
    double w_sf = 0;
    const auto sep = family(6, true, 2);
    for (int i : {0, 1}) {
        const cplx sf = pairing::pair_second_form(S22, sep[i]).value;
        const cplx k = pairing::pair_K(S22, sep[i], KernelSelector::constant(1, 0)).value;
        w_sf = std::max(w_sf, rel(sf, k));
    }
    return {w_mr <= 1e-2 && w_sf <= 1e-2,
            "iterated integral vs pair_K " + fmt("%.2e", w_mr) + ", second form vs pair_K " + fmt("%.2e", w_sf) +
                " (tol 1e-2)"};
}

Outcome cone_support() {
    Mat A = Mat::Identity(5, 5) * 100;
    Vec c_in = Vec::Zero(5), c_cone = Vec::Zero(5);
    c_in[0] = 2;
    c_cone[4] = 0.5;
    const cplx inside = pairing::pair_MR_heisenberg(testfn::gaussian(A, c_in)).value;
    const cplx cone = pairing::pair_MR_heisenberg(testfn::gaussian(A, c_cone)).value;
    const double ratio = std::abs(inside) / std::abs(cone);

    const Signature S22{0, 2, 2};
    const double w = 0.05;
    Vec c(6);
    c << 2, 0, 0, 0, 0.1, 0;
    const GaussPoly phi = testfn::gaussian(Mat::Identity(6, 6) / (w * w), c);
    const cplx k = pairing::pair_K(S22, phi, KernelSelector::constant(1, 0)).value;
    const auto& gh = quad::gauss_hermite(4);
    cplx acc = 0;
    for (long t = 0; t < 4096; ++t) {
        long q = t;
        double wt = 1;
        Vec u(6);
        for (int i = 0; i < 6; ++i) {
            const int j = static_cast<int>(q % 4);
            q /= 4;
            u[i] = c[i] + std::sqrt(2.0) * w * gh.x[j];
            wt *= gh.w[j];
        }
        acc += wt * kernel::smooth_kernel_offcone(S22, u.head(4), u.tail(2), 1e-10);
    }
    const cplx direct = kernel::kernel_constant(S22) * acc * std::pow(2 * w * w, 3);
    const double e = rel(k, direct);
    return {ratio <= 1e-6 && e <= 1e-3, "support ratio " + fmt("%.2e", ratio) + " (tol 1e-6), off-cone " +
                                            fmt("%.2e", e) + " (tol 1e-3)"};
}

// (pi^2/2) int e^{-|u|}/(u - i eps) du: int e^{-|x|^2}/(P - i eps) over R^4 reduced to the P-axis
cplx eps_integral(double eps) {
    const double S = std::asinh(60 / eps);
    auto f = [&](double s) { return std::exp(-eps * std::abs(std::sinh(s))) * std::cosh(s) / (std::sinh(s) - I); };
    return 0.5 * M_PI * M_PI * quad::adaptive_gk<cplx>(f, -S, S, 1e-13).value;
}

Outcome inverse_powers() {
    const GaussPoly psi = testfn::isotropic_gaussian(4, 2.0);
    const cplx val = kernel::inv_P_power(psi);
    const double eps[] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    Mat B(7, 4);
    CVec y(7);
    for (int i = 0; i < 7; ++i) {
        B.row(i) << 1, eps[i], eps[i] * std::log(eps[i]), eps[i] * eps[i];
        y[i] = eps_integral(eps[i]);
    }
    const CVec coef = B.cast<cplx>().colPivHouseholderQr().solve(y);
    const double e1 = rel(val, coef[0]);
    const cplx cont = kernel::p_plus_i0_power(-1.0, psi, 2);
    const double e2 = rel(cont, val);
    const double e2c = rel(cont, std::conj(val));
    const cplx a1 = kernel::p_plus_i0_power(cplx(-0.5, 0.0), psi, 1), a2 = kernel::p_plus_i0_power(cplx(-0.5, 0.0), psi, 2);
    const double e3 = rel(a2, a1);
    return {e1 <= 1e-3 && e2 <= 1e-3 && e3 <= 1e-5,
            "eps oracle " + fmt("%.2e", e1) + " (tol 1e-3); (P+i0)^{-1} vs 1/P " + fmt("%.2e", e2) +
                " (tol 1e-3; against the conjugate " + fmt("%.2e", e2c) + "); k-independence " + fmt("%.2e", e3) +
                " (tol 1e-5)"};
}

double struve_series(double nu, double v) {
    const double x = 0.5 * v;
    __float128 t = std::pow(x, nu + 1) / (std::tgamma(1.5) * std::tgamma(nu + 1.5));
    __float128 s = t;
    for (int k = 0; k < 200; ++k) {
        t *= -(__float128)(x * x) / ((k + 1.5) * (k + nu + 1.5));
        s += t;
    }
    return static_cast<double>(s);
}

Outcome special_functions() {
    double w = 0, wode = 0;
    for (double nu : {0.0, 0.5, 1.0, 1.5}) {
        for (double v = 0.1; v <= 20.0 + 1e-12; v += 0.1) {
            w = std::max(w, std::abs(specfun::bessel_j(nu, v) - boost::math::cyl_bessel_j(nu, v)));
            const double y = boost::math::cyl_neumann(nu, v);
            w = std::max(w, std::abs(specfun::bessel_y(nu, v) - y) / std::max(1.0, std::abs(y)));
            w = std::max(w, std::abs(specfun::struve_h(nu, v) - struve_series(nu, v)));
        }
        const double h = 3e-3;
        for (double v = 1.0; v <= 10.0; v += 0.5) {
            auto residual = [&](auto f) {
                const double f0 = f(v), fp = f(v + h), fm = f(v - h), fp2 = f(v + 2 * h), fm2 = f(v - 2 * h);
                const double d1 = (-fp2 + 8 * fp - 8 * fm + fm2) / (12 * h);
                const double d2 = (-fp2 + 16 * fp - 30 * f0 + 16 * fm - fm2) / (12 * h * h);
                return v * v * d2 + v * d1 + (v * v - nu * nu) * f0;
            };
            wode = std::max(wode, std::abs(residual([&](double x) { return specfun::bessel_j(nu, x); })));
            wode = std::max(wode, std::abs(residual([&](double x) { return specfun::bessel_y(nu, x); })));
            const double rhs = 4 * std::pow(0.5 * v, nu + 1) / (std::sqrt(M_PI) * std::tgamma(nu + 0.5));
            wode = std::max(wode, std::abs(residual([&](double x) { return specfun::struve_h(nu, x); }) - rhs));
        }
    }
    return {w <= 1e-10 && wode <= 1e-6, "values " + fmt("%.2e", w) + " (tol 1e-10, relative where |Y| > 1), ODE " +
                                            fmt("%.2e", wode) + " (tol 1e-6)"};
}

Outcome nonexistence() {
    const auto G = group::make_group(Signature{1, 1, 2});
    auto cfg = [](int nodes) {
        witness::WitnessConfig c;
        c.sig = {1, 1, 2};
        c.eta0 = Vec(2);
        c.eta0 << 2, 1;
        c.delta = 0.5;
        c.flow_nodes = nodes;
        return c;
    };
    const auto w = witness::build_witness(cfg(64));
    const auto rep = witness::nonsolvability_report(G, w);
    const double res = rep["residual"], sup = rep["psi_sup"], integral = rep["integral"], phi0 = rep["phi_at_0"];
    const double r16 = witness::certify_kernel_residual(G, witness::build_witness(cfg(16))).residual;
    const double r32 = witness::certify_kernel_residual(G, witness::build_witness(cfg(32))).residual;
    const bool ok = res <= 1e-8 * sup && integral > 0 && std::abs(phi0 - 1) <= 1e-9 && r32 * 100 <= r16;
    return {ok, "residual " + fmt("%.2e", res) + " vs 1e-8 sup psi = " + fmt("%.2e", 1e-8 * sup) + ", int psi " +
                    fmt("%.6g", integral) + ", phi(0) " + fmt("%.15g", phi0) + ", drop 16->32 nodes " +
                    fmt("%.3g", r16 / r32) + "x (need 100x)"};
}

Outcome counterexample() {
    const Signature H2{0, 1, 2};
    const auto [lhs, rhs] = pairing::pseudo_pair_n2(H2, testfn::isotropic_gaussian(5, 2.0));
    const double e = rel(lhs, rhs);
    return {e <= 1e-3, "LHS " + fmt("%.12g", lhs.real()) + ", RHS " + fmt("%.12g", rhs.real()) + ", relative " +
                           fmt("%.2e", e) + " (tol 1e-3)"};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double max_seconds;
};

const Criterion kCriteria[] = {
    {"algebra suite", algebra, 1},
    {"Gbar constancy", gbar, 10},
    {"delta reproduction", delta_reproduction, 300},
    {"family equivalence", family_equivalence, 0},
    {"representation cross-check", representations, 900},
    {"support and off-cone kernel", cone_support, 0},
    {"1/P^{n-1} and (P+i0)^lambda", inverse_powers, 0},
    {"special functions", special_functions, 0},
    {"non-existence witness", nonexistence, 120},
    {"n = 2 counterexample identity", counterexample, 0},
};

bool run(int k) {
    const auto& c = kCriteria[k - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.run();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.max_seconds > 0) {
        timing += fmt(" (limit %.0f s)", c.max_seconds);
        if (secs > c.max_seconds) o.pass = false;
    }
    std::printf("criterion %d [%s]: %s  %s; %s\n", k, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            which.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion k]...\n");
            return 2;
        }
    }
    if (which.empty())
        for (int k = 1; k <= 10; ++k) which.push_back(k);
    bool ok = true;
    for (int k : which) {
        if (k < 1 || k > 10) {
            std::fprintf(stderr, "criterion must be 1..10\n");
            return 2;
        }
        ok = run(k) && ok;
    }
    return ok ? 0 : 1;
}
