#include "pseudoh/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pseudoh/quadrature.hpp"

namespace pseudoh::witness {

namespace {

constexpr double kPi = std::numbers::pi;

GaussPoly times_p(const GaussPoly& f) {
    const int n = f.dim / 2;
    GaussPoly out = testfn::scale(f, 0.0);
    out.poly.clear();
    for (int j = 0; j < f.dim; ++j)
        out = testfn::add(out, testfn::multiply_coord(testfn::multiply_coord(f, j), j), 1.0, j < n ? 1.0 : -1.0);
    return out;
}

GaussPoly flat_l(const GaussPoly& f) {
    const int n = f.dim / 2;
    GaussPoly out = testfn::scale(f, 0.0);
    out.poly.clear();
    for (int j = 0; j < f.dim; ++j)
        out = testfn::add(out, testfn::differentiate(testfn::differentiate(f, j), j), 1.0, j < n ? 1.0 : -1.0);
    return out;
}

template <class Op>
GaussMixture termwise(const GaussMixture& f, Op op) {
    GaussMixture out;
    out.terms.reserve(f.terms.size());
    for (const auto& t : f.terms) out.terms.push_back(op(t));
    return out;
}

void require_mixture_dim(const GroupStructure& G, const GaussMixture& f, const Vec& eta, const char* what) {
    require_dim(eta.size(), G.k, what);
    for (const auto& t : f.terms) require_dim(t.dim, 2 * G.n, what);
}

// Evaluators for every term; the mixture is summed at each point.
struct MixtureEval {
    std::vector<testfn::Evaluator> ev;
    explicit MixtureEval(const GaussMixture& f) {
        ev.reserve(f.terms.size());
        for (const auto& t : f.terms) ev.emplace_back(t);
    }
    cplx operator()(const Vec& u) const {
        cplx acc = 0;
        for (const auto& e : ev) acc += e(u);
        return acc;
    }
};

// Row-major enumeration of a tensor grid with `pts` points per axis on [-1,1]^d.
std::vector<Vec> unit_grid(int d, int pts) {
    long total = 1;
    for (int i = 0; i < d; ++i) total *= pts;
    std::vector<Vec> out;
    out.reserve(total);
    for (long t = 0; t < total; ++t) {
        Vec u(d);
        long q = t;
        for (int i = 0; i < d; ++i) {
            u[i] = pts == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(q % pts) / (pts - 1);
            q /= pts;
        }
        out.push_back(u);
    }
    return out;
}

}  // namespace

double bump(const Vec& eta, const Vec& eta0, double delta) {
    const double u = (eta - eta0).squaredNorm() / (delta * delta);
    if (u >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u));
}

double ball_min_form(const Signature& sig, const Vec& eta0, double delta) {
    require_dim(eta0.size(), sig.r + sig.s, "ball_min_form");
    if (!(delta > 0)) throw NonPositiveScale("ball_min_form: delta must be positive");
    // The positive and negative blocks decouple: with a = |shift of eta_+|, b = |shift of eta_-|,
    // a^2 + b^2 = delta^2, the minimum is (max(0, p - a))^2 - (m + b)^2.
    const double p = eta0.head(sig.r).norm(), m = eta0.tail(sig.s).norm();
    auto g = [&](double th) {
        const double a = delta * std::cos(th), b = delta * std::sin(th);
        const double lo = std::max(0.0, p - a);
        return lo * lo - (m + b) * (m + b);
    };
    const int N = 4000;
    int best = 0;
    for (int i = 1; i <= N; ++i)
        if (g(0.5 * kPi * i / N) < g(0.5 * kPi * best / N)) best = i;
    double lo = 0.5 * kPi * std::max(0, best - 1) / N, hi = 0.5 * kPi * std::min(N, best + 1) / N;
    for (int it = 0; it < 100; ++it) {
        const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
        if (g(a) < g(b))
            hi = b;
        else
            lo = a;
    }
    return std::min({g(0.5 * (lo + hi)), g(0.0), g(0.5 * kPi)});
}

GaussMixture a_eta_apply(const GroupStructure& G, const GaussMixture& f, const Vec& eta) {
    require_mixture_dim(G, f, eta, "a_eta_apply");
    const double q = group::eta_norm2(G, eta);
    return termwise(f, [&](const GaussPoly& t) { return testfn::add(times_p(t), flat_l(t), -1.0, 0.25 * q); });
}

GaussMixture b_eta_apply(const GroupStructure& G, const GaussMixture& f, const Vec& eta) {
    require_mixture_dim(G, f, eta, "b_eta_apply");
    const Mat A = group::omega(G, eta) * G.module.tau;
    const int d = 2 * G.n;
    return termwise(f, [&](const GaussPoly& t) {
        GaussPoly out = testfn::scale(t, 0.0);
        out.poly.clear();
        for (int j = 0; j < d; ++j) {
            const GaussPoly dj = testfn::differentiate(t, j);
            for (int k = 0; k < d; ++k)
                if (A(j, k) != 0.0) out = testfn::add(out, testfn::multiply_coord(dj, k), 1.0, cplx(0, -2 * A(j, k)));
        }
        testfn::poly_prune(out.poly);
        return out;
    });
}

double flow_period(const GroupStructure& G, const Vec& eta) {
    const double q = group::eta_norm2(G, eta);
    if (!(q > 0)) throw NonTimelikeEta("flow_period: <eta,eta> must be positive");
    return 4 * kPi / std::sqrt(q);
}

GaussPoly phi_eta(const GroupStructure& G, const Vec& eta) {
    const double q = group::eta_norm2(G, eta);
    if (!(q > 0)) throw NonTimelikeEta("phi_eta: <eta,eta> must be positive");
    return testfn::isotropic_gaussian(2 * G.n, 2.0 / std::sqrt(q));
}

GaussMixture d_eta_average(const GroupStructure& G, const GaussPoly& phi, const Vec& eta, int m, double offset) {
    require_dim(phi.dim, 2 * G.n, "d_eta_average");
    require_dim(eta.size(), G.k, "d_eta_average eta");
    if (m < 1) throw NonPositiveArgument("d_eta_average: node count must be positive");
    const double q = flow_period(G, eta);
    const Vec zero = Vec::Zero(phi.dim);
    GaussMixture out;
    out.terms.reserve(m);
    for (int j = 0; j < m; ++j) {
        const Mat M = group::exp_flow(G, eta, (j + offset) * q / m, group::Side::Left);
        out.terms.push_back(testfn::scale(testfn::precompose_affine(phi, M, zero), q / m));
    }
    return out;
}

WitnessFunction::WitnessFunction(const GroupStructure& G, const WitnessConfig& cfg) : G_(G), cfg_(cfg) {
    require_dim(cfg.eta0.size(), G.k, "witness eta0");
    if (!(cfg.delta > 0)) throw NonPositiveScale("witness: delta must be positive");
    if (cfg.flow_nodes < 1) throw NonPositiveArgument("witness: flow_nodes must be positive");
    const double lo = ball_min_form(G.module.sig, cfg.eta0, cfg.delta);
    if (!(lo >= cfg.margin) || !(cfg.margin > 0))
        throw BumpOutsideK("witness: <eta,eta> drops to " + std::to_string(lo) + " on the bump ball");
}

GaussMixture WitnessFunction::slice(const Vec& eta) const {
    const double w = omega(eta);
    if (w == 0.0) return {};
    GaussMixture out = d_eta_average(G_, phi_eta(G_, eta), eta, cfg_.flow_nodes);
    for (auto& t : out.terms) t = testfn::scale(t, w);
    return out;
}

cplx WitnessFunction::value(const Vec& xi, const Vec& eta) const { return testfn::evaluate(slice(eta), xi); }

CVec WitnessFunction::eta_gradient(const Vec& xi, const Vec& eta) const {
    static constexpr double c[3] = {45.0, -9.0, 1.0};
    const double h = 1e-2 * cfg_.delta;
    CVec out(G_.k);
    for (int a = 0; a < G_.k; ++a) {
        cplx acc = 0;
        for (int j = 1; j <= 3; ++j) {
            Vec ep = eta, em = eta;
            ep[a] += j * h;
            em[a] -= j * h;
            acc += c[j - 1] * (value(xi, ep) - value(xi, em));
        }
        out[a] = acc / (60 * h);
    }
    return out;
}

double WitnessFunction::sigma(const Vec& eta) const {
    double s = 0;
    for (const auto& t : slice(eta).terms) {
        Eigen::SelfAdjointEigenSolver<Mat> es(t.quad);
        s = std::max(s, 1.0 / std::sqrt(es.eigenvalues()[0]));
    }
    return s;
}

WitnessFunction::EtaRule WitnessFunction::eta_rule(int radial, int sphere_order) const {
    const int k = G_.k;
    const auto& gl = quad::gauss_legendre(radial);
    const auto sph = quad::sphere_rule(k, sphere_order);
    EtaRule out;
    for (std::size_t i = 0; i < gl.size(); ++i) {
        const double r = 0.5 * (gl.x[i] + 1);
        const double wr = 0.5 * gl.w[i] * std::pow(cfg_.delta, k) * std::pow(r, k - 1);
        for (std::size_t j = 0; j < sph.x.size(); ++j) {
            out.x.push_back(cfg_.eta0 + cfg_.delta * r * sph.x[j]);
            out.w.push_back(wr * sph.w[j]);
        }
    }
    return out;
}

WitnessFunction::Integral WitnessFunction::integral(int radial, int sphere_order) const {
    auto pass = [&](int nr, int so) {
        const auto rule = eta_rule(nr, so);
        double acc = 0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            cplx s = 0;
            for (const auto& t : slice(rule.x[i]).terms) s += testfn::integral(t);
            acc += rule.w[i] * s.real();
        }
        return acc;
    };
    const double coarse = pass(radial, sphere_order);
    const double fine = pass(2 * radial, 2 * sphere_order);
    return {fine, std::abs(fine - coarse)};
}

std::vector<Vec> WitnessFunction::eta_grid() const {
    std::vector<Vec> out;
    for (const Vec& u : unit_grid(G_.k, cfg_.grid.eta_points)) {
        const Vec eta = cfg_.eta0 + cfg_.delta * u;
        if (omega(eta) > 0) out.push_back(eta);
    }
    return out;
}

WitnessFunction build_witness(const WitnessConfig& cfg) { return WitnessFunction(group::make_group(cfg.sig), cfg); }

Certificate certify_kernel_residual(const GroupStructure& G, const WitnessFunction& w) {
    const auto& cfg = w.config();
    const auto xi_unit = unit_grid(2 * G.n, cfg.grid.xi_points);
    Certificate c{};
    c.psi_min = std::numeric_limits<double>::infinity();
    for (const Vec& eta : w.eta_grid()) {
        const GaussMixture S = w.slice(eta);
        const GaussMixture GS = termwise(S, [&](const GaussPoly& t) { return group::apply_g_rs(G, t, eta); });
        const MixtureEval es(S), eg(GS);
        const double R = cfg.grid.xi_sigmas * w.sigma(eta);
        for (const Vec& u : xi_unit) {
            const Vec xi = R * u;
            const cplx p = es(xi);
            c.psi_sup = std::max(c.psi_sup, std::abs(p));
            c.psi_min = std::min(c.psi_min, p.real());
            c.residual = std::max(c.residual, std::abs(eg(xi)));
            ++c.points;
        }
    }
    c.threshold = 1e-8 * c.psi_sup;
    c.passed = c.points > 0 && c.residual <= c.threshold;
    const auto I = w.integral();
    c.integral = I.value;
    c.integral_error = I.est_error;
    c.inverse_at_zero = std::pow(2 * kPi, -(G.n + 0.5 * G.k)) * I.value;
    return c;
}

nlohmann::json nonsolvability_report(const GroupStructure& G, const WitnessFunction& w) {
    if (G.module.sig.r == 0) throw BumpOutsideK("nonsolvability_report: K is empty for r = 0");
    const auto& cfg = w.config();
    const Certificate cert = certify_kernel_residual(G, w);

    // phi(x, z) = c^{-1} (2 pi)^{-k/2} int e^{i z.eta} [F^{-1} psi(., eta)](x) d eta, and Delta_{r,s} acts on
    // each eta-slice through its partial-transform form.
    const int radial = 16, sphere_order = 16;
    const auto rule = w.eta_rule(radial, sphere_order);
    double sx = 0;
    for (const auto& t : w.slice(cfg.eta0).terms) {
        Eigen::SelfAdjointEigenSolver<Mat> es(t.quad);
        sx = std::max(sx, std::sqrt(es.eigenvalues().maxCoeff()));
    }
    const auto x_pts = unit_grid(2 * G.n, 5);
    const auto z_pts = unit_grid(G.k, 5);
    const double X = cfg.grid.xi_sigmas * sx, Z = 3.0 / cfg.delta;

    const long nq = static_cast<long>(rule.x.size()), nx = static_cast<long>(x_pts.size());
    CMat H(nq, nx), D(nq, nx);
    CVec at0(nq);
    for (long i = 0; i < nq; ++i) {
        const Vec& eta = rule.x[i];
        const GaussMixture S = w.slice(eta);
        const GaussMixture Phi = termwise(S, [](const GaussPoly& t) { return testfn::inverse_fourier(t); });
        const GaussMixture DPhi =
            termwise(Phi, [&](const GaussPoly& t) { return group::apply_delta_rs_eta(G, t, eta); });
        const MixtureEval ep(Phi), ed(DPhi);
        at0[i] = ep(Vec::Zero(2 * G.n));
        for (long j = 0; j < nx; ++j) {
            const Vec x = X * x_pts[j];
            H(i, j) = ep(x);
            D(i, j) = ed(x);
        }
    }
    const double pre = std::pow(2 * kPi, -0.5 * G.k);
    cplx c = 0;
    for (long i = 0; i < nq; ++i) c += rule.w[i] * at0[i];
    c *= pre;
    double phi_sup = 0, dphi_sup = 0;
    for (const Vec& zu : z_pts) {
        const Vec z = Z * zu;
        CVec wz(nq);
        for (long i = 0; i < nq; ++i) wz[i] = rule.w[i] * std::exp(cplx(0, z.dot(rule.x[i]))) * pre / c;
        const CVec phi = H.transpose() * wz, dphi = D.transpose() * wz;
        phi_sup = std::max(phi_sup, phi.cwiseAbs().maxCoeff());
        dphi_sup = std::max(dphi_sup, dphi.cwiseAbs().maxCoeff());
    }
    cplx phi0 = 0;
    for (long i = 0; i < nq; ++i) phi0 += rule.w[i] * at0[i];
    phi0 *= pre / c;

    const auto& sig = G.module.sig;
    nlohmann::json j;
    j["signature"] = {sig.r, sig.s, sig.n};
    j["eta0"] = std::vector<double>(cfg.eta0.data(), cfg.eta0.data() + cfg.eta0.size());
    j["delta"] = cfg.delta;
    j["flow_nodes"] = cfg.flow_nodes;
    j["residual"] = cert.residual;
    j["psi_sup"] = cert.psi_sup;
    j["residual_threshold"] = cert.threshold;
    j["residual_passed"] = cert.passed;
    j["grid_points"] = cert.points;
    j["psi_min"] = cert.psi_min;
    j["integral"] = cert.integral;
    j["integral_est_error"] = cert.integral_error;
    j["inverse_transform_at_0"] = cert.inverse_at_zero;
    j["normalization"] = c.real();
    j["phi_at_0"] = phi0.real();
    j["phi_at_0_imag"] = phi0.imag();
    j["phi_sup"] = phi_sup;
    j["delta_phi_sup"] = dphi_sup;
    j["delta_phi_tol"] = 1e-6 * phi_sup;
    j["delta_phi_passed"] = dphi_sup <= 1e-6 * phi_sup;
    j["eta_rule"] = {{"radial", radial}, {"sphere_order", sphere_order}, {"nodes", nq}};
    j["x_box"] = X;
    j["z_box"] = Z;
    return j;
}

}  // namespace pseudoh::witness
