#include "pseudoh/group.hpp"

#include <cmath>

namespace pseudoh::group {

using namespace testfn;

GroupStructure make_group(const AdmissibleModule& m) {
    GroupStructure G;
    G.module = m;
    G.n = m.sig.n;
    G.k = m.sig.r + m.sig.s;
    for (const auto& r : m.rho_gen) G.omega_gen.push_back(0.5 * m.tau * r.transpose());
    return G;
}

GroupStructure make_group(const Signature& sig) { return make_group(clifford::build_module(sig)); }

Mat omega(const GroupStructure& G, const Vec& eta) {
    require_dim(eta.size(), G.k, "omega");
    Mat O = Mat::Zero(2 * G.n, 2 * G.n);
    for (int k = 0; k < G.k; ++k) O += eta[k] * G.omega_gen[k];
    return O;
}

double eta_norm2(const GroupStructure& G, const Vec& eta) {
    require_dim(eta.size(), G.k, "eta");
    return clifford::form_rs(G.module.sig.r, G.module.sig.s, eta, eta);
}

GroupPoint group_mul(const GroupStructure& G, const GroupPoint& p, const GroupPoint& q) {
    require_dim(p.x.size(), 2 * G.n, "group_mul x");
    require_dim(q.x.size(), 2 * G.n, "group_mul y");
    require_dim(p.z.size(), G.k, "group_mul z");
    require_dim(q.z.size(), G.k, "group_mul w");
    GroupPoint out{p.x + q.x, p.z + q.z};
    for (int k = 0; k < G.k; ++k) out.z[k] += p.x.dot(G.omega_gen[k] * q.x);
    return out;
}

GroupPoint group_inv(const GroupPoint& p) { return {-p.x, -p.z}; }

GroupPoint dilate(double rho_scale, const GroupPoint& p) {
    if (!(rho_scale > 0)) throw NonPositiveScale("dilate: scale must be positive");
    return {rho_scale * p.x, rho_scale * rho_scale * p.z};
}

std::pair<Mat, Vec> left_translation_map(const GroupStructure& G, const GroupPoint& g) {
    const int m = 2 * G.n;
    Mat M = Mat::Identity(G.dim(), G.dim());
    for (int k = 0; k < G.k; ++k) M.block(m + k, 0, 1, m) = g.x.transpose() * G.omega_gen[k];
    Vec c(G.dim());
    c << g.x, g.z;
    return {M, c};
}

GaussPoly left_translate(const GroupStructure& G, const GaussPoly& phi, const GroupPoint& g) {
    require_dim(phi.dim, G.dim(), "left_translate");
    const auto [M, c] = left_translation_map(G, g);
    return precompose_affine(phi, M, c);
}

GaussPoly dilate(const GroupStructure& G, const GaussPoly& phi, double rho_scale) {
    if (!(rho_scale > 0)) throw NonPositiveScale("dilate: scale must be positive");
    require_dim(phi.dim, G.dim(), "dilate");
    Vec d(G.dim());
    d.head(2 * G.n).setConstant(rho_scale);
    d.tail(G.k).setConstant(rho_scale * rho_scale);
    return precompose_affine(phi, d.asDiagonal().toDenseMatrix(), Vec::Zero(G.dim()));
}

namespace {

GaussPoly combine(GaussPoly acc, const GaussPoly& term, cplx a) {
    poly_axpy(acc.poly, term.poly, a);
    return acc;
}

}  // namespace

GaussPoly apply_field(const GroupStructure& G, const GaussPoly& phi, int j) {
    require_dim(phi.dim, G.dim(), "apply_field");
    const int m = 2 * G.n;
    GaussPoly out = differentiate(phi, j);
    for (int k = 0; k < G.k; ++k) {
        const GaussPoly dz = differentiate(phi, m + k);
        for (int i = 0; i < m; ++i) {
            const double c = G.omega_gen[k](i, j);
            if (c != 0.0) out = combine(out, multiply_coord(dz, i), c);
        }
    }
    poly_prune(out.poly);
    return out;
}

GaussPoly apply_delta_rs(const GroupStructure& G, const GaussPoly& phi) {
    require_dim(phi.dim, G.dim(), "apply_delta_rs");
    GaussPoly out = phi;
    out.poly.clear();
    for (int j = 0; j < 2 * G.n; ++j) {
        const GaussPoly xx = apply_field(G, apply_field(G, phi, j), j);
        out = combine(out, xx, j < G.n ? 1.0 : -1.0);
    }
    poly_prune(out.poly);
    return out;
}

GaussPoly apply_delta_rs_eta(const GroupStructure& G, const GaussPoly& phi, const Vec& eta) {
    require_dim(phi.dim, 2 * G.n, "apply_delta_rs_eta");
    const Mat O = omega(G, eta);
    auto field = [&](const GaussPoly& f, int j) {
        GaussPoly out = differentiate(f, j);
        for (int i = 0; i < 2 * G.n; ++i)
            if (O(i, j) != 0.0) out = combine(out, multiply_coord(f, i), cplx(0, O(i, j)));
        return out;
    };
    GaussPoly out = phi;
    out.poly.clear();
    for (int j = 0; j < 2 * G.n; ++j) out = combine(out, field(field(phi, j), j), j < G.n ? 1.0 : -1.0);
    poly_prune(out.poly);
    return out;
}

cplx apply_g_rs(const GroupStructure& G, const Jet& psi, const Vec& xi, const Vec& eta) {
    require_dim(xi.size(), 2 * G.n, "apply_g_rs xi");
    const Mat R = clifford::rho(G.module, eta);
    cplx lap = 0;
    for (int j = 0; j < 2 * G.n; ++j) lap += (j < G.n ? 1.0 : -1.0) * psi.hess(j, j);
    const Vec v = R * xi;
    cplx drift = 0;
    for (int j = 0; j < 2 * G.n; ++j) drift += v[j] * psi.grad[j];
    return -quad_p(xi) * psi.value + 0.25 * eta_norm2(G, eta) * lap + cplx(0, 1) * drift;
}

GaussPoly apply_g_rs(const GroupStructure& G, const GaussPoly& psi, const Vec& eta) {
    require_dim(psi.dim, 2 * G.n, "apply_g_rs");
    const int m = 2 * G.n;
    const Mat R = clifford::rho(G.module, eta);
    const double q = eta_norm2(G, eta);
    GaussPoly out = psi;
    out.poly.clear();
    for (int j = 0; j < m; ++j) {
        const double sg = j < G.n ? 1.0 : -1.0;
        out = combine(out, multiply_coord(multiply_coord(psi, j), j), -sg);
        out = combine(out, differentiate(differentiate(psi, j), j), 0.25 * q * sg);
        const GaussPoly d = differentiate(psi, j);
        for (int i = 0; i < m; ++i)
            if (R(j, i) != 0.0) out = combine(out, multiply_coord(d, i), cplx(0, R(j, i)));
    }
    poly_prune(out.poly);
    return out;
}

Mat exp_flow(const GroupStructure& G, const Vec& eta, double t, Side side) {
    const Mat O = omega(G, eta);
    const Mat& tau = G.module.tau;
    const Mat A = side == Side::Left ? Mat(O * tau) : Mat(tau * O);
    // A^2 = -(<eta,eta>/4) I
    const double q = eta_norm2(G, eta);
    const Mat I = Mat::Identity(A.rows(), A.cols());
    const double w = 0.5 * std::sqrt(std::abs(q));
    const double tol = 1e-14 * (1 + eta.squaredNorm());
    if (std::abs(q) <= tol) return I + t * A;
    if (q > 0) return std::cos(w * t) * I + (std::sin(w * t) / w) * A;
    return std::cosh(w * t) * I + (std::sinh(w * t) / w) * A;
}

}  // namespace pseudoh::group
