#pragma once

#include <utility>

#include "pseudoh/clifford.hpp"
#include "pseudoh/testfn.hpp"

namespace pseudoh::group {

using clifford::AdmissibleModule;
using clifford::Signature;
using testfn::GaussPoly;

struct GroupStructure {
    AdmissibleModule module;
    std::vector<Mat> omega_gen;  // Omega_k = 1/2 tau rho(Z_k)^T
    int n = 0;                   // dim V = 2n
    int k = 0;                   // r + s
    int dim() const { return 2 * n + k; }
};

struct GroupPoint {
    Vec x;
    Vec z;
};

GroupStructure make_group(const AdmissibleModule& m);
GroupStructure make_group(const Signature& sig);

Mat omega(const GroupStructure& G, const Vec& eta);
double eta_norm2(const GroupStructure& G, const Vec& eta);  // <eta,eta>_{r,s}

GroupPoint group_mul(const GroupStructure& G, const GroupPoint& p, const GroupPoint& q);
GroupPoint group_inv(const GroupPoint& p);
GroupPoint dilate(double rho_scale, const GroupPoint& p);

// g * (y, w) = M (y, w) + c
std::pair<Mat, Vec> left_translation_map(const GroupStructure& G, const GroupPoint& g);
GaussPoly left_translate(const GroupStructure& G, const GaussPoly& phi, const GroupPoint& g);  // phi o L_g
GaussPoly dilate(const GroupStructure& G, const GaussPoly& phi, double rho_scale);             // phi o delta_rho

// X_j = d_{x_j} + sum_k (Omega_k^T x)_j d_{z_k}
GaussPoly apply_field(const GroupStructure& G, const GaussPoly& phi, int j);
// sum_{j<n} X_j^2 - sum_{j>=n} X_j^2
GaussPoly apply_delta_rs(const GroupStructure& G, const GaussPoly& phi);

// Same operator after the partial Fourier transform in z; phi lives on R^{2n}.
GaussPoly apply_delta_rs_eta(const GroupStructure& G, const GaussPoly& phi, const Vec& eta);

// Value, gradient and Hessian in xi of a function at one point.
struct Jet {
    cplx value;
    CVec grad;
    CMat hess;
};

// -P(xi) psi + (<eta,eta>/4) L psi + i xi^T rho(eta)^T grad psi, L the flat ultra-hyperbolic operator
cplx apply_g_rs(const GroupStructure& G, const Jet& psi, const Vec& xi, const Vec& eta);
// Same operator applied exactly to a function of xi for fixed eta.
GaussPoly apply_g_rs(const GroupStructure& G, const GaussPoly& psi, const Vec& eta);

enum class Side { Left, Right };
// Left: exp(t Omega(eta) tau); Right: exp(t tau Omega(eta)).
Mat exp_flow(const GroupStructure& G, const Vec& eta, double t, Side side = Side::Left);

}  // namespace pseudoh::group
