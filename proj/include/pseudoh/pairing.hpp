#pragma once

#include <utility>
#include <vector>

#include "pseudoh/clifford.hpp"
#include "pseudoh/kernel.hpp"
#include "pseudoh/testfn.hpp"

namespace pseudoh::pairing {

using clifford::Signature;
using kernel::KernelSelector;
using testfn::GaussPoly;

struct PairingResult {
    cplx value = 0;
    double est_error = 0;  // |value - value at the coarser budget|
    std::vector<int> node_budget;
};

// Node counts for one pass. The reported value comes from refine(b), the error estimate from
// comparing it against b itself.
struct Budget {
    int per_panel = 8;     // Gauss-Legendre nodes per panel on every composite axis
    int sphere_order = 8;  // circle trapezoid points / sphere rule order
    double tol = 1e-8;     // relative tolerance of adaptive inner integrals
    Budget refine() const { return {per_panel + per_panel / 2, sphere_order + 4, tol * 1e-2}; }
};

// int q^{lambda,mu}(xi, theta) [F phi](xi, theta) d(xi, theta). The xi-integral is closed form for
// every (rho, theta); rho is adaptive in rho = sin(angle); theta is radial times sphere.
PairingResult pair_K(const Signature& sig, const GaussPoly& phi, const KernelSelector& sel, const Budget& b = {});

// -(4 pi i)^{-n} int_0^inf sinh^{-n} t int d_z^{n-1} phi(x, -P(x) coth(t)/4) dx dt on R^{2n+1}, n even;
// equals pair_K with the heaviside selector. The x-integral is taken in cone coordinates where P is a
// coordinate, and t = artanh(tau).
PairingResult pair_MR_heisenberg(const GaussPoly& phi, const Budget& b = {});

// Representation through 1/P^{n-1} applied to phi_t, integrated over t = artanh(T).
PairingResult pair_second_form(const Signature& sig, const GaussPoly& phi, const Budget& b = {});

// (LHS, RHS) for the n = 2 candidate kernel -(2 pi)^{-(2+s/2)} (P - i0)^{-1}:
// LHS its pairing with Delta phi, RHS = phi(0) + (2 pi)^{-s/2} int |theta|^2/4 [F phi](0, theta) dtheta.
std::pair<cplx, cplx> pseudo_pair_n2(const Signature& sig, const GaussPoly& phi, const Budget& b = {});

// Restriction of f to the affine slice where the axes `fixed` take `values`.
GaussPoly slice(const GaussPoly& f, const std::vector<int>& fixed, const Vec& values);

}  // namespace pseudoh::pairing
