#pragma once

#include <vector>

#include <json.hpp>

#include "pseudoh/group.hpp"
#include "pseudoh/testfn.hpp"

namespace pseudoh::witness {

using clifford::Signature;
using group::GroupStructure;
using testfn::GaussMixture;
using testfn::GaussPoly;

// Tensor grid in xi over [-xi_sigmas*sigma, xi_sigmas*sigma]^{2n}, and in eta over the bounding box of
// the bump ball (points outside the ball are skipped).
struct GridSpec {
    int xi_points = 9;
    double xi_sigmas = 6.0;
    int eta_points = 5;
};

struct WitnessConfig {
    Signature sig;
    Vec eta0;
    double delta = 0.5;
    int flow_nodes = 64;
    GridSpec grid;
    double margin = 1e-6;  // required lower bound of <eta,eta> on the closed ball
};

// exp(1 - 1/(1 - |eta-eta0|^2/delta^2)) inside the ball, 0 outside.
double bump(const Vec& eta, const Vec& eta0, double delta);

// min of <eta,eta>_{r,s} over the closed ball B(eta0, delta).
double ball_min_form(const Signature& sig, const Vec& eta0, double delta);

// -P f + (<eta,eta>/4) L f
GaussMixture a_eta_apply(const GroupStructure& G, const GaussMixture& f, const Vec& eta);
// -2i <Omega(eta) tau xi, grad f>
GaussMixture b_eta_apply(const GroupStructure& G, const GaussMixture& f, const Vec& eta);

double flow_period(const GroupStructure& G, const Vec& eta);  // 4 pi / |eta|_{r,s}
GaussPoly phi_eta(const GroupStructure& G, const Vec& eta);   // exp(-|xi|^2 / |eta|_{r,s})

// sum_j (q/m) phi(exp(t_j Omega(eta) tau) xi), t_j = (j + offset) q/m.
GaussMixture d_eta_average(const GroupStructure& G, const GaussPoly& phi, const Vec& eta, int m,
                           double offset = 0.0);

// psi(xi, eta) = bump(eta) [D_eta phi_eta](xi). Immutable after construction.
class WitnessFunction {
public:
    WitnessFunction(const GroupStructure& G, const WitnessConfig& cfg);

    const WitnessConfig& config() const { return cfg_; }
    const GroupStructure& group() const { return G_; }

    double omega(const Vec& eta) const { return bump(eta, cfg_.eta0, cfg_.delta); }
    // psi(., eta) as a mixture; empty outside the bump support.
    GaussMixture slice(const Vec& eta) const;
    cplx value(const Vec& xi, const Vec& eta) const;
    // 6th-order central differences with step 1e-2 delta.
    CVec eta_gradient(const Vec& xi, const Vec& eta) const;
    // largest standard deviation of the Gaussian terms of slice(eta)
    double sigma(const Vec& eta) const;

    // int psi: the xi-integral is exact, the eta-integral Gauss-Legendre in the radius times a sphere rule.
    struct Integral {
        double value;
        double est_error;
    };
    Integral integral(int radial = 32, int sphere_order = 16) const;

    // Nodes and weights of the same eta rule over the bump ball.
    struct EtaRule {
        std::vector<Vec> x;
        std::vector<double> w;
    };
    EtaRule eta_rule(int radial, int sphere_order) const;
    std::vector<Vec> eta_grid() const;

private:
    GroupStructure G_;
    WitnessConfig cfg_;
};

WitnessFunction build_witness(const WitnessConfig& cfg);

struct Certificate {
    double residual;       // max over the grid of |G_{r,s} psi|
    double psi_sup;        // max over the grid of |psi|
    double threshold;      // 1e-8 psi_sup
    bool passed;
    double integral;       // int psi
    double integral_error;
    double inverse_at_zero;  // [F^{-1} psi](0) = (2 pi)^{-(n+(r+s)/2)} int psi
    double psi_min;        // min of psi over the grid, >= 0
    long points;
};
Certificate certify_kernel_residual(const GroupStructure& G, const WitnessFunction& w);

// phi = c^{-1} F^{-1} psi with c = [F^{-1} psi](0); phi(0) and sup |Delta_{r,s} phi| on an (x, z) grid.
nlohmann::json nonsolvability_report(const GroupStructure& G, const WitnessFunction& w);

}  // namespace pseudoh::witness
