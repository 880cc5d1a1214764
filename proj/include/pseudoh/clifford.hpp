#pragma once

#include <vector>

#include <json.hpp>

#include "pseudoh/core.hpp"

namespace pseudoh::clifford {

struct Signature {
    int r = 0;
    int s = 1;
    int n = 1;
    bool operator==(const Signature&) const = default;
};

struct AdmissibleModule {
    Signature sig;
    std::vector<Mat> rho_gen;  // rho(Z_k), k = 0..r+s-1; the first r are positive
    Mat tau;
    std::vector<int> labels;  // +1 / -1 per basis vector
};

struct ValidationReport {
    double gl1 = 0;         // rho^T tau rho - <z,z> tau
    double gl2 = 0;         // tau rho + (tau rho)^T
    double gl3 = 0;         // rho^2 + <z,z> I
    double anticommute = 0; // rho_k rho_l + rho_l rho_k + 2 <Z_k,Z_l> I
    double tau_skew = 0;
    double tol = 1e-12;
    double max_residual() const;
    bool pass() const { return max_residual() <= tol; }
};

// <x,y>_{r,s}
double form_rs(int r, int s, const Vec& x, const Vec& y);

std::vector<Signature> catalog();
bool in_catalog(const Signature& sig);
AdmissibleModule build_module(const Signature& sig);
ValidationReport validate_module(const AdmissibleModule& m, double tol = 1e-12, int random_probes = 100,
                                 unsigned seed = 7);
Mat rho(const AdmissibleModule& m, const Vec& eta);

nlohmann::json to_json(const AdmissibleModule& m);
// Re-validates; throws Error if the stored matrices fail validation.
AdmissibleModule from_json(const nlohmann::json& j);

}  // namespace pseudoh::clifford
