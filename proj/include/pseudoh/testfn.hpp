#pragma once

#include <map>
#include <vector>

#include <json.hpp>

#include "pseudoh/core.hpp"

namespace pseudoh::testfn {

using MultiIndex = std::vector<int>;
using Poly = std::map<MultiIndex, cplx>;

Poly poly_const(int dim, cplx c);
void poly_axpy(Poly& acc, const Poly& p, cplx a = 1.0);
Poly poly_scale(const Poly& p, cplx a);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_diff(const Poly& p, int axis);
Poly poly_mul_coord(const Poly& p, int axis);
// p(M y + e) as a polynomial in y (M is dim x k).
Poly poly_substitute(const Poly& p, const Mat& M, const Vec& e);
cplx poly_eval(const Poly& p, const Vec& y);
int poly_degree(const Poly& p);
void poly_prune(Poly& p, double tol = 0.0);

// p(u-b) exp(-1/2 (u-b)^T A (u-b) + i w^T (u-b)),  A real SPD
struct GaussPoly {
    int dim = 0;
    Mat quad;
    Vec shift;
    Vec freq;
    Poly poly;
};

struct GaussMixture {
    std::vector<GaussPoly> terms;
};

GaussPoly gaussian(const Mat& A, const Vec& center = Vec(), cplx amplitude = 1.0);
GaussPoly isotropic_gaussian(int dim, double a = 1.0);

cplx evaluate(const GaussPoly& f, const Vec& u);
cplx evaluate(const GaussMixture& f, const Vec& u);

GaussPoly differentiate(const GaussPoly& f, int axis);
GaussPoly multiply_coord(const GaussPoly& f, int axis);
GaussPoly multiply_monomial(const GaussPoly& f, const MultiIndex& alpha);
GaussPoly scale(const GaussPoly& f, cplx a);
// Same Gaussian part required.
GaussPoly add(const GaussPoly& f, const GaussPoly& g, cplx a = 1.0, cplx b = 1.0);
bool same_gaussian(const GaussPoly& f, const GaussPoly& g);

// u -> f(M u + c); M is dim x k with full column rank.
GaussPoly precompose_affine(const GaussPoly& f, const Mat& M, const Vec& c);

// Unitary transform (2 pi)^{-d/2} int f(u) e^{-i u.xi} du.
GaussPoly fourier(const GaussPoly& f);
GaussPoly inverse_fourier(const GaussPoly& f);
// Transform in the listed axes only; A must not couple them to the rest.
GaussPoly fourier_axes(const GaussPoly& f, const std::vector<int>& axes, bool inverse = false);
GaussMixture fourier(const GaussMixture& f);

GaussPoly laplacian_power(const GaussPoly& f, int l);

// Nested adaptive Gauss-Kronrod for dim <= 2; quasi-Monte Carlo (Halton + Box-Muller) in the
// whitened frame above that, stopping when two successive doublings agree to rel_tol.
struct L1Options {
    double rel_tol = 1e-8;
    long max_samples = 1L << 22;
};
double l1_norm(const GaussPoly& f, const L1Options& opt = {});

nlohmann::json to_json(const GaussPoly& f);
GaussPoly from_json(const nlohmann::json& j);

// Fast repeated pointwise evaluation.
class Evaluator {
public:
    explicit Evaluator(const GaussPoly& f);
    cplx operator()(const Vec& u) const;
    cplx operator()(const double* u) const;
    int dim() const { return dim_; }

private:
    int dim_;
    int maxdeg_;
    Mat quad_;
    Vec shift_, freq_;
    std::vector<int> exps_;
    std::vector<cplx> coef_;
};

// int f(u_F, u_R) exp(i c u_F^T T u_F) du_F over the free axes F with the remaining axes held fixed.
// Closed form: the Gaussian part is diagonalised jointly with T once, each c costs one moment sweep.
class PhaseIntegral {
public:
    PhaseIntegral(const GaussPoly& f, const std::vector<int>& free_axes, const Vec& fixed_values, const Mat& T);
    cplx operator()(cplx c) const;
    // Move the fixed axes; much cheaper than constructing a new instance.
    void rebind(const Vec& fixed_values);
    int free_dim() const { return m_; }

private:
    struct Term {
        int beta;
        std::vector<int> rexp;
        cplx coef;
    };
    int m_;
    std::vector<int> R_;
    Mat QFR_, QRR_;
    Vec freqF_, shiftR_, freqR_;
    Vec d_;
    Mat V_;
    CVec L0_;
    cplx C0_;
    Vec Tb_;
    double Pb_;
    double logdetQ_;
    int maxdeg_;
    std::vector<Term> terms_;
    CMat table_;  // substituted free monomials over the w-monomial basis
    std::vector<int> exps_;
    std::vector<cplx> coef_;
};

// int f over R^dim, exact.
cplx integral(const GaussPoly& f);

}  // namespace pseudoh::testfn
