#include "pseudoh/testfn.hpp"

#include <algorithm>
#include <cmath>

#include "pseudoh/quadrature.hpp"

namespace pseudoh::testfn {

// ---------------------------------------------------------------- polynomials

Poly poly_const(int dim, cplx c) {
    Poly p;
    if (c != 0.0) p[MultiIndex(dim, 0)] = c;
    return p;
}

void poly_axpy(Poly& acc, const Poly& p, cplx a) {
    if (a == 0.0) return;
    for (const auto& [k, v] : p) acc[k] += a * v;
}

Poly poly_scale(const Poly& p, cplx a) {
    Poly out;
    if (a == 0.0) return out;
    for (const auto& [k, v] : p) out[k] = a * v;
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            MultiIndex k(ka.size());
            for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
            out[k] += va * vb;
        }
    return out;
}

Poly poly_diff(const Poly& p, int axis) {
    Poly out;
    for (const auto& [k, v] : p) {
        if (k[axis] == 0) continue;
        MultiIndex kk = k;
        kk[axis] -= 1;
        out[kk] += v * static_cast<double>(k[axis]);
    }
    return out;
}

Poly poly_mul_coord(const Poly& p, int axis) {
    Poly out;
    for (const auto& [k, v] : p) {
        MultiIndex kk = k;
        kk[axis] += 1;
        out[kk] += v;
    }
    return out;
}

Poly poly_substitute(const Poly& p, const Mat& M, const Vec& e) {
    const int d = static_cast<int>(M.rows()), k = static_cast<int>(M.cols());
    std::vector<std::vector<Poly>> pw(d);
    auto power = [&](int i, int a) -> const Poly& {
        auto& v = pw[i];
        if (v.empty()) {
            v.push_back(poly_const(k, 1.0));
        }
        while (static_cast<int>(v.size()) <= a) {
            Poly lin;
            if (e[i] != 0.0) lin[MultiIndex(k, 0)] = e[i];
            for (int j = 0; j < k; ++j)
                if (M(i, j) != 0.0) {
                    MultiIndex m(k, 0);
                    m[j] = 1;
                    lin[m] += M(i, j);
                }
            v.push_back(poly_mul(v.back(), lin));
        }
        return v[a];
    };
    Poly out;
    for (const auto& [mi, c] : p) {
        Poly term = poly_const(k, c);
        for (int i = 0; i < d; ++i)
            if (mi[i] > 0) term = poly_mul(term, power(i, mi[i]));
        poly_axpy(out, term);
    }
    return out;
}

cplx poly_eval(const Poly& p, const Vec& y) {
    cplx acc = 0;
    for (const auto& [k, v] : p) {
        double m = 1;
        for (std::size_t i = 0; i < k.size(); ++i)
            for (int a = 0; a < k[i]; ++a) m *= y[i];
        acc += v * m;
    }
    return acc;
}

int poly_degree(const Poly& p) {
    int d = -1;
    for (const auto& [k, v] : p) {
        int s = 0;
        for (int a : k) s += a;
        d = std::max(d, s);
    }
    return d;
}

void poly_prune(Poly& p, double tol) {
    for (auto it = p.begin(); it != p.end();) {
        if (std::abs(it->second) <= tol)
            it = p.erase(it);
        else
            ++it;
    }
}

// ---------------------------------------------------------------- GaussPoly basics

GaussPoly gaussian(const Mat& A, const Vec& center, cplx amplitude) {
    GaussPoly f;
    f.dim = static_cast<int>(A.rows());
    if (A.cols() != A.rows()) throw DimensionMismatch("gaussian: quadratic form must be square");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()));
    if (es.eigenvalues().minCoeff() <= 0) throw NonSPDQuadraticForm("gaussian: quadratic form is not positive definite");
    f.quad = 0.5 * (A + A.transpose());
    f.shift = center.size() ? center : Vec::Zero(f.dim);
    require_dim(f.shift.size(), f.dim, "gaussian center");
    f.freq = Vec::Zero(f.dim);
    f.poly = poly_const(f.dim, amplitude);
    return f;
}

GaussPoly isotropic_gaussian(int dim, double a) { return gaussian(a * Mat::Identity(dim, dim)); }

cplx evaluate(const GaussPoly& f, const Vec& u) {
    require_dim(u.size(), f.dim, "evaluate");
    const Vec y = u - f.shift;
    const double q = y.dot(f.quad * y);
    return poly_eval(f.poly, y) * std::exp(cplx(-0.5 * q, f.freq.dot(y)));
}

cplx evaluate(const GaussMixture& f, const Vec& u) {
    cplx acc = 0;
    for (const auto& t : f.terms) acc += evaluate(t, u);
    return acc;
}

GaussPoly differentiate(const GaussPoly& f, int axis) {
    if (axis < 0 || axis >= f.dim) throw DimensionMismatch("differentiate: axis out of range");
    // d/du_a [p e^{-yAy/2 + i w.y}] = (dp - p (A y)_a + i w_a p) e^{...}
    GaussPoly g = f;
    g.poly = poly_diff(f.poly, axis);
    poly_axpy(g.poly, f.poly, cplx(0, f.freq[axis]));
    for (int j = 0; j < f.dim; ++j)
        if (f.quad(axis, j) != 0.0) poly_axpy(g.poly, poly_mul_coord(f.poly, j), -f.quad(axis, j));
    poly_prune(g.poly);
    return g;
}

GaussPoly multiply_coord(const GaussPoly& f, int axis) {
    if (axis < 0 || axis >= f.dim) throw DimensionMismatch("multiply_coord: axis out of range");
    GaussPoly g = f;
    g.poly = poly_mul_coord(f.poly, axis);
    poly_axpy(g.poly, f.poly, f.shift[axis]);
    poly_prune(g.poly);
    return g;
}

GaussPoly multiply_monomial(const GaussPoly& f, const MultiIndex& alpha) {
    require_dim(static_cast<long>(alpha.size()), f.dim, "multiply_monomial");
    GaussPoly g = f;
    for (int i = 0; i < f.dim; ++i)
        for (int a = 0; a < alpha[i]; ++a) g = multiply_coord(g, i);
    return g;
}

GaussPoly scale(const GaussPoly& f, cplx a) {
    GaussPoly g = f;
    g.poly = poly_scale(f.poly, a);
    return g;
}

bool same_gaussian(const GaussPoly& f, const GaussPoly& g) {
    return f.dim == g.dim && f.quad == g.quad && f.shift == g.shift && f.freq == g.freq;
}

GaussPoly add(const GaussPoly& f, const GaussPoly& g, cplx a, cplx b) {
    if (!same_gaussian(f, g)) throw Error("add: Gaussian parts differ; use a GaussMixture");
    GaussPoly h = f;
    h.poly = poly_scale(f.poly, a);
    poly_axpy(h.poly, g.poly, b);
    poly_prune(h.poly);
    return h;
}

GaussPoly precompose_affine(const GaussPoly& f, const Mat& M, const Vec& c) {
    require_dim(M.rows(), f.dim, "precompose_affine rows");
    require_dim(c.size(), f.dim, "precompose_affine offset");
    const int k = static_cast<int>(M.cols());
    const Mat Ap = M.transpose() * f.quad * M;
    Eigen::LLT<Mat> llt(Ap);
    if (llt.info() != Eigen::Success || Eigen::FullPivLU<Mat>(M).rank() < k)
        throw SingularAffineMap("precompose_affine: map is not injective");
    const Vec d0 = c - f.shift;
    const Vec u0 = -llt.solve(M.transpose() * (f.quad * d0));
    const Vec e = M * u0 + d0;
    GaussPoly g;
    g.dim = k;
    g.quad = 0.5 * (Ap + Ap.transpose());
    g.shift = u0;
    g.freq = M.transpose() * f.freq;
    const cplx k0 = std::exp(cplx(-0.5 * e.dot(f.quad * e), f.freq.dot(e)));
    g.poly = poly_scale(poly_substitute(f.poly, M, e), k0);
    poly_prune(g.poly);
    return g;
}

// ---------------------------------------------------------------- Fourier

namespace {

// R_alpha with (i d)^alpha e^{-k^T B k / 2} = R_alpha(k) e^{-k^T B k / 2}
struct HermiteMemo {
    Mat B;
    int m;
    std::map<MultiIndex, Poly> memo;
    const Poly& get(const MultiIndex& a) {
        auto it = memo.find(a);
        if (it != memo.end()) return it->second;
        int j = -1;
        for (int i = 0; i < m; ++i)
            if (a[i] > 0) {
                j = i;
                break;
            }
        Poly out;
        if (j < 0) {
            out = poly_const(m, 1.0);
        } else {
            MultiIndex prev = a;
            prev[j] -= 1;
            const Poly p = get(prev);
            out = poly_diff(p, j);
            for (int l = 0; l < m; ++l)
                if (B(j, l) != 0.0) poly_axpy(out, poly_mul_coord(p, l), -B(j, l));
            out = poly_scale(out, cplx(0, 1));
        }
        return memo.emplace(a, std::move(out)).first->second;
    }
};

}  // namespace

GaussPoly fourier_axes(const GaussPoly& f, const std::vector<int>& axes, bool inverse) {
    const int d = f.dim;
    std::vector<int> inS(d, 0);
    for (int a : axes) {
        if (a < 0 || a >= d) throw DimensionMismatch("fourier_axes: axis out of range");
        inS[a] = 1;
    }
    std::vector<int> S, R;
    for (int i = 0; i < d; ++i) (inS[i] ? S : R).push_back(i);
    const int m = static_cast<int>(S.size());
    double coupling = 0;
    for (int i : S)
        for (int j : R) coupling = std::max(coupling, std::abs(f.quad(i, j)));
    if (coupling > 1e-14 * f.quad.cwiseAbs().maxCoeff())
        throw NonSeparableQuadraticForm("fourier_axes: quadratic form couples transformed and untouched axes");

    Mat Ass(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) Ass(i, j) = f.quad(S[i], S[j]);
    Eigen::LLT<Mat> llt(Ass);
    if (llt.info() != Eigen::Success) throw NonSPDQuadraticForm("fourier: quadratic form is not positive definite");
    Mat B = llt.solve(Mat::Identity(m, m));
    B = 0.5 * (B + B.transpose());
    double logdet = 0;
    for (int i = 0; i < m; ++i) logdet += 2 * std::log(llt.matrixL()(i, i));

    double bw = 0;
    for (int i : S) bw += f.shift[i] * f.freq[i];
    const cplx pref = std::exp(cplx(-0.5 * logdet, -bw));

    HermiteMemo hm{B, m, {}};
    GaussPoly g;
    g.dim = d;
    g.quad = f.quad;
    g.shift = f.shift;
    g.freq = f.freq;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) g.quad(S[i], S[j]) = B(i, j);
        g.shift[S[i]] = f.freq[S[i]];
        g.freq[S[i]] = -f.shift[S[i]];
    }
    for (const auto& [mi, c] : f.poly) {
        MultiIndex aS(m);
        for (int i = 0; i < m; ++i) aS[i] = mi[S[i]];
        const Poly& r = hm.get(aS);
        for (const auto& [ki, v] : r) {
            MultiIndex full(d, 0);
            for (int i = 0; i < m; ++i) full[S[i]] = ki[i];
            for (int j : R) full[j] = mi[j];
            g.poly[full] += pref * c * v;
        }
    }
    poly_prune(g.poly);
    if (inverse) {
        Mat refl = Mat::Identity(d, d);
        for (int i : S) refl(i, i) = -1;
        g = precompose_affine(g, refl, Vec::Zero(d));
    }
    return g;
}

GaussPoly fourier(const GaussPoly& f) {
    std::vector<int> all(f.dim);
    for (int i = 0; i < f.dim; ++i) all[i] = i;
    return fourier_axes(f, all, false);
}

GaussPoly inverse_fourier(const GaussPoly& f) {
    std::vector<int> all(f.dim);
    for (int i = 0; i < f.dim; ++i) all[i] = i;
    return fourier_axes(f, all, true);
}

GaussMixture fourier(const GaussMixture& f) {
    GaussMixture g;
    for (const auto& t : f.terms) g.terms.push_back(fourier(t));
    return g;
}

GaussPoly laplacian_power(const GaussPoly& f, int l) {
    GaussPoly g = f;
    for (int k = 0; k < l; ++k) {
        GaussPoly acc = g;
        acc.poly.clear();
        for (int j = 0; j < f.dim; ++j) poly_axpy(acc.poly, differentiate(differentiate(g, j), j).poly);
        poly_prune(acc.poly);
        g = acc;
    }
    return g;
}

// ---------------------------------------------------------------- fast evaluation

Evaluator::Evaluator(const GaussPoly& f)
    : dim_(f.dim), maxdeg_(0), quad_(f.quad), shift_(f.shift), freq_(f.freq) {
    for (const auto& [k, v] : f.poly) {
        for (int a : k) {
            exps_.push_back(a);
            maxdeg_ = std::max(maxdeg_, a);
        }
        coef_.push_back(v);
    }
    if (dim_ > 32 || maxdeg_ > 23) throw DimensionMismatch("Evaluator: at most 32 axes and degree 23 per axis");
}

cplx Evaluator::operator()(const Vec& u) const { return (*this)(u.data()); }

cplx Evaluator::operator()(const double* u) const {
    double y[32];
    double pw[32][24];
    for (int i = 0; i < dim_; ++i) {
        y[i] = u[i] - shift_[i];
        pw[i][0] = 1;
        for (int a = 1; a <= maxdeg_; ++a) pw[i][a] = pw[i][a - 1] * y[i];
    }
    double q = 0, ph = 0;
    for (int i = 0; i < dim_; ++i) {
        double row = 0;
        for (int j = 0; j < dim_; ++j) row += quad_(i, j) * y[j];
        q += y[i] * row;
        ph += freq_[i] * y[i];
    }
    cplx acc = 0;
    const int* e = exps_.data();
    for (std::size_t t = 0; t < coef_.size(); ++t, e += dim_) {
        double m = 1;
        for (int i = 0; i < dim_; ++i) m *= pw[i][e[i]];
        acc += coef_[t] * m;
    }
    return acc * std::exp(cplx(-0.5 * q, ph));
}

// ---------------------------------------------------------------- exact Gaussian integrals

PhaseIntegral::PhaseIntegral(const GaussPoly& f, const std::vector<int>& free_axes, const Vec& fixed_values,
                             const Mat& T) {
    const int d = f.dim;
    m_ = static_cast<int>(free_axes.size());
    std::vector<int> inF(d, 0);
    for (int a : free_axes) inF[a] = 1;
    for (int i = 0; i < d; ++i)
        if (!inF[i]) R_.push_back(i);
    const int nr = static_cast<int>(R_.size());
    require_dim(T.rows(), m_, "PhaseIntegral phase matrix");

    Mat Q(m_, m_);
    QFR_.resize(m_, nr);
    QRR_.resize(nr, nr);
    Vec bF(m_);
    freqF_.resize(m_);
    shiftR_.resize(nr);
    freqR_.resize(nr);
    for (int i = 0; i < m_; ++i) {
        bF[i] = f.shift[free_axes[i]];
        freqF_[i] = f.freq[free_axes[i]];
        for (int j = 0; j < m_; ++j) Q(i, j) = f.quad(free_axes[i], free_axes[j]);
        for (int j = 0; j < nr; ++j) QFR_(i, j) = f.quad(free_axes[i], R_[j]);
    }
    for (int i = 0; i < nr; ++i) {
        shiftR_[i] = f.shift[R_[i]];
        freqR_[i] = f.freq[R_[i]];
        for (int j = 0; j < nr; ++j) QRR_(i, j) = f.quad(R_[i], R_[j]);
    }

    Eigen::LLT<Mat> llt(Q);
    if (llt.info() != Eigen::Success) throw NonSPDQuadraticForm("PhaseIntegral: free block not positive definite");
    logdetQ_ = 0;
    for (int i = 0; i < m_; ++i) logdetQ_ += 2 * std::log(llt.matrixL()(i, i));
    const Mat Linv = llt.matrixL().solve(Mat::Identity(m_, m_));
    Mat S = Linv * T * Linv.transpose();
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    d_ = es.eigenvalues();
    V_ = Linv.transpose() * es.eigenvectors();
    Tb_ = T * bF;
    Pb_ = bF.dot(Tb_);

    // Each free monomial y_F^beta becomes a polynomial in w under y_F = V w; tabulate those once so that
    // rebinding the fixed axes is a matrix-vector product.
    std::map<MultiIndex, int> beta_index, basis_index;
    std::vector<Poly> subs;
    for (const auto& [k, v] : f.poly) {
        if (v == 0.0) continue;
        MultiIndex kf(m_), kr(nr);
        for (int i = 0; i < m_; ++i) kf[i] = k[free_axes[i]];
        for (int i = 0; i < nr; ++i) kr[i] = k[R_[i]];
        auto [it, fresh] = beta_index.emplace(kf, static_cast<int>(subs.size()));
        if (fresh) {
            Poly mono;
            mono[kf] = 1.0;
            subs.push_back(poly_substitute(mono, V_, Vec::Zero(m_)));
        }
        terms_.push_back({it->second, kr, v});
    }
    for (const auto& p : subs)
        for (const auto& [k, v] : p)
            if (basis_index.emplace(k, static_cast<int>(basis_index.size())).second)
                for (int a : k) exps_.push_back(a);
    maxdeg_ = 0;
    for (int a : exps_) maxdeg_ = std::max(maxdeg_, a);
    table_ = CMat::Zero(static_cast<long>(basis_index.size()), static_cast<long>(subs.size()));
    for (std::size_t b = 0; b < subs.size(); ++b)
        for (const auto& [k, v] : subs[b]) table_(basis_index.at(k), static_cast<long>(b)) = v;
    rebind(fixed_values);
}

void PhaseIntegral::rebind(const Vec& fixed_values) {
    const int nr = static_cast<int>(R_.size());
    require_dim(fixed_values.size(), nr, "PhaseIntegral fixed values");
    const Vec yR = fixed_values - shiftR_;
    const Vec lin = -QFR_ * yR;
    L0_ = CVec(m_);
    for (int i = 0; i < m_; ++i) L0_[i] = cplx(lin[i], freqF_[i]);
    C0_ = cplx(-0.5 * yR.dot(QRR_ * yR), freqR_.dot(yR));
    CVec cb = CVec::Zero(table_.cols());
    for (const auto& t : terms_) {
        cplx c = t.coef;
        for (int i = 0; i < nr; ++i)
            for (int a = 0; a < t.rexp[i]; ++a) c *= yR[i];
        cb[t.beta] += c;
    }
    const CVec co = table_ * cb;
    coef_.assign(co.data(), co.data() + co.size());
}

cplx PhaseIntegral::operator()(cplx c) const {
    const cplx ic = cplx(0, 1) * c;
    const CVec j = L0_ + 2.0 * ic * Tb_.cast<cplx>();
    const CVec jh = V_.transpose().cast<cplx>() * j;
    cplx expo = C0_ + ic * Pb_ - 0.5 * logdetQ_ + 0.5 * m_ * std::log(2 * M_PI);
    cplx sqrt_prod = 1.0;
    std::vector<std::vector<cplx>> mom(m_, std::vector<cplx>(maxdeg_ + 1));
    for (int k = 0; k < m_; ++k) {
        const cplx a = 1.0 - 2.0 * ic * d_[k];
        expo += jh[k] * jh[k] / (2.0 * a);
        sqrt_prod *= std::sqrt(a);
        const cplx mu = jh[k] / a, var = 1.0 / a;
        auto& mk = mom[k];
        mk[0] = 1;
        if (maxdeg_ >= 1) mk[1] = mu;
        for (int q = 1; q < maxdeg_; ++q) mk[q + 1] = mu * mk[q] + static_cast<double>(q) * var * mk[q - 1];
    }
    cplx ep = 0;
    const int* e = exps_.data();
    for (std::size_t t = 0; t < coef_.size(); ++t, e += m_) {
        cplx p = coef_[t];
        for (int k = 0; k < m_; ++k) p *= mom[k][e[k]];
        ep += p;
    }
    return std::exp(expo) / sqrt_prod * ep;
}

cplx integral(const GaussPoly& f) {
    std::vector<int> all(f.dim);
    for (int i = 0; i < f.dim; ++i) all[i] = i;
    PhaseIntegral pi(f, all, Vec(), Mat::Zero(f.dim, f.dim));
    return pi(0.0);
}

// ---------------------------------------------------------------- L1 norm

double l1_norm(const GaussPoly& f, const L1Options& opt) {
    const int d = f.dim;
    Eigen::LLT<Mat> llt(f.quad);
    if (llt.info() != Eigen::Success) throw NonSPDQuadraticForm("l1_norm: quadratic form not positive definite");
    double logdetL = 0;
    for (int i = 0; i < d; ++i) logdetL += std::log(llt.matrixL()(i, i));
    const Mat W = llt.matrixU().solve(Mat::Identity(d, d));  // y = W w gives y^T A y = |w|^2
    const Poly pw = poly_substitute(f.poly, W, Vec::Zero(d));
    GaussPoly white;
    white.dim = d;
    white.quad = Mat::Identity(d, d);
    white.shift = Vec::Zero(d);
    white.freq = Vec::Zero(d);
    white.poly = pw;
    const Evaluator ev(white);
    const double jac = std::exp(-logdetL);
    const double R = 12.0;

    if (d <= 2) {
        double scale = 0;
        for (const auto& [k, v] : pw) scale = std::max(scale, std::abs(v));
        const double atol = 1e-3 * opt.rel_tol * std::max(scale, 1e-300);
        if (d == 1) {
            auto g = [&](double w) { double x[1] = {w}; return std::abs(ev(x)); };
            return jac * quad::adaptive_gk<double>(g, -R, R, atol, 0.1 * opt.rel_tol, 20000).value;
        }
        auto outer = [&](double w1) {
            auto inner = [&](double w2) { double x[2] = {w1, w2}; return std::abs(ev(x)); };
            return quad::adaptive_gk<double>(inner, -R, R, atol, 0.1 * opt.rel_tol, 20000).value;
        };
        return jac * quad::adaptive_gk<double>(outer, -R, R, atol * 2 * R, 0.1 * opt.rel_tol, 20000).value;
    }

    // Halton points pushed through Box-Muller: the integral is (2 pi)^{d/2} E|p(w)| for w ~ N(0, I)
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    if (d > 16) throw DimensionMismatch("l1_norm: at most 16 dimensions");
    auto radical_inverse = [](long i, int base) {
        double f = 1, r = 0;
        while (i > 0) {
            f /= base;
            r += f * (i % base);
            i /= base;
        }
        return r;
    };
    const int dd = d + (d % 2);
    std::vector<double> w(dd);
    double sum = 0;
    long done = 0;
    double prev = -1, cur = 0;
    for (long N = 1L << 14; N <= opt.max_samples; N *= 2) {
        for (long i = done + 1; i <= N; ++i) {
            for (int k = 0; k < dd; k += 2) {
                const double u1 = radical_inverse(i, primes[k]), u2 = radical_inverse(i, primes[k + 1]);
                const double r = std::sqrt(-2 * std::log(u1));
                w[k] = r * std::cos(2 * M_PI * u2);
                w[k + 1] = r * std::sin(2 * M_PI * u2);
            }
            double sq = 0;
            for (int k = 0; k < d; ++k) sq += w[k] * w[k];
            sum += std::abs(ev(w.data())) * std::exp(0.5 * sq);
        }
        done = N;
        cur = sum / N;
        if (prev > 0 && std::abs(cur - prev) <= opt.rel_tol * cur) break;
        prev = cur;
    }
    return jac * std::pow(2 * M_PI, 0.5 * d) * cur;
}

// ---------------------------------------------------------------- JSON

nlohmann::json to_json(const GaussPoly& f) {
    nlohmann::json j;
    j["dim"] = f.dim;
    j["quad"] = nlohmann::json::array();
    for (int i = 0; i < f.dim; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < f.dim; ++k) row.push_back(f.quad(i, k));
        j["quad"].push_back(row);
    }
    j["shift"] = std::vector<double>(f.shift.data(), f.shift.data() + f.dim);
    j["freq"] = std::vector<double>(f.freq.data(), f.freq.data() + f.dim);
    j["terms"] = nlohmann::json::array();
    for (const auto& [k, v] : f.poly) j["terms"].push_back({k, v.real(), v.imag()});
    return j;
}

GaussPoly from_json(const nlohmann::json& j) {
    const int d = j.at("dim").get<int>();
    Mat A(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) A(i, k) = j.at("quad").at(i).at(k).get<double>();
    Vec b = Vec::Zero(d);
    if (j.contains("shift"))
        for (int i = 0; i < d; ++i) b[i] = j["shift"][i].get<double>();
    GaussPoly f = gaussian(A, b);
    if (j.contains("freq"))
        for (int i = 0; i < d; ++i) f.freq[i] = j["freq"][i].get<double>();
    if (j.contains("terms")) {
        f.poly.clear();
        for (const auto& t : j["terms"]) {
            MultiIndex k = t.at(0).get<MultiIndex>();
            require_dim(static_cast<long>(k.size()), d, "test function term");
            f.poly[k] += cplx(t.at(1).get<double>(), t.at(2).get<double>());
        }
    }
    return f;
}

}  // namespace pseudoh::testfn
