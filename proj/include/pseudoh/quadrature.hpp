#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "pseudoh/core.hpp"

namespace pseudoh::quad {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

// Weight (1-x)^alpha (1+x)^beta on [-1,1]. Cached per (n, alpha, beta).
const Rule& gauss_jacobi(int n, double alpha, double beta);
const Rule& gauss_legendre(int n);
// Weight exp(-x^2) on R.
const Rule& gauss_hermite(int n);
// Weight x^alpha exp(-x) on [0, inf).
const Rule& gauss_laguerre(int n, double alpha = 0.0);

// Nodes on [a,b] for the plain Legendre rule.
Rule legendre_on(int n, double a, double b);

// Weight (1-rho^2)^alpha on [0,1]: Jacobi(alpha,0) in (1-rho) with (1+rho)^alpha folded into the weights.
const Rule& half_jacobi(int n, double alpha);

// Points and weights for the unit sphere S^{m-1} in R^m with the surface measure.
struct SphereRule {
    std::vector<Vec> x;
    std::vector<double> w;
};
SphereRule sphere_rule(int m, int order);

// Composite Gauss-Legendre on [a,b] with breakpoints refined geometrically towards a.
Rule graded_rule(double a, double b, double first, int per_panel, double ratio = 2.0,
                 double max_panel = 1.0);

template <class T>
T apply(const Rule& r, const std::function<T(double)>& f) {
    T acc{};
    for (std::size_t i = 0; i < r.size(); ++i) acc += r.w[i] * f(r.x[i]);
    return acc;
}

namespace detail {
extern const double gk_x[8];
extern const double gk_wk[8];
extern const double gk_wg[4];
}

template <class T>
struct GKResult {
    T value{};
    double error = 0;
    int evaluations = 0;
};

// Global adaptive Gauss-Kronrod 7/15 on a finite interval.
template <class T, class F>
GKResult<T> adaptive_gk(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                        int max_intervals = 2000) {
    struct Seg {
        double a, b;
        T val;
        double err;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    GKResult<T> out;
    auto eval = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        T k = T{}, g = T{};
        const T fc = f(c);
        k += detail::gk_wk[7] * fc;
        g += detail::gk_wg[3] * fc;
        for (int i = 0; i < 7; ++i) {
            const T s = f(c - h * detail::gk_x[i]) + f(c + h * detail::gk_x[i]);
            k += detail::gk_wk[i] * s;
            if (i % 2 == 1) g += detail::gk_wg[i / 2] * s;
        }
        out.evaluations += 15;
        return Seg{lo, hi, k * h, std::abs(k * h - g * h)};
    };
    std::priority_queue<Seg> pq;
    Seg s0 = eval(a, b);
    pq.push(s0);
    T total = s0.val;
    double err = s0.err;
    int count = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
        Seg s = pq.top();
        pq.pop();
        const double m = 0.5 * (s.a + s.b);
        Seg l = eval(s.a, m), r = eval(m, s.b);
        total += l.val + r.val - s.val;
        err += l.err + r.err - s.err;
        pq.push(l);
        pq.push(r);
        ++count;
    }
    // re-sum in a fixed order so the result does not depend on heap layout
    std::vector<Seg> segs;
    while (!pq.empty()) {
        segs.push_back(pq.top());
        pq.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
    T v{};
    double e = 0;
    for (const auto& sg : segs) {
        v += sg.val;
        e += sg.err;
    }
    out.value = v;
    out.error = e;
    return out;
}

}  // namespace pseudoh::quad
