#include "pseudoh/quadrature.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace pseudoh::quad {

namespace detail {
const double gk_x[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                        0.207784955007898467600689403773245, 0.0};
const double gk_wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                         0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                         0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                         0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double gk_wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                         0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
}  // namespace detail

namespace {

// Golub-Welsch from the symmetric Jacobi matrix.
Rule golub_welsch(const Vec& diag, const Vec& off, double mu0) {
    const long n = diag.size();
    Mat J = Mat::Zero(n, n);
    for (long i = 0; i < n; ++i) J(i, i) = diag[i];
    for (long i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = off[i];
    Eigen::SelfAdjointEigenSolver<Mat> es(J);
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (long i = 0; i < n; ++i) {
        r.x[i] = es.eigenvalues()[i];
        const double v = es.eigenvectors()(0, i);
        r.w[i] = mu0 * v * v;
    }
    return r;
}

std::mutex cache_mutex;

}  // namespace

const Rule& gauss_jacobi(int n, double alpha, double beta) {
    static std::map<std::tuple<int, double, double>, Rule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_tuple(n, alpha, beta);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const double ab = alpha + beta;
    Vec d(n), e(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * k + ab;
        if (k == 0)
            d[k] = (beta - alpha) / (ab + 2.0);
        else
            d[k] = (beta * beta - alpha * alpha) / (t * (t + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double t = 2.0 * k + ab;
        double b2;
        if (k == 1)
            b2 = 4.0 * (1 + alpha) * (1 + beta) / ((2 + ab) * (2 + ab) * (3 + ab));
        else
            b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
        e[k - 1] = std::sqrt(b2);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1) + std::lgamma(beta + 1) -
                                std::lgamma(ab + 2.0));
    return cache.emplace(key, golub_welsch(d, e, mu0)).first->second;
}

const Rule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

const Rule& gauss_hermite(int n) {
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Vec d = Vec::Zero(n), e(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(0.5 * k);
    return cache.emplace(n, golub_welsch(d, e, std::sqrt(M_PI))).first->second;
}

const Rule& gauss_laguerre(int n, double alpha) {
    static std::map<std::pair<int, double>, Rule> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(n, alpha);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Vec d(n), e(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) d[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(k * (k + alpha));
    return cache.emplace(key, golub_welsch(d, e, std::tgamma(alpha + 1.0))).first->second;
}

Rule legendre_on(int n, double a, double b) {
    const Rule& g = gauss_legendre(n);
    Rule r;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < g.size(); ++i) {
        r.x.push_back(c + h * g.x[i]);
        r.w.push_back(h * g.w[i]);
    }
    return r;
}

const Rule& half_jacobi(int n, double alpha) {
    static std::map<std::pair<int, double>, Rule> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({n, alpha});
        if (it != cache.end()) return it->second;
    }
    // rho = (1+x)/2, 1-rho = (1-x)/2
    const Rule& g = gauss_jacobi(n, alpha, 0.0);
    Rule r;
    const double scale = std::pow(0.5, alpha + 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double rho = 0.5 * (1.0 + g.x[i]);
        r.x.push_back(rho);
        r.w.push_back(scale * g.w[i] * std::pow(1.0 + rho, alpha));
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.emplace(std::make_pair(n, alpha), std::move(r)).first->second;
}

SphereRule sphere_rule(int m, int order) {
    SphereRule out;
    if (m == 1) {
        Vec p(1), q(1);
        p << 1.0;
        q << -1.0;
        out.x = {p, q};
        out.w = {1.0, 1.0};
        return out;
    }
    if (m == 2) {
        const int N = std::max(order, 1);
        for (int i = 0; i < N; ++i) {
            const double t = 2.0 * M_PI * (i + 0.5) / N;
            Vec p(2);
            p << std::cos(t), std::sin(t);
            out.x.push_back(p);
            out.w.push_back(2.0 * M_PI / N);
        }
        return out;
    }
    // omega = (c, sqrt(1-c^2) omega'), measure (1-c^2)^{(m-3)/2} dc d omega'
    const double a = 0.5 * (m - 3);
    const Rule& g = gauss_jacobi(std::max(order / 2 + 1, 2), a, a);
    SphereRule sub = sphere_rule(m - 1, order);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double c = g.x[i], sn = std::sqrt(1.0 - c * c);
        for (std::size_t j = 0; j < sub.x.size(); ++j) {
            Vec p(m);
            p[0] = c;
            p.tail(m - 1) = sn * sub.x[j];
            out.x.push_back(p);
            out.w.push_back(g.w[i] * sub.w[j]);
        }
    }
    return out;
}

Rule graded_rule(double a, double b, double first, int per_panel, double ratio, double max_panel) {
    std::vector<double> br{a};
    double h = first;
    double x = a;
    while (x + h < b - 1e-14 * std::abs(b)) {
        x += h;
        br.push_back(x);
        h = std::min(h * ratio, max_panel);
    }
    br.push_back(b);
    Rule r;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        Rule p = legendre_on(per_panel, br[i], br[i + 1]);
        r.x.insert(r.x.end(), p.x.begin(), p.x.end());
        r.w.insert(r.w.end(), p.w.begin(), p.w.end());
    }
    return r;
}

}  // namespace pseudoh::quad
