#include "pseudoh/clifford.hpp"

#include <algorithm>
#include <random>

namespace pseudoh::clifford {

namespace {

Mat block(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
    const long n = a.rows();
    Mat m(2 * n, 2 * n);
    m << a, b, c, d;
    return m;
}

Mat quat_left(char unit) {
    Mat m = Mat::Zero(4, 4);
    if (unit == 'i') {
        m(1, 0) = 1; m(0, 1) = -1; m(3, 2) = 1; m(2, 3) = -1;
    } else {
        m(2, 0) = 1; m(3, 1) = -1; m(0, 2) = -1; m(1, 3) = 1;
    }
    return m;
}

Mat j2() {
    Mat m(2, 2);
    m << 0, -1, 1, 0;
    return m;
}

std::string sig_str(const Signature& s) {
    return "(" + std::to_string(s.r) + "," + std::to_string(s.s) + "," + std::to_string(s.n) + ")";
}

}  // namespace

double ValidationReport::max_residual() const {
    return std::max({gl1, gl2, gl3, anticommute, tau_skew});
}

double form_rs(int r, int s, const Vec& x, const Vec& y) {
    require_dim(x.size(), r + s, "form_rs");
    require_dim(y.size(), r + s, "form_rs");
    return x.head(r).dot(y.head(r)) - x.tail(s).dot(y.tail(s));
}

std::vector<Signature> catalog() {
    return {{0, 1, 1}, {0, 1, 2}, {0, 1, 3}, {0, 2, 2}, {0, 3, 4},
            {1, 1, 2}, {1, 2, 2}, {2, 1, 4}};
}

bool in_catalog(const Signature& sig) {
    auto c = catalog();
    return std::find(c.begin(), c.end(), sig) != c.end();
}

AdmissibleModule build_module(const Signature& sig) {
    if (!in_catalog(sig)) {
        std::string msg = "no catalog entry for " + sig_str(sig);
        if (sig == Signature{0, 2, 1} || sig == Signature{0, 3, 2} || sig == Signature{2, 1, 2})
            msg += " (no admissible module exists in this dimension; use n = " +
                   std::string(sig.s == 2 ? "2" : "4") + ")";
        throw UnknownSignature(msg);
    }
    const int n = sig.n;
    AdmissibleModule m;
    m.sig = sig;
    m.tau = tau_matrix(n);
    m.labels.assign(n, 1);
    m.labels.resize(2 * n, -1);

    const Mat I = Mat::Identity(n, n);
    const Mat Z = Mat::Zero(n, n);
    auto swap = [&](const Mat& b) { return block(Z, b, b.transpose(), Z); };
    auto diag = [&](const Mat& a) { return block(a, Z, Z, -a); };

    if (sig.r == 0 && sig.s == 1) {
        m.rho_gen = {swap(I)};
    } else if (sig.r == 0 && sig.s == 2) {
        m.rho_gen = {swap(I), swap(j2())};
    } else if (sig.r == 0 && sig.s == 3) {
        m.rho_gen = {swap(I), swap(quat_left('i')), swap(quat_left('j'))};
    } else if (sig.r == 1) {
        // basis v, J1 v, J1 J2 v, J2 v
        Mat r1(4, 4), r2(4, 4);
        r1 << 0, -1, 0, 0,
              1, 0, 0, 0,
              0, 0, 0, 1,
              0, 0, -1, 0;
        r2 << 0, 0, 0, 1,
              0, 0, -1, 0,
              0, -1, 0, 0,
              1, 0, 0, 0;
        m.rho_gen = {r1, r2};
        if (sig.s == 2) m.rho_gen.push_back(swap(I));
    } else {
        m.rho_gen = {diag(quat_left('i')), diag(quat_left('j')), swap(I)};
    }
    return m;
}

Mat rho(const AdmissibleModule& m, const Vec& eta) {
    const int k = m.sig.r + m.sig.s;
    require_dim(eta.size(), k, "rho");
    Mat out = Mat::Zero(2 * m.sig.n, 2 * m.sig.n);
    for (int i = 0; i < k; ++i) out += eta[i] * m.rho_gen[i];
    return out;
}

ValidationReport validate_module(const AdmissibleModule& m, double tol, int random_probes, unsigned seed) {
    ValidationReport rep;
    rep.tol = tol;
    const int r = m.sig.r, s = m.sig.s, k = r + s, N = 2 * m.sig.n;
    if (static_cast<int>(m.rho_gen.size()) != k || m.tau.rows() != N) {
        rep.gl1 = rep.gl2 = rep.gl3 = rep.anticommute = rep.tau_skew = 1e300;
        return rep;
    }
    const Mat I = Mat::Identity(N, N);
    auto upd = [](double& slot, const Mat& res) { slot = std::max(slot, res.cwiseAbs().maxCoeff()); };

    for (int a = 0; a < k; ++a) {
        for (int b = a; b < k; ++b) {
            double g = (a == b) ? (a < r ? 1.0 : -1.0) : 0.0;
            upd(rep.anticommute, m.rho_gen[a] * m.rho_gen[b] + m.rho_gen[b] * m.rho_gen[a] + 2 * g * I);
        }
        const Mat tr = m.tau * m.rho_gen[a];
        upd(rep.tau_skew, tr + tr.transpose());
    }

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    for (int p = 0; p < random_probes; ++p) {
        Vec eta(k);
        for (int i = 0; i < k; ++i) eta[i] = nd(gen);
        const double q = form_rs(r, s, eta, eta);
        const Mat J = rho(m, eta);
        upd(rep.gl3, J * J + q * I);
        upd(rep.gl1, J.transpose() * m.tau * J - q * m.tau);
        // <J X, Y>_V + <X, J Y>_V with <X,Y>_V = X^T tau Y
        upd(rep.gl2, J.transpose() * m.tau + m.tau * J);
    }
    return rep;
}

nlohmann::json to_json(const AdmissibleModule& m) {
    nlohmann::json j;
    j["r"] = m.sig.r;
    j["s"] = m.sig.s;
    j["n"] = m.sig.n;
    auto& arr = j["rho"] = nlohmann::json::array();
    for (const auto& g : m.rho_gen) {
        nlohmann::json rows = nlohmann::json::array();
        for (long i = 0; i < g.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (long c = 0; c < g.cols(); ++c) row.push_back(static_cast<long>(std::lround(g(i, c))));
            rows.push_back(row);
        }
        arr.push_back(rows);
    }
    return j;
}

AdmissibleModule from_json(const nlohmann::json& j) {
    AdmissibleModule m;
    m.sig = {j.at("r").get<int>(), j.at("s").get<int>(), j.at("n").get<int>()};
    const int N = 2 * m.sig.n;
    m.tau = tau_matrix(m.sig.n);
    m.labels.assign(m.sig.n, 1);
    m.labels.resize(N, -1);
    for (const auto& g : j.at("rho")) {
        Mat a(N, N);
        require_dim(static_cast<long>(g.size()), N, "catalog rows");
        for (int i = 0; i < N; ++i) {
            require_dim(static_cast<long>(g[i].size()), N, "catalog cols");
            for (int c = 0; c < N; ++c) a(i, c) = g[i][c].get<double>();
        }
        m.rho_gen.push_back(a);
    }
    auto rep = validate_module(m);
    if (!rep.pass())
        throw Error("catalog entry " + sig_str(m.sig) + " fails validation, max residual " +
                    std::to_string(rep.max_residual()));
    return m;
}

}  // namespace pseudoh::clifford
