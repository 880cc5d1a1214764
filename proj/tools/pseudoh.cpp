#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "pseudoh/clifford.hpp"
#include "pseudoh/group.hpp"
#include "pseudoh/kernel.hpp"
#include "pseudoh/pairing.hpp"
#include "pseudoh/quadrature.hpp"
#include "pseudoh/specfun.hpp"
#include "pseudoh/witness.hpp"

using namespace pseudoh;
using json = nlohmann::json;
using clifford::Signature;
using testfn::GaussPoly;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kDomain = 3 };

std::string num(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "null" : (x > 0 ? "1e999" : "-1e999");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// nlohmann prints the shortest round-trip form; every float here goes out with 17 significant digits.
void write_json(std::ostream& os, const json& j, int indent = 0) {
    const std::string pad(indent + 2, ' '), end(indent, ' ');
    switch (j.type()) {
    case json::value_t::number_float:
        os << num(j.get<double>());
        break;
    case json::value_t::array:
        if (j.empty()) {
            os << "[]";
            break;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            os << pad;
            write_json(os, j[i], indent + 2);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        os << end << "]";
        break;
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            break;
        }
        os << "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            os << pad << json(it.key()).dump() << ": ";
            write_json(os, it.value(), indent + 2);
            os << (i + 1 < j.size() ? ",\n" : "\n");
        }
        os << end << "}";
        break;
    }
    default:
        os << j.dump();
    }
}

struct Output {
    std::string path;
    void emit_json(const json& j) const {
        std::ostringstream os;
        write_json(os, j);
        os << "\n";
        emit(os.str());
    }
    void emit(const std::string& text) const {
        if (path.empty() || path == "-") {
            std::cout << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << text;
    }
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw CLI::ValidationError("bad number '" + item + "'");
    }
    return out;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size())); }

std::vector<int> parse_ints(const std::string& s, std::size_t count) {
    std::vector<int> out;
    for (double x : parse_list(s)) {
        if (x != std::floor(x)) throw CLI::ValidationError("expected integers in '" + s + "'");
        out.push_back(static_cast<int>(x));
    }
    if (out.size() != count) throw CLI::ValidationError("expected " + std::to_string(count) + " integers in '" + s + "'");
    return out;
}

Signature parse_sig(const std::string& s) {
    const auto v = parse_ints(s, 3);
    return {v[0], v[1], v[2]};
}

json sig_json(const Signature& s) { return {{"r", s.r}, {"s", s.s}, {"n", s.n}}; }

kernel::KernelSelector parse_selector(const std::string& s) {
    if (s == "heaviside") return kernel::KernelSelector::heaviside();
    const auto v = parse_list(s);
    if (v.size() == 2) return kernel::KernelSelector::constant(v[0], v[1]);
    if (v.size() == 4) return kernel::KernelSelector::constant(cplx(v[0], v[1]), cplx(v[2], v[3]));
    throw CLI::ValidationError("selector is 'heaviside', 'lambda,mu' or 'Re lambda,Im lambda,Re mu,Im mu'");
}

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json budget_json(const pairing::Budget& b) {
    return {{"per_panel", b.per_panel}, {"sphere_order", b.sphere_order}, {"tol", b.tol}};
}

// Three test functions on R^d from the seed: isotropic, shifted anisotropic, and with a polynomial factor.
std::vector<GaussPoly> probe_family(int d, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    std::vector<GaussPoly> out;
    out.push_back(testfn::isotropic_gaussian(d, 2.0));
    Mat A = Mat::Identity(d, d);
    Vec c(d);
    for (int i = 0; i < d; ++i) {
        A(i, i) += 0.3 * std::abs(ud(gen));
        c[i] = 0.15 * ud(gen);
        for (int j = 0; j < i; ++j) A(i, j) = A(j, i) = 0.1 * ud(gen);
    }
    out.push_back(testfn::gaussian(A, c));
    GaussPoly f = testfn::isotropic_gaussian(d, 1.5);
    testfn::MultiIndex a(d, 0), b(d, 0);
    a[0] = 1;
    a[d - 1] = 1;
    b[1] = 2;
    f.poly[a] = 0.5 * ud(gen);
    f.poly[b] = cplx(0.3 * ud(gen), 0.3 * ud(gen));
    out.push_back(f);
    return out;
}

json module_report(const clifford::AdmissibleModule& m) {
    const auto rep = clifford::validate_module(m);
    return {{"signature", sig_json(m.sig)},
            {"gl1", rep.gl1},
            {"gl2", rep.gl2},
            {"gl3", rep.gl3},
            {"anticommute", rep.anticommute},
            {"tau_skew", rep.tau_skew},
            {"max_residual", rep.max_residual()},
            {"tol", rep.tol},
            {"passed", rep.pass()}};
}

int cmd_catalog(const Output& out, bool with_matrices) {
    json rows = json::array();
    bool ok = true;
    for (const auto& sig : clifford::catalog()) {
        const auto m = clifford::build_module(sig);
        rows.push_back(module_report(m));
        if (with_matrices) rows.back()["module"] = clifford::to_json(m);
        ok = ok && rows.back()["passed"].get<bool>();
    }
    out.emit_json({{"catalog", rows}, {"passed", ok}});
    return ok ? kOk : kCheckFailed;
}

int cmd_validate(const Output& out, const std::string& sig, const std::string& file) {
    clifford::AdmissibleModule m;
    if (!file.empty()) {
        std::ifstream f(file);
        if (!f) throw CLI::ValidationError("cannot read " + file);
        // from_json re-validates and throws when the stored matrices fail
        try {
            m = clifford::from_json(json::parse(f));
        } catch (const Error& e) {
            out.emit_json({{"passed", false}, {"error", e.what()}});
            return kCheckFailed;
        }
    } else {
        m = clifford::build_module(parse_sig(sig));
    }
    const json r = module_report(m);
    out.emit_json(r);
    return r["passed"].get<bool>() ? kOk : kCheckFailed;
}

int cmd_kernel_eval(const Output& out, const std::string& sig_s, const std::vector<std::string>& xis,
                    const std::vector<std::string>& thetas, const std::string& sel_s) {
    const Signature sig = parse_sig(sig_s);
    const auto sel = parse_selector(sel_s);
    if (xis.size() != thetas.size()) throw CLI::ValidationError("--xi and --theta must come in pairs");
    std::ostringstream os;
    for (int i = 0; i < 2 * sig.n; ++i) os << "xi_" << i + 1 << ",";
    for (int i = 0; i < sig.s; ++i) os << "theta_" << i + 1 << ",";
    os << "re_q,im_q\n";
    for (std::size_t k = 0; k < xis.size(); ++k) {
        const Vec xi = to_vec(parse_list(xis[k])), th = to_vec(parse_list(thetas[k]));
        const cplx q = kernel::kernel_q_lm(sig, xi, th, sel);
        for (double x : xi) os << num(x) << ",";
        for (double x : th) os << num(x) << ",";
        os << num(q.real()) << "," << num(q.imag()) << "\n";
    }
    out.emit(os.str());
    return kOk;
}

int cmd_kernel_cone(const Output& out, const std::string& sig_s, double xmax, double zmax, int points) {
    const Signature sig = parse_sig(sig_s);
    if (points < 2) throw CLI::ValidationError("--points must be at least 2");
    std::ostringstream os;
    os << "x_1,z_1,re_k,im_k\n";
    for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j) {
            Vec x = Vec::Zero(2 * sig.n), z = Vec::Zero(sig.s);
            x[0] = xmax * i / (points - 1);
            z[0] = -zmax + 2 * zmax * j / (points - 1);
            if (std::abs(quad_p(x)) <= 4 * z.norm() * (1 + 1e-9) || x[0] == 0.0) continue;
            const cplx k = kernel::smooth_kernel_offcone(sig, x, z);
            os << num(x[0]) << "," << num(z[0]) << "," << num(k.real()) << "," << num(k.imag()) << "\n";
        }
    out.emit(os.str());
    return kOk;
}

int cmd_specfun_table(const Output& out, double nu, double vmin, double vmax, int count) {
    if (count < 2 || !(vmin > 0) || !(vmax > vmin))
        throw CLI::ValidationError("need 0 < vmin < vmax and count >= 2");
    std::ostringstream os;
    os << "v,J,Y,H\n";
    for (int i = 0; i < count; ++i) {
        const double v = vmin + (vmax - vmin) * i / (count - 1);
        os << num(v) << "," << num(specfun::bessel_j(nu, v)) << "," << num(specfun::bessel_y(nu, v)) << ","
           << num(specfun::struve_h(nu, v)) << "\n";
    }
    out.emit(os.str());
    return kOk;
}

int cmd_pair(const Output& out, const std::string& sig_s, const std::string& phi_file, const std::string& sel_s,
             const pairing::Budget& b) {
    const Signature sig = parse_sig(sig_s);
    std::ifstream f(phi_file);
    if (!f) throw CLI::ValidationError("cannot read " + phi_file);
    const GaussPoly phi = testfn::from_json(json::parse(f));
    const auto r = pairing::pair_K(sig, phi, parse_selector(sel_s), b);
    out.emit_json({{"signature", sig_json(sig)},
                   {"selector", sel_s},
                   {"value", cjson(r.value)},
                   {"est_error", r.est_error},
                   {"budget", budget_json(b)},
                   {"node_budget", r.node_budget}});
    return kOk;
}

json verify_fs(int n, int s, const std::string& sel_s, double tol, unsigned seed) {
    const Signature sig{0, s, n};
    const auto G = group::make_group(sig);
    const auto sel = parse_selector(sel_s);
    json rows = json::array();
    double worst = 0;
    for (const auto& phi : probe_family(G.dim(), seed)) {
        const cplx want = testfn::evaluate(phi, Vec::Zero(G.dim()));
        const auto r = pairing::pair_K(sig, group::apply_delta_rs(G, phi), sel);
        const double e = std::abs(r.value - want) / std::abs(want);
        worst = std::max(worst, e);
        rows.push_back({{"value", cjson(r.value)}, {"phi_at_0", cjson(want)}, {"rel_error", e}, {"est_error", r.est_error}});
    }
    return {{"check", "delta_reproduction"},
            {"signature", sig_json(sig)},
            {"selector", sel_s},
            {"seed", seed},
            {"budget", budget_json({})},
            {"functions", rows},
            {"max_rel_error", worst},
            {"tol", tol},
            {"passed", worst <= tol}};
}

json verify_cone(double support_tol, double offcone_tol) {
    // the iterated integral vanishes on data concentrated in 4|z| < |P(x)|
    Mat A = Mat::Identity(5, 5) * 100;
    Vec c_in = Vec::Zero(5), c_cone = Vec::Zero(5);
    c_in[0] = 2;
    c_cone[4] = 0.5;
    const cplx inside = pairing::pair_MR_heisenberg(testfn::gaussian(A, c_in)).value;
    const cplx cone = pairing::pair_MR_heisenberg(testfn::gaussian(A, c_cone)).value;
    const double ratio = std::abs(inside) / std::abs(cone);

    // off the cone pair_K is the smooth kernel integral; tensor Gauss-Hermite around a narrow bump
    const Signature S22{0, 2, 2};
    const double w = 0.05;
    Vec c(6);
    c << 2, 0, 0, 0, 0.1, 0;
    const GaussPoly phi = testfn::gaussian(Mat::Identity(6, 6) / (w * w), c);
    const cplx k = pairing::pair_K(S22, phi, kernel::KernelSelector::constant(1, 0)).value;
    const auto& gh = quad::gauss_hermite(4);
    cplx acc = 0;
    for (long t = 0; t < 4096; ++t) {
        long q = t;
        double wt = 1;
        Vec u(6);
        for (int i = 0; i < 6; ++i) {
            const int j = static_cast<int>(q % 4);
            q /= 4;
            u[i] = c[i] + std::sqrt(2.0) * w * gh.x[j];
            wt *= gh.w[j];
        }
        acc += wt * kernel::smooth_kernel_offcone(S22, u.head(4), u.tail(2), 1e-10);
    }
    const cplx direct = kernel::kernel_constant(S22) * acc * std::pow(2 * w * w, 3);
    const double rel = std::abs(k - direct) / std::abs(direct);
    return {{"check", "cone_support"},
            {"inside_value", cjson(inside)},
            {"cone_value", cjson(cone)},
            {"support_ratio", ratio},
            {"support_tol", support_tol},
            {"offcone_pair_K", cjson(k)},
            {"offcone_smooth_kernel", cjson(direct)},
            {"offcone_rel_error", rel},
            {"offcone_tol", offcone_tol},
            {"passed", ratio <= support_tol && rel <= offcone_tol}};
}

json verify_nonexistence(const std::string& sig_s, int n, const std::string& eta0_s, double delta, int nodes) {
    const auto rs = parse_ints(sig_s, 2);
    Signature sig{rs[0], rs[1], n};
    if (n <= 0) {
        bool found = false;
        for (const auto& c : clifford::catalog())
            if (c.r == rs[0] && c.s == rs[1] && (!found || c.n < sig.n)) {
                sig = c;
                found = true;
            }
        if (!found) throw UnknownSignature("no catalog module with r = " + std::to_string(rs[0]) +
                                           ", s = " + std::to_string(rs[1]));
    }
    witness::WitnessConfig cfg;
    cfg.sig = sig;
    cfg.eta0 = to_vec(parse_list(eta0_s));
    cfg.delta = delta;
    cfg.flow_nodes = nodes;
    const auto w = witness::build_witness(cfg);
    json j = witness::nonsolvability_report(w.group(), w);
    j["check"] = "nonexistence_witness";
    j["passed"] = j["residual_passed"].get<bool>() && j["delta_phi_passed"].get<bool>() &&
                  j["integral"].get<double>() > 0 && std::abs(j["phi_at_0"].get<double>() - 1.0) <= 1e-9;
    return j;
}

int finish(const Output& out, const json& j) {
    out.emit_json(j);
    return j["passed"].get<bool>() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo H-type groups: Clifford modules, fundamental-solution pairings and non-existence checks"};
    app.require_subcommand(1);
    app.fallthrough();
    Output out;
    app.add_option("-o,--out", out.path, "output file (default stdout)");

    auto* catalog = app.add_subcommand("catalog", "list shipped signatures with validation residuals");
    bool with_matrices = false;
    catalog->add_flag("--matrices", with_matrices, "include the generator matrices");

    std::string sig = "0,1,1", module_file;
    auto* validate = app.add_subcommand("validate", "validate a catalog module or a module JSON file");
    validate->add_option("--sig", sig, "r,s,n");
    validate->add_option("--module", module_file, "module JSON file");

    auto* kern = app.add_subcommand("kernel", "tabulate the kernel");
    kern->require_subcommand(1);
    std::vector<std::string> xis, thetas;
    std::string sel = "1,0";
    auto* keval = kern->add_subcommand("eval", "CSV rows xi, theta, Re q, Im q");
    keval->add_option("--sig", sig, "r,s,n with r = 0")->required();
    keval->add_option("--xi", xis, "comma list, repeatable")->required();
    keval->add_option("--theta", thetas, "comma list, repeatable")->required();
    keval->add_option("--selector", sel, "heaviside | lambda,mu | Re l,Im l,Re m,Im m");
    double xmax = 3, zmax = 1;
    int points = 21;
    auto* kcone = kern->add_subcommand("cone", "CSV samples x_1, z_1, Re k, Im k of the off-cone kernel");
    kcone->add_option("--sig", sig, "r,s,n with r = 0")->required();
    kcone->add_option("--xmax", xmax);
    kcone->add_option("--zmax", zmax);
    kcone->add_option("--points", points);

    auto* sf = app.add_subcommand("specfun", "special function tables");
    sf->require_subcommand(1);
    double nu = 0.5, vmin = 0.1, vmax = 20;
    int count = 200;
    auto* table = sf->add_subcommand("table", "CSV v, J, Y, H");
    table->add_option("--nu", nu, "order (n-1)/2");
    table->add_option("--vmin", vmin);
    table->add_option("--vmax", vmax);
    table->add_option("--count", count);

    std::string phi_file;
    pairing::Budget budget;
    auto* pair = app.add_subcommand("pair", "pair the kernel with a test function from JSON");
    pair->add_option("--sig", sig, "r,s,n with r = 0")->required();
    pair->add_option("--phi", phi_file, "test function JSON")->required();
    pair->add_option("--selector", sel);
    pair->add_option("--per-panel", budget.per_panel);
    pair->add_option("--sphere-order", budget.sphere_order);
    pair->add_option("--tol", budget.tol);

    int n = 2, s = 2;
    double tol = 1e-3;
    unsigned seed = 1;
    auto* vfs = app.add_subcommand("verify-fs", "delta reproduction on three test functions");
    vfs->add_option("--n", n);
    vfs->add_option("--s", s);
    vfs->add_option("--selector", sel);
    vfs->add_option("--tol", tol);
    vfs->add_option("--seed", seed);

    double support_tol = 1e-6, offcone_tol = 1e-3;
    auto* vcone = app.add_subcommand("verify-cone", "support of the iterated integral and the off-cone kernel");
    vcone->add_option("--support-tol", support_tol);
    vcone->add_option("--offcone-tol", offcone_tol);

    std::string rs = "1,1", eta0 = "2,1";
    double delta = 0.5;
    int wn = 0, nodes = 64;
    auto* vne = app.add_subcommand("verify-nonexistence", "certify the kernel witness for r > 0");
    vne->add_option("--sig", rs, "r,s");
    vne->add_option("--n", wn, "module size (default: smallest in the catalog)");
    vne->add_option("--eta0", eta0);
    vne->add_option("--delta", delta);
    vne->add_option("--nodes", nodes, "trapezoid nodes for the flow average");

    auto* report = app.add_subcommand("report", "run the verification suites and write one JSON document");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*catalog) return cmd_catalog(out, with_matrices);
        if (*validate) return cmd_validate(out, sig, module_file);
        if (*keval) return cmd_kernel_eval(out, sig, xis, thetas, sel);
        if (*kcone) return cmd_kernel_cone(out, sig, xmax, zmax, points);
        if (*table) return cmd_specfun_table(out, nu, vmin, vmax, count);
        if (*pair) return cmd_pair(out, sig, phi_file, sel, budget);
        if (*vfs) return finish(out, verify_fs(n, s, sel, tol, seed));
        if (*vcone) return finish(out, verify_cone(support_tol, offcone_tol));
        if (*vne) return finish(out, verify_nonexistence(rs, wn, eta0, delta, nodes));
        if (*report) {
            json j;
            bool ok = true;
            json cat = json::array();
            for (const auto& c : clifford::catalog()) {
                cat.push_back(module_report(clifford::build_module(c)));
                ok = ok && cat.back()["passed"].get<bool>();
            }
            j["catalog"] = cat;
            j["delta_reproduction"] = {verify_fs(1, 1, "1,0", 1e-3, seed), verify_fs(2, 2, "1,0", 1e-3, seed),
                                       verify_fs(2, 1, "heaviside", 1e-2, seed)};
            j["cone"] = verify_cone(1e-6, 1e-3);
            j["nonexistence"] = verify_nonexistence("1,1", 2, "2,1", 0.5, 64);
            for (const auto& r : j["delta_reproduction"]) ok = ok && r["passed"].get<bool>();
            ok = ok && j["cone"]["passed"].get<bool>() && j["nonexistence"]["passed"].get<bool>();
            j["passed"] = ok;
            return finish(out, j);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: bad number (" << e.what() << ")\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    }
    return kUsage;
}
