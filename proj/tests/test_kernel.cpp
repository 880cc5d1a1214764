#include <doctest.h>

#include <cmath>
#include <random>

#include "pseudoh/kernel.hpp"
#include "pseudoh/quadrature.hpp"
#include "pseudoh/specfun.hpp"

using namespace pseudoh;
using namespace pseudoh::kernel;
using testfn::GaussPoly;

namespace {

std::mt19937 gen(5);
std::normal_distribution<double> nd;

Vec randn(int d) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = nd(gen);
    return v;
}

const cplx I(0, 1);

// (pi^2/2) int e^{-|u|}/(u - i eps) du, the reduction of int e^{-|x|^2}/(P - i eps) over R^4,
// computed with u = eps sinh(s) so the near-pole is resolved.
cplx eps_integral(double eps) {
    const double S = std::asinh(60 / eps);
    auto f = [&](double s) { return std::exp(-eps * std::abs(std::sinh(s))) * std::cosh(s) / (std::sinh(s) - I); };
    return 0.5 * M_PI * M_PI * quad::adaptive_gk<cplx>(f, -S, S, 1e-13).value;
}

}  // namespace

TEST_CASE("kappa and volume element") {
    CHECK(kappa(0) == 0.5);
    CHECK(kappa(40) / 10 == doctest::Approx(1.0).epsilon(1e-15));
    for (double r : {1e-8, 1e-4, 0.01}) {
        const double series = 0.5 + r * r / 24 - std::pow(r, 4) / 1440;
        CHECK(std::abs(kappa(r) - series) < 1e-14);
    }
    CHECK(volume_element(0, 3) == 1.0);
    CHECK(volume_element(1, 2) / std::pow(kappa(1), 2) == doctest::Approx(4 / std::pow(std::cosh(0.5), 2)).epsilon(1e-12));
    for (int n = 1; n <= 4; ++n)
        for (double t : {0.3, 1.0, 4.0})
            CHECK(volume_element(t, n) / std::pow(kappa(t), n) ==
                  doctest::Approx(std::pow(2 / std::cosh(0.5 * t), n)).epsilon(1e-12));
    double prev = 1.0;
    for (double r = 0.1; r < 20; r += 0.1) {
        const double w = volume_element(r, 2);
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("kernel q special values") {
    const Vec th = Vec::Constant(2, 0.6);
    const double t = th.norm();
    Vec xi0(4);
    xi0 << 1, 0, 1, 0;  // P = 0
    CHECK(std::abs(kernel_q({0, 2, 2}, xi0, th) - I * std::pow(2 * M_PI, -3.0) / t) < 1e-15);
    Vec x1(2);
    x1 << 1, 1;
    CHECK(std::abs(kernel_q({0, 2, 1}, x1, th) - I * M_PI / (2 * std::pow(2 * M_PI, 2.0) * t)) < 1e-14);
    CHECK(std::abs(rho_integral(2, 3.0) - (std::exp(3.0 * I) - 1.0) / (3.0 * I)) < 1e-14);
    CHECK(std::abs(rho_integral(2, 300.0) - (std::exp(300.0 * I) - 1.0) / (300.0 * I)) < 1e-14);
    CHECK(std::abs(rho_integral(3, 150.0) - specfun::jh_rho_integral(3, 150.0)) < 1e-12);
    CHECK_THROWS_AS(kernel_q({0, 2, 2}, xi0, Vec::Zero(2)), ThetaZero);
    CHECK_THROWS_AS(kernel_q({1, 1, 2}, xi0, Vec::Ones(2)), UnknownSignature);
}

TEST_CASE("selector family") {
    for (const Signature sig : {Signature{0, 1, 1}, Signature{0, 1, 2}, Signature{0, 2, 2}, Signature{0, 1, 3}}) {
        const double C = std::pow(2 * M_PI, -(sig.n + 0.5 * sig.s));
        for (int k = 0; k < 50; ++k) {
            const Vec xi = 1.5 * randn(2 * sig.n), th = randn(sig.s);
            const double t = th.norm(), v = quad_p(xi) / t;
            const cplx q = kernel_q(sig, xi, th);
            CHECK(std::abs(kernel_q_lm(sig, xi, th, KernelSelector::constant(1, 0)) - q) < 1e-15);
            const auto sel = KernelSelector::constant(0.3 + 0.2 * I, 0.7 - 0.2 * I);
            const cplx a = kernel_q_lm(sig, xi, th, sel), b = kernel_q_lm_bessel(sig, xi, th, sel);
            CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
            // (1/2, 1/2): i * (i * sine integral) is real
            const cplx half = kernel_q_lm(sig, xi, th, KernelSelector::constant(0.5, 0.5));
            const double nu = 0.5 * (sig.n - 1);
            const double sine = v == 0 ? 0.0
                                       : (v > 0 ? 1 : -1) * specfun::struve_h(nu, std::abs(v)) /
                                             (2 * std::pow(0.5 * std::abs(v), nu) /
                                              (std::sqrt(M_PI) * specfun::gamma_half(0.5 * sig.n)));
            CHECK(std::abs(half - (-C * sine / t)) < 1e-10);
            CHECK(std::abs(half.imag()) < 1e-15);
            // q^{1,0} - q^{0,1} only sees the cosine part, q^{1,0} + q^{0,1} only the sine part
            const cplx q01 = kernel_q_lm(sig, xi, th, KernelSelector::constant(0, 1));
            CHECK(std::abs((q - q01) - 2.0 * I * C / t * rho_integral(sig.n, v).real()) < 1e-12);
            CHECK(std::abs((q + q01) - 2.0 * I * C / t * I * rho_integral(sig.n, v).imag()) < 1e-12);
            // even in xi, radial in theta
            CHECK(std::abs(kernel_q(sig, Vec(-xi), th) - q) < 1e-14);
            if (sig.s == 2) {
                const double a0 = nd(gen);
                Mat R(2, 2);
                R << std::cos(a0), -std::sin(a0), std::sin(a0), std::cos(a0);
                CHECK(std::abs(kernel_q(sig, xi, Vec(R * th)) - q) < 1e-14);
            }
        }
    }
    const auto hv = KernelSelector::heaviside();
    CHECK(hv.at(Vec::Constant(1, 0.2)).first == 1.0);
    CHECK(hv.at(Vec::Constant(1, -0.2)).second == 1.0);
    CHECK_THROWS_AS(KernelSelector::constant(1, 1), Error);
}

TEST_CASE("Gbar q is constant") {
    for (auto [n, s] : {std::pair{1, 2}, {2, 1}, {2, 2}}) {
        const Signature sig{0, s, n};
        const double ref = std::pow(2 * M_PI, -(n + 0.5 * s));
        double worst = 0;
        for (int k = 0; k < 1000; ++k) {
            const Vec xi = 2.0 * randn(2 * n), th = randn(s);
            worst = std::max(worst, std::abs(gbar_residual(sig, xi, th) - ref));
        }
        CHECK(worst <= 1e-8 * ref);
        Vec xi0 = Vec::Zero(2 * n);
        CHECK(std::abs(gbar_residual(sig, xi0, Vec::Ones(s)) - ref) < 1e-12);
    }
}

TEST_CASE("analytic v-derivatives match central differences") {
    for (int n = 1; n <= 3; ++n)
        for (double v : {-4.0, 0.3, 2.5}) {
            const double h = 1e-4;
            const cplx d1 = (rho_integral(n, v + h) - rho_integral(n, v - h)) / (2 * h);
            const cplx d2 = (rho_integral(n, v + h) - 2.0 * rho_integral(n, v) + rho_integral(n, v - h)) / (h * h);
            CHECK(std::abs(d1 - I * rho_integral(n, v, 1)) < 1e-6);
            CHECK(std::abs(d2 + rho_integral(n, v, 2)) < 1e-6);
        }
}

TEST_CASE("Q_j tables") {
    for (int n = 1; n <= 4; ++n)
        for (int s = 1; s <= 4; ++s) {
            const QTable& Q = offcone_qtable(n, s);
            CHECK(Q.q.size() == static_cast<std::size_t>(n));
            const double p = 0.5 * (s + 1);
            for (int j = 0; j < n; ++j)
                if (Q.degree(j) >= 0) CHECK(2 * (p + j) - Q.degree(j) >= s + n - 1 - 1e-12);
            // compare with the (n-1)-th derivative by the Cauchy integral on a circle that avoids +-i|z|
            const double z2 = 0.64, l0 = 1.3, r = 0.5;
            const int M = 64, m = n - 1;
            cplx deriv = 0;
            for (int k = 0; k < M; ++k) {
                const cplx e = std::exp(I * (2 * M_PI * k / M));
                const cplx l = l0 + r * e;
                deriv += l * std::pow(l * l + z2, -p) / std::pow(r * e, m);
            }
            deriv *= std::tgamma(m + 1) / static_cast<double>(M) * ((n - 1) % 2 ? -1.0 : 1.0);
            cplx sum = 0;
            for (int j = 0; j < n; ++j) {
                double qv = 0;
                for (std::size_t c = 0; c < Q.q[j].size(); ++c) qv += Q.q[j][c] * std::pow(l0, c);
                sum += qv * std::pow(l0 * l0 + z2, -p - j);
            }
            CHECK(std::abs(sum - deriv) < 1e-10 * std::max(1.0, std::abs(sum)));
        }
    CHECK(c_s(1) == doctest::Approx(std::sqrt(2.0 / M_PI)));
    CHECK(c_s(2) == doctest::Approx(1.0));
}

TEST_CASE("off-cone kernel, n = 1") {
    const Signature sig{0, 2, 1};
    for (auto [a, zn] : {std::pair{2.0, 0.1}, {1.5, 0.2}, {-1.2, 0.05}}) {
        Vec x(2);
        x << (a > 0 ? std::sqrt(a) : 0.3), (a > 0 ? 0.0 : std::sqrt(0.09 - a));
        Vec z(2);
        z << zn, 0;
        const double P = quad_p(x);
        const double sg = P > 0 ? 1 : -1;
        // closed form for s = 2: int_0^inf cosh(tau) (P^2 cosh^2 tau/16 - |z|^2)^{-3/2} dtau = (P^2/16)^{-3/2}/(1 - 16|z|^2/P^2)
        const cplx closed = c_s(2) * I * P / 8.0 * std::exp(cplx(0, -1.5 * M_PI * sg)) * std::pow(P * P / 16, -1.5) /
                            (1 - 16 * zn * zn / (P * P));
        // independent 1-D quadrature in tau where coth t = cosh tau
        auto f = [&](double tau) { return std::cosh(tau) * std::pow(P * P * std::pow(std::cosh(tau), 2) / 16 - zn * zn, -1.5); };
        const double oracle = quad::adaptive_gk<double>(f, 0, 40, 1e-15).value;
        const cplx viaq = c_s(2) * I * P / 8.0 * std::exp(cplx(0, -1.5 * M_PI * sg)) * oracle;
        const cplx K = smooth_kernel_offcone(sig, x, z);
        CHECK(std::abs(K - closed) < 1e-8 * std::abs(closed));
        CHECK(std::abs(K - viaq) < 1e-8 * std::abs(closed));
    }
    Vec x(2), z(2);
    x << 1, 0;
    z << 0.3, 0;
    CHECK_THROWS_AS(smooth_kernel_offcone(sig, x, z), OnConeRegion);
}

TEST_CASE("off-cone kernel decays like t^{s+n-1} near t = 0") {
    // the integrand must stay bounded for every (n, s); a blow-up would show up as a huge value
    for (int n = 1; n <= 3; ++n)
        for (int s = 1; s <= 3; ++s) {
            Vec x = Vec::Zero(2 * n);
            x[0] = 2;
            Vec z = Vec::Zero(s);
            z[0] = 0.1;
            const cplx K = smooth_kernel_offcone({0, s, n}, x, z);
            CHECK(std::isfinite(K.real()));
            CHECK(std::abs(K) < 1e3);
        }
}

TEST_CASE("flat ultra-hyperbolic operator") {
    Mat A(4, 4);
    A << 1.2, 0.1, 0, 0.2, 0.1, 0.9, 0.1, 0, 0, 0.1, 1.1, 0, 0.2, 0, 0, 1.0;
    GaussPoly f = testfn::multiply_monomial(testfn::gaussian(A), {1, 0, 0, 1});
    const GaussPoly Lf = flat_L(f);
    const Vec x = 0.5 * randn(4);
    const double h = 1e-3;
    cplx fd = 0;
    for (int j = 0; j < 4; ++j) {
        const Vec e = h * Vec::Unit(4, j);
        fd += (j < 2 ? 1.0 : -1.0) *
              (-testfn::evaluate(f, x + 2 * e) + 16.0 * testfn::evaluate(f, x + e) - 30.0 * testfn::evaluate(f, x) +
               16.0 * testfn::evaluate(f, x - e) - testfn::evaluate(f, x - 2 * e)) /
              (12 * h * h);
    }
    CHECK(std::abs(testfn::evaluate(Lf, x) - fd) < 1e-6);
}

TEST_CASE("1/P^{n-1}") {
    const GaussPoly psi = testfn::isotropic_gaussian(4, 2.0);  // exp(-|x|^2)
    const cplx val = inv_P_power(psi);
    // epsilon limit: least squares in {1, eps, eps log eps, eps^2}
    const double eps[] = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    Eigen::MatrixXd B(7, 4);
    Eigen::VectorXcd y(7);
    for (int i = 0; i < 7; ++i) {
        const double e = eps[i];
        B.row(i) << 1, e, e * std::log(e), e * e;
        y[i] = eps_integral(e);
    }
    const Eigen::VectorXcd coef = B.cast<cplx>().colPivHouseholderQr().solve(y);
    CHECK(std::abs(val - coef[0]) < 1e-3 * std::abs(val));
    CHECK(std::abs(val - I * (std::pow(M_PI, 3) / 2)) < 1e-9);

    // the large-t half from the dual side agrees with the direct oscillatory integral
    std::vector<int> all{0, 1, 2, 3};
    const testfn::PhaseIntegral direct(psi, all, Vec(), tau_matrix(2));
    auto tail = [&](double u) { return direct(cplx(-1 / u)) / (u * u); };  // t^{n-2} = 1 for n = 2
    const cplx I2direct = I * quad::adaptive_gk<cplx>(tail, 1e-6, 1.0, 1e-13).value;
    auto head = [&](double t) { return direct(cplx(-t)); };
    const cplx I1 = I * quad::adaptive_gk<cplx>(head, 0.0, 1.0, 1e-14).value;
    CHECK(std::abs(I1 + I2direct - val) < 1e-5);

    // odd test function
    const GaussPoly odd = testfn::multiply_coord(testfn::isotropic_gaussian(4, 1.3), 0);
    CHECK(std::abs(inv_P_power(odd)) < 1e-13);
    CHECK_THROWS_AS(inv_P_power(testfn::isotropic_gaussian(2)), UnsupportedN);
}

TEST_CASE("(P+i0)^lambda continuation") {
    const GaussPoly psi = testfn::isotropic_gaussian(4, 2.0);
    CHECK(std::abs(p_plus_i0_power(0.0, psi, 0) - M_PI * M_PI) < 1e-9);
    // for exp(-|x|^2): (pi^2/2) Gamma(mu+1) (1 + e^{i pi mu})
    for (cplx mu : {cplx(0.5, 0), cplx(1.3, 0.4), cplx(-0.4, 0.0)}) {
        const testfn::GaussPoly g = psi;
        const ConePairing cone(g, mu.real());
        const cplx ref = 0.5 * M_PI * M_PI * std::exp(std::lgamma(mu.real() + 1)) * (1.0 + std::exp(I * M_PI * mu));
        if (mu.imag() == 0.0) CHECK(std::abs(cone(mu) - ref) < 1e-9 * std::abs(ref));
    }
    const cplx a1 = p_plus_i0_power(cplx(-0.5, 0.0), psi, 1), a2 = p_plus_i0_power(cplx(-0.5, 0.0), psi, 2);
    CHECK(std::abs(a1 - a2) < 1e-5 * std::abs(a1));
    // removable point lambda = -n + 1 reproduces the conjugate of 1/P^{n-1}: the +i0 and -i eps prescriptions differ
    const cplx c = p_plus_i0_power(-1.0, psi, 2);
    CHECK(std::abs(c - std::conj(inv_P_power(psi))) < 1e-6);
    CHECK_THROWS_AS(p_plus_i0_power(-2.0, psi, 3), PolePosition);
    CHECK_THROWS_AS(Lambda(-1.0, 2, 2), PolePosition);
    // anisotropic, shifted sample: two continuation paths agree
    Mat A(4, 4);
    A << 1.5, 0.2, 0, 0, 0.2, 1.0, 0, 0.1, 0, 0, 1.2, 0, 0, 0.1, 0, 0.8;
    Vec b(4);
    b << 0.2, 0, -0.1, 0.3;
    const GaussPoly f = testfn::gaussian(A, b);
    const cplx f1 = p_plus_i0_power(cplx(-0.5, 0.3), f, 1, {24, 56, 0.1});
    const cplx f2 = p_plus_i0_power(cplx(-0.5, 0.3), f, 2, {24, 56, 0.1});
    CHECK(std::abs(f1 - f2) < 1e-5 * std::abs(f1));
}
