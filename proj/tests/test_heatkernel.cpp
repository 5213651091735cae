#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/quadrature.hpp"
#include "heatkernel/heat_kernel.hpp"

using namespace rotogp;

namespace {

constexpr double pi = std::numbers::pi;

// Harmonic V = |x|^2: e^{-a y^2} * j_t = (1 + 4at)^{-d/2} e^{-a x^2 / (1 + 4at)}, t = (a/4)(1 - u^2).
double harmonic_bound_oracle(double x, double a, int d) {
    const QuadratureRule q = gauss_legendre(80, 0.0, 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double c = 1.0 + a * a * (1.0 - q.nodes[i] * q.nodes[i]);
        sum += q.weights[i] * std::pow(c, -0.5 * d) * std::exp(-a * x * x / c);
    }
    return std::pow(4.0 * pi * a, -0.5 * d) * sum;
}

int status(const WeightedTrace& w) { return w.divergent ? 0 : (w.converged ? 2 : 1); }

}  // namespace

TEST_CASE("h_alpha is a normalized nonnegative density") {
    for (double a : {0.1, 1.0, 10.0})
        for (int d : {1, 3}) {
            const HAlphaTable tab = build_h_alpha(a, d, 40);
            CHECK(tab.integral == doctest::Approx(1.0).epsilon(1e-6));
            for (double h : tab.h) CHECK(h >= 0.0);
        }
}

TEST_CASE("h_alpha closed forms") {
    // d = 1 at the origin: (pi a)^{-1/2} int_0^1 (1 - u^2)^{-1/2} du.
    for (double a : {0.5, 2.0}) CHECK(h_alpha(0.0, a, 1) == doctest::Approx(0.5 * std::sqrt(pi / a)).epsilon(1e-10));
    // j^{3D}_t(r) = -(1 / 2 pi r) d/dr j^{1D}_t(r), so h_3 = -h_1' / (2 pi r).
    for (double r : {0.3, 1.0, 2.5}) {
        const double e = 1e-4;
        const double d1 = (h_alpha(r - 2 * e, 1.0, 1) - 8 * h_alpha(r - e, 1.0, 1) + 8 * h_alpha(r + e, 1.0, 1) -
                           h_alpha(r + 2 * e, 1.0, 1)) / (12 * e);
        CHECK(h_alpha(r, 1.0, 3) == doctest::Approx(-d1 / (2.0 * pi * r)).epsilon(1e-7));
    }
    CHECK_THROWS_AS(h_alpha(0.0, 1.0, 3), InvalidArgument);
    CHECK_THROWS_AS(h_alpha(1.0, 0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(h_alpha(1.0, 1.0, 2), InvalidArgument);
}

TEST_CASE("h_alpha decays like exp(-|x|^2 / alpha)") {
    for (double a : {0.5, 1.0, 4.0})
        for (double q : {36.0, 49.0, 64.0}) {
            const double r = std::sqrt(q * a);
            const double ratio = std::log(h_alpha(r, a, 3)) / (-r * r / a);
            CHECK(ratio == doctest::Approx(1.0).epsilon(0.2));
        }
}

TEST_CASE("V = 0 is the equality case") {
    const ConfiningPotential V0 = ConfiningPotential::zero();
    for (double a : {0.3, 1.0, 5.0})
        for (int d : {1, 3})
            for (double r : {0.1, 1.0, 4.0})
                CHECK(diag_bound(V0, a, d, r) == doctest::Approx(free_diag(a, d)).epsilon(1e-8));
    // Brute force far from the walls reproduces the free diagonal.
    const DiagComparison c = compare_diag(V0, 1.0, 1, {30.0, 300});
    CHECK(c.dominated);
    for (std::size_t j = 0; j < c.x.size(); ++j)
        if (std::abs(c.x[j]) < 10.0) CHECK(c.brute[j] == doctest::Approx(free_diag(1.0, 1)).epsilon(1e-8));
}

TEST_CASE("harmonic bound matches its Gaussian closed form") {
    const ConfiningPotential V = ConfiningPotential::harmonic();
    for (double a : {0.5, 1.0, 2.0})
        for (int d : {1, 3})
            for (double r : {0.05, 0.7, 2.0, 4.0})
                CHECK(diag_bound(V, a, d, r) == doctest::Approx(harmonic_bound_oracle(r, a, d)).epsilon(1e-9));
}

TEST_CASE("1D harmonic: brute force equals Mehler and the bound dominates it") {
    for (double a : {0.5, 1.0, 2.0}) {
        const DiagComparison c = compare_diag(ConfiningPotential::harmonic(), a, 1);
        CHECK(c.dominated);
        CHECK(c.max_violation < 0.0);
        for (std::size_t j = 0; j < c.x.size(); ++j) {
            CHECK(std::abs(c.brute[j] - mehler_diag(c.x[j], a)) < 1e-12);
            CHECK(c.bound[j] >= mehler_diag(c.x[j], a));
        }
    }
}

TEST_CASE("3D harmonic: radial brute force equals the Mehler product and is dominated") {
    const double a = 1.0;
    const DiagComparison c = compare_diag(ConfiningPotential::harmonic(), a, 3, {10.0, 200});
    CHECK(c.dominated);
    for (std::size_t j = 0; j < c.x.size(); ++j) {
        const double r = c.x[j];
        const double oracle = std::pow(2.0 * pi * std::sinh(2.0 * a), -1.5) * std::exp(-r * r * std::tanh(a));
        if (r < 6.0) CHECK(c.brute[j] == doctest::Approx(oracle).epsilon(1e-6));
        CHECK(c.bound[j] >= oracle);
    }
}

TEST_CASE("log-growth potential is dominated in 1D") {
    const DiagComparison c = compare_diag(ConfiningPotential::log_growth(2.0), 20.0, 1, {40.0, 400});
    CHECK(c.dominated);
}

TEST_CASE("box too small is rejected") {
    CHECK_THROWS_AS(compare_diag(ConfiningPotential::harmonic(), 1.0, 1, {3.0, 100}), InvalidArgument);
    CHECK_THROWS_AS(perturbed_bound_check(ConfiningPotential::harmonic(), 1.0, 1.0, 1.0, {3.0, 100}), InvalidArgument);
}

TEST_CASE("tabulated potential reproduces the harmonic bound") {
    // Linear interpolation of r^2 on spacing h errs by at most h^2 / 4.
    std::vector<double> r, v;
    for (int i = 0; i <= 400; ++i) {
        r.push_back(i * 0.05);
        v.push_back(r.back() * r.back());
    }
    const ConfiningPotential T = ConfiningPotential::tabulated(r, v);
    for (double x : {0.0, 1.0, 3.0})
        CHECK(diag_bound(T, 1.0, 1, x) == doctest::Approx(diag_bound(ConfiningPotential::harmonic(), 1.0, 1, x)).epsilon(1e-3));
    CHECK_THROWS_AS(ConfiningPotential::tabulated({0.0, 1.0}, {0.0, -1.0}), InvalidArgument);
    CHECK_THROWS_AS(ConfiningPotential::tabulated({0.5, 1.0}, {0.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(ConfiningPotential::log_growth(0.0), InvalidArgument);
}

TEST_CASE("weighted trace of the harmonic bound") {
    // int |x|^2 bound = (1 + 2a^2/3) * 3 / (16 a^4) in 3D and (1 + 2a^2/3) / (4 a^2) in 1D.
    for (double a : {0.5, 1.0}) {
        const WeightedTrace w3 = weighted_trace(ConfiningPotential::harmonic(), a, 2.0, 3);
        CHECK(w3.converged);
        CHECK(w3.value == doctest::Approx((1.0 + 2.0 * a * a / 3.0) * 3.0 / (16.0 * std::pow(a, 4))).epsilon(1e-8));
        const WeightedTrace w1 = weighted_trace(ConfiningPotential::harmonic(), a, 2.0, 1);
        CHECK(w1.converged);
        CHECK(w1.value == doctest::Approx((1.0 + 2.0 * a * a / 3.0) / (4.0 * a * a)).epsilon(1e-8));
    }
}

TEST_CASE("weighted trace: finite above and divergent below a monotone threshold in alpha") {
    const ConfiningPotential V = ConfiningPotential::log_growth(2.0);
    // 3D: the tail |x|^{6 - 2a} is integrable for a > 3.5.
    std::vector<int> st3;
    for (double a : {0.1, 2.0, 3.0, 4.0, 5.0, 50.0}) st3.push_back(status(weighted_trace(V, a, 4.0, 3)));
    CHECK(st3.front() == 0);
    CHECK(st3.back() == 2);
    for (std::size_t i = 1; i < st3.size(); ++i) CHECK(st3[i] >= st3[i - 1]);
    // 1D: the tail |x|^{4 - 2a} is integrable for a > 2.5.
    std::vector<int> st1;
    for (double a : {0.5, 2.0, 3.0, 10.0}) st1.push_back(status(weighted_trace(V, a, 4.0, 1)));
    CHECK(st1.front() == 0);
    CHECK(st1.back() == 2);
    for (std::size_t i = 1; i < st1.size(); ++i) CHECK(st1[i] >= st1[i - 1]);
}

TEST_CASE("heat flow of the exponential profile") {
    const double B = 2.0, D = 0.7;
    for (double t : {0.01, 0.3, 2.0})
        for (double x : {0.0, 0.5, 3.0}) {
            auto f = [&](double y) {
                return std::sqrt(B) * std::exp(-D * std::abs(y)) * std::exp(-(x - y) * (x - y) / (4 * t)) /
                       std::sqrt(4 * pi * t);
            };
            using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
            const double oracle = GK::integrate(f, -60.0, 0.0, 20, 1e-13) + GK::integrate(f, 0.0, 60.0, 20, 1e-13);
            CHECK(phi_heat(x, t, B, D) == doctest::Approx(oracle).epsilon(1e-10));
        }
    CHECK(phi_heat(1.0, 0.0, B, D) == doctest::Approx(std::sqrt(B) * std::exp(-D)));
}

TEST_CASE("xi_alpha") {
    const double B = 1.0, D = 1.0, a = 1.0;
    // Heat flow only lowers the peak, so the sup at the origin is Phi(0) / |Phi|.
    CHECK(xi_alpha(0.0, a, B, D) == doctest::Approx(std::sqrt(D)).epsilon(1e-12));
    double prev = INFINITY;
    for (double x = 0.0; x <= 12.0; x += 0.25) {
        const double xi = xi_alpha(x, a, B, D);
        CHECK(xi <= prev + 1e-15);
        CHECK(xi >= std::sqrt(B) * std::exp(-D * x) / std::sqrt(B / D) - 1e-15);
        CHECK(xi * std::sqrt(B / D) >= phi_heat(x, a, B, D) - 1e-15);
        prev = xi;
    }
    CHECK(xi_alpha(12.0, a, B, D) < 1e-4);
}

TEST_CASE("rank-one perturbed kernel is dominated") {
    const PerturbedReport r = perturbed_bound_check(ConfiningPotential::harmonic(), 1.0, 1.0, 1.0);
    CHECK(r.phi_norm_sq == doctest::Approx(1.0));
    CHECK(r.passed);
    CHECK(r.max_violation <= r.slack);
    // B = 0 reduces to the unperturbed comparison: equality up to rounding.
    const PerturbedReport r0 = perturbed_bound_check(ConfiningPotential::harmonic(), 1.0, 0.0, 1.0);
    CHECK(r0.passed);
    CHECK(std::abs(r0.max_violation) < 1e-12);
    for (double a : {0.5, 2.0}) CHECK(perturbed_bound_check(ConfiningPotential::harmonic(), a, 3.0, 0.5, {14.0, 300}).passed);
}
