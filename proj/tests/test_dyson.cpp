#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "dyson/cutoff.hpp"
#include "dyson/inequality.hpp"
#include "dyson/k0.hpp"
#include "dyson/soft_potentials.hpp"

using namespace rotogp;

namespace {

constexpr double pi = std::numbers::pi;

// First odd level of -d^2/dx^2 + x^4 by a sine DVR on [-6, 6]; equals the
// lowest level of -Lap + |x|^4 in 3D (radial u = r psi, u(0) = 0).
double quartic_odd_level() {
    const int m = 300;
    const double half = 6.0, box = 2.0 * half, dx = box / (m + 1);
    const double c = pi * pi / (2.0 * box * box);
    Eigen::MatrixXd H(m, m);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            if (i == j) {
                const double x = -half + i * dx;
                H(i - 1, j - 1) = c * ((2.0 * (m + 1) * (m + 1) + 1.0) / 3.0 -
                                       1.0 / std::pow(std::sin(pi * i / (m + 1)), 2)) +
                                  x * x * x * x;
            } else {
                const double sign = (i - j) % 2 == 0 ? 1.0 : -1.0;
                H(i - 1, j - 1) = c * sign *
                                  (1.0 / std::pow(std::sin(pi * (i - j) / (2.0 * (m + 1))), 2) -
                                   1.0 / std::pow(std::sin(pi * (i + j) / (2.0 * (m + 1))), 2));
            }
        }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues()(1);
}

}  // namespace

TEST_CASE("cutoff profile plateaus, monotonicity and symmetry") {
    CHECK(CutoffFunction::ell(0.0) == 0.0);
    CHECK(CutoffFunction::ell(1.0) == 0.0);
    CHECK(CutoffFunction::ell(2.0) == 1.0);
    CHECK(CutoffFunction::ell(7.0) == 1.0);
    CHECK(CutoffFunction::ell(1.5) == doctest::Approx(0.5).epsilon(1e-15));
    double prev = 0.0;
    for (int i = 0; i <= 3000; ++i) {
        const double p = 3.0 * i / 3000.0, v = CutoffFunction::ell(p);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        // S(t) + S(1 - t) = 1.
        CHECK(v + CutoffFunction::ell(3.0 - p) == doctest::Approx(1.0).epsilon(1e-14));
        prev = v;
    }
    CutoffFunction chi(0.5);
    CHECK(chi.chi(1.99) == 0.0);
    CHECK(chi.chi(4.01) == 1.0);
    CHECK_THROWS_AS(CutoffFunction(0.0), InvalidArgument);
}

TEST_CASE("h matches an adaptive quadrature of the radial Fourier integral") {
    CutoffFunction chi(0.7);
    for (double r : {0.0, 0.3, 1.1, 4.0, 9.5}) {
        auto f = [&](double p) {
            const double x = p * r;
            return (1.0 - chi.chi(p)) * p * p * (x == 0.0 ? 1.0 : std::sin(x) / x) / (2.0 * pi * pi);
        };
        using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
        const double ref = GK::integrate(f, 0.0, 1.0 / 0.7, 8, 1e-14) + GK::integrate(f, 1.0 / 0.7, 2.0 / 0.7, 8, 1e-14);
        CHECK(chi.h(r) == doctest::Approx(ref).epsilon(1e-11).scale(1e-3));
        const double d = 1e-5;
        if (r > 0.0) CHECK(chi.h_prime(r) == doctest::Approx((chi.h(r + d) - chi.h(r - d)) / (2 * d)).epsilon(1e-6).scale(1e-3));
    }
    // (1 - chi)(0) = 1: the integral of h over R^3 is 1 (slow tail, truncated at 60 s).
    double integral = 0.0;
    const double s = 1.0, dr = 60.0 * s / 60000;
    CutoffFunction c1(s);
    for (int k = 0; k < 60000; ++k) {
        const double r = (k + 0.5) * dr;
        integral += 4.0 * pi * r * r * c1.h(r) * dr;
    }
    CHECK(std::abs(integral - 1.0) < 1e-3);
}

TEST_CASE("soft potentials: U_R, w_R and f_R invariants") {
    CutoffFunction chi(1.0);
    const double R = 0.1;
    const SoftPotentials sp = build_soft_potentials(chi, R, 0.5);
    // 6 R^-3 (4 pi / 3)(R^3 - R^3/2) = 4 pi.
    CHECK(sp.int_UR == doctest::Approx(4.0 * pi).epsilon(1e-13));
    CHECK(sp.UR_sup == doctest::Approx(6.0 / (R * R * R)).epsilon(1e-15));
    CHECK(hat_potential(R, 0.5 * R) == 0.0);
    CHECK(hat_potential(R, 0.9 * R) == doctest::Approx(6000.0));
    CHECK(hat_potential(R, 1.01 * R) == 0.0);
    double peak = 0.0;
    for (std::size_t k = 0; k < sp.r.size(); ++k) {
        CHECK(sp.fR[k] >= 0.0);
        CHECK(sp.wR[k] == doctest::Approx(2.0 / (pi * pi) * sp.int_fR * sp.fR[k]).epsilon(1e-14));
        peak = std::max(peak, sp.fR[k]);
    }
    // Tail: the compactly supported step has a sub-exponential Fourier tail.
    CHECK(sp.fR_at(20.0) / peak < 1e-3);
    CHECK(sp.fR_at(29.0) < sp.fR_at(20.0));
    CHECK(sp.wR_at(31.0) == 0.0);

    // f_R against the exact radial sup: |x - y| sweeps [max(0, r - R), r + R].
    for (std::size_t k : {0u, 1u, 10u, 33u, 92u}) {
        const double r = sp.r[k];
        double exact = 0.0;
        const double lo = std::max(0.0, r - R), hi = r + R, hr = chi.h(r);
        for (int i = 0; i <= 4000; ++i) exact = std::max(exact, std::abs(chi.h(lo + (hi - lo) * i / 4000.0) - hr));
        CHECK(sp.fR[k] <= exact * (1.0 + 1e-6) + 1e-12);
        if (r > R) CHECK(sp.fR[k] >= 0.99 * exact);
    }
}

TEST_CASE("f_R is stable under doubling of the sup sampling") {
    CutoffFunction chi(1.0);
    const SoftPotentials a = build_soft_potentials(chi, 0.2, 0.5);
    const SoftPotentials b = build_soft_potentials(chi, 0.2, 0.5, SupSampling{2, 16});
    double peak = 0.0, diff = 0.0;
    for (std::size_t k = 0; k < a.fR.size(); ++k) {
        peak = std::max(peak, a.fR[k]);
        diff = std::max(diff, std::abs(a.fR[k] - b.fR[k]));
    }
    CHECK(diff < 0.01 * peak);
    CHECK(std::abs(a.int_fR / b.int_fR - 1.0) < 0.01);
}

TEST_CASE("soft potential preconditions") {
    CutoffFunction chi(1.0);
    CHECK_THROWS_AS(build_soft_potentials(chi, 1.5, 0.5), InvalidArgument);
    CHECK_THROWS_AS(build_soft_potentials(chi, 0.1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(build_soft_potentials(chi, 0.1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(verify_wr_scaling(chi, {0.05, 0.1, 0.2}), InvalidArgument);
}

TEST_CASE("integral of w_R scales as (R/s)^2") {
    CutoffFunction chi(1.0);
    const WrScaling sc = verify_wr_scaling(chi, {0.01, 0.02, 0.05, 0.1});
    CHECK(sc.slope >= 1.9);
    CHECK(sc.slope <= 2.1);
    CHECK(sc.ratio_max / sc.ratio_min < 1.5);
    for (std::size_t i = 0; i + 1 < sc.R.size(); ++i) CHECK(sc.int_wR[i] < sc.int_wR[i + 1]);
    // Halving R shrinks the integral by about 4.
    CHECK(sc.int_wR[1] / sc.int_wR[0] >= 0.9 * 4.0);
    // Fixed R, doubled s: about 4x smaller.
    const double w1 = build_soft_potentials(CutoffFunction(1.0), 0.1, 0.5).int_wR;
    const double w2 = build_soft_potentials(CutoffFunction(2.0), 0.1, 0.5).int_wR;
    CHECK(w1 / w2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("free kinetic cutoff operator is positive") {
    CutoffFunction chi(1.0);
    const SoftPotentials sp = build_soft_potentials(chi, 0.5, 0.5);
    const DysonCheckResult r = check_dyson_inequality(RadialPotential::zero(1e-3), 1.0, sp, chi);
    CHECK(r.a == 0.0);
    CHECK(r.min_eig >= -1e-10);
    for (const DysonLevel& lv : r.levels) CHECK(lv.min_eig >= -1e-10);
    CHECK(r.passed);
}

TEST_CASE("hard sphere inside the R window passes at every refinement level") {
    // N = 1e6: N^{-2/3} = 1e-4 << R = 1e-3 << N^{-1/3} = 1e-2.
    CutoffFunction chi(0.1);
    const SoftPotentials sp = build_soft_potentials(chi, 1e-3, 0.5);
    const DysonCheckResult r = check_dyson_inequality(RadialPotential::hard_sphere(1.0), 1e6, sp, chi);
    CHECK(r.a == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.slack == doctest::Approx(1e-6 * 1e-6 * 6e9).epsilon(1e-6));
    REQUIRE(r.levels.size() == 3);
    for (const DysonLevel& lv : r.levels) {
        CHECK(lv.channel_min.size() == 3);
        CHECK(lv.min_eig >= -r.slack);
    }
    CHECK(r.levels[0].nodes < r.levels[1].nodes);
    CHECK(r.levels[1].nodes < r.levels[2].nodes);
    CHECK(r.drift <= r.slack);
    CHECK(r.passed);
}

TEST_CASE("soft barrier passes; inflated a is detected") {
    CutoffFunction chi(0.1);
    const SoftPotentials sp = build_soft_potentials(chi, 1e-2, 0.5);
    DysonCheckOptions opts;
    opts.channels = {0};
    CHECK(check_dyson_inequality(RadialPotential::square_barrier(1.0, 5.0), 1e4, sp, chi, opts).passed);

    CutoffFunction chi2(0.1);
    const SoftPotentials sp2 = build_soft_potentials(chi2, 1e-3, 0.5);
    opts.a_multiplier = 300.0;
    const DysonCheckResult bad = check_dyson_inequality(RadialPotential::hard_sphere(1.0), 1e6, sp2, chi2, opts);
    CHECK_FALSE(bad.passed);
    CHECK(bad.min_eig < -bad.slack);
}

TEST_CASE("margin grows with epsilon") {
    CutoffFunction chi(0.01);
    DysonCheckOptions opts;
    opts.channels = {0};
    double prev = -INFINITY;
    for (double eps : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const SoftPotentials sp = build_soft_potentials(chi, 1e-3, eps);
        const DysonCheckResult r = check_dyson_inequality(RadialPotential::hard_sphere(1.0), 1e6, sp, chi, opts);
        CHECK(r.passed);
        CHECK(r.min_eig > prev);
        prev = r.min_eig;
    }
}

TEST_CASE("dyson check argument validation") {
    CutoffFunction chi(0.1);
    const SoftPotentials sp = build_soft_potentials(chi, 1e-3, 0.5);
    CHECK_THROWS_AS(check_dyson_inequality(RadialPotential::hard_sphere(1.0), 100.0, sp, chi), InvalidArgument);
    CHECK_THROWS_AS(check_dyson_inequality(RadialPotential::hard_sphere(1.0), 1e6, sp, CutoffFunction(0.2)),
                    InvalidArgument);
    DysonCheckOptions one;
    one.levels = 1;
    CHECK_THROWS_AS(check_dyson_inequality(RadialPotential::hard_sphere(1.0), 1e6, sp, chi, one), InvalidArgument);
}

TEST_CASE("lowest level of -Lap + |x|^4 on the grid") {
    const double oracle = quartic_odd_level();
    CHECK(oracle == doctest::Approx(3.7996730298).epsilon(1e-10));
    const KappaResult k = compute_kappa(Grid(3, 24, 7.0), {0, 0, 0}, 1.0);
    CHECK(std::abs(k.kappa - oracle) < 1e-8);
    // Frozen regression value for this grid.
    CHECK(k.kappa == doctest::Approx(3.799673029801).epsilon(1e-11));
    // kappa(eta) = eta lambda0 at Omega = 0.
    for (double eta : {0.25, 2.0}) {
        const KappaResult ke = compute_kappa(Grid(3, 24, 7.0), {0, 0, 0}, eta);
        CHECK(ke.kappa / eta == doctest::Approx(k.kappa).epsilon(1e-10));
    }
}

TEST_CASE("K0 is positive with a nondecreasing spectrum") {
    CutoffFunction chi(0.2);
    const GpProblem p = GpProblem::harmonic(Grid(3, 24, 8.0), {0, 0, -0.5}, 1.0);
    const ModifiedOneBody k0 = build_K0(p, chi, 0.5, 8);
    REQUIRE(k0.e.size() == 8);
    CHECK(k0.e[0] >= -1e-8);
    // K0 >= -eta Lap + V >= 0, and with V = |x|^2 the bound is strict.
    CHECK(k0.e[0] > 1.0);
    for (std::size_t j = 1; j < k0.e.size(); ++j) CHECK(k0.e[j] >= k0.e[j - 1] - 1e-9);
    // e_J over the sweep J = 1, 2, 4, 8 strictly increases.
    CHECK(k0.e[0] < k0.e[1]);
    CHECK(k0.e[1] < k0.e[3]);
    CHECK(k0.e[3] < k0.e[7]);
    for (const ComplexField& f : k0.phi) CHECK(norm(f) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k0.boundary < 1e-4);
    CHECK_THROWS_AS(build_K0(p, chi, 0.0, 4), InvalidArgument);
}

TEST_CASE("small box is rejected") {
    CHECK_THROWS_AS(compute_kappa(Grid(3, 16, 3.0), {0, 0, 0}, 1.0), InvalidArgument);
}
