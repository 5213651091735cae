#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "core/errors.hpp"
#include "fock/basis.hpp"
#include "fock/coherent.hpp"
#include "fock/error_constants.hpp"
#include "fock/hamiltonian.hpp"
#include "fock/symbols.hpp"

using namespace rotogp;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::MatrixXcd dense(const FockOperator& A) { return Eigen::MatrixXcd(A.matrix); }

}  // namespace

TEST_CASE("basis dimension and ordering") {
    for (int J : {1, 2, 3, 4})
        for (int n : {0, 3, 6}) {
            FockBasis b(J, n);
            CHECK(b.size() == fock_dimension(J, n));
            for (int i = 0; i < b.size(); ++i) CHECK(b.index(b.state(i)) == i);
        }
    CHECK(fock_dimension(2, 12) == 91);
    FockBasis b(2, 4);
    CHECK(b.sector(3).size() == 4);
    CHECK(b.index({5, 0}) == -1);
    CHECK_THROWS_AS(FockBasis(0, 3), InvalidArgument);
}

TEST_CASE("canonical commutation relations below the truncation edge") {
    FockBasis b(2, 6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const LadderPair Li = ladder_operators(b, i), Lj = ladder_operators(b, j);
            const Eigen::MatrixXcd C = dense(Li.a) * dense(Lj.adag) - dense(Lj.adag) * dense(Li.a);
            for (int s = 0; s < b.size(); ++s) {
                if (b.total(s) >= b.n_max()) continue;
                for (int r = 0; r < b.size(); ++r)
                    CHECK(std::abs(C(r, s) - (i == j && r == s ? 1.0 : 0.0)) < 1e-14);
            }
        }
    const LadderPair L = ladder_operators(b, 0);
    // Leakage confined to the top sector.
    for (int s : L.leakage) CHECK(b.total(s) == b.n_max());
    CHECK(L.leakage.size() == b.sector(b.n_max()).size());
    // a|vac> = 0 and a^dag a counts.
    const Eigen::MatrixXcd A = dense(L.a);
    CHECK(A.col(b.index({0, 0})).norm() == 0.0);
    const Eigen::MatrixXcd Nop = dense(L.adag) * A;
    for (int s = 0; s < b.size(); ++s) CHECK(Nop(s, s).real() == doctest::Approx(b.state(s)[0]));
    CHECK((Nop - dense(number_operator(b, 0, 1))).norm() < 1e-13);
    CHECK_THROWS_AS(ladder_operators(b, 2), InvalidArgument);
}

TEST_CASE("one-mode Hamiltonian spectrum g N (N - 1)") {
    const double g = 0.37;
    ModeBasis mb;
    mb.e = {0.0};
    mb.W = {g};
    FockBasis b(1, 10);
    const FockOperator H = build_hamiltonian(mb, b, false);
    for (int N = 0; N <= 10; ++N) CHECK(ground_state(H, b, N).energy == doctest::Approx(g * N * (N - 1)).epsilon(1e-13));
}

TEST_CASE("W = 0 gives N e_1 and the penalty vanishes on the target sector") {
    ModeBasis mb;
    mb.e = {0.4, 0.9, 1.7};
    mb.W.assign(81, 0.0);
    mb.C = 3.0;
    mb.M = 4.0;
    FockBasis b(3, 8);
    const FockOperator H0 = build_hamiltonian(mb, b, false), Hp = build_hamiltonian(mb, b, true);
    for (int N = 1; N <= 8; ++N) CHECK(ground_state(H0, b, N).energy == doctest::Approx(0.4 * N).epsilon(1e-13));
    const Eigen::MatrixXcd D = dense(Hp) - dense(H0);
    for (int s = 0; s < b.size(); ++s) {
        const double expect = 3.0 / 4.0 * (b.total(s) - 4.0) * (b.total(s) - 4.0);
        CHECK(D(s, s).real() == doctest::Approx(expect).epsilon(1e-14));
        if (b.total(s) == 4) CHECK(std::abs(D(s, s)) == 0.0);
    }
}

TEST_CASE("Hamiltonian is hermitian and conserves number") {
    ModeBasis mb = two_mode_oscillator();
    mb.C = 2.0;
    mb.M = 3.0;
    FockBasis b(2, 10);
    for (bool pen : {false, true}) {
        const FockOperator H = build_hamiltonian(mb, b, pen);
        CHECK(H.hermitian);
        CHECK(H.hermiticity_defect() <= 1e-12);
        CHECK(commutator_defect(H, number_operator(b)) <= 1e-12);
    }
    CHECK(mb.pair_space_min_eigenvalue() >= -1e-14);
    ModeBasis bad = mb;
    bad.W[1] = 0.3;  // W_0001 without its partners
    CHECK_THROWS_AS(build_hamiltonian(bad, b, false), InvalidArgument);
}

TEST_CASE("spectrum invariant under mode relabeling") {
    ModeBasis mb;
    mb.e = {1.0, 1.0};
    mb.W.assign(16, 0.0);
    // Swap-symmetric: W_0000 = W_1111, mixed entries shared.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const int ones = i + j + k + l;
                    mb.W[((i * 2 + j) * 2 + k) * 2 + l] = ones == 0 || ones == 4 ? 0.8 : (ones == 2 ? 0.3 : 0.0);
                }
    FockBasis b(2, 6);
    const Eigen::MatrixXcd H = dense(build_hamiltonian(mb, b, false));
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(b.size(), b.size());
    for (int s = 0; s < b.size(); ++s) P(b.index({b.state(s)[1], b.state(s)[0]}), s) = 1.0;
    CHECK((P * H * P.transpose() - H).norm() < 1e-13);
}

TEST_CASE("two-mode mean-field limit approaches the Hartree minimum") {
    const ModeBasis mb = two_mode_oscillator();
    const double g = 1.0;
    const HartreeMinimum hm = hartree_minimum(mb, g);
    // Pure lowest mode: 1/2 + g / sqrt(2 pi).
    CHECK(hm.energy == doctest::Approx(0.5 + g / std::sqrt(2.0 * pi)).epsilon(1e-12));
    // No point on the mode sphere does better.
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 2000; ++t) {
        std::vector<cplx> c{{nd(rng), nd(rng)}, {nd(rng), nd(rng)}};
        const double nn = std::sqrt(std::norm(c[0]) + std::norm(c[1]));
        for (cplx& v : c) v /= nn;
        cplx q = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) q += mb.w(i, j, k, l) * std::conj(c[i]) * std::conj(c[j]) * c[k] * c[l];
        CHECK(0.5 * std::norm(c[0]) + 1.5 * std::norm(c[1]) + g * q.real() >= hm.energy - 1e-12);
    }
    double prev = INFINITY;
    for (int N = 2; N <= 8; ++N) {
        ModeBasis m = mb;
        for (cplx& w : m.W) w *= g / N;
        FockBasis b(2, N);
        const GroundState gs = ground_state(build_hamiltonian(m, b, false), b, N);
        CHECK(gs.residual <= 1e-10);
        const double gap = std::abs(gs.energy / N - hm.energy);
        CHECK(gap <= prev);
        prev = gap;
    }
    CHECK(prev / hm.energy < 0.10);
}

TEST_CASE("large sector uses the iterative solver") {
    ModeBasis mb;
    mb.e = {0.5, 1.0, 1.5, 2.0};
    mb.W.assign(256, 0.0);
    for (int i = 0; i < 4; ++i) mb.W[((i * 4 + i) * 4 + i) * 4 + i] = 0.2;
    FockBasis b(4, 25);
    const FockOperator H = build_hamiltonian(mb, b, false);
    REQUIRE(b.sector(25).size() > 3000);
    const GroundState gs = ground_state(H, b, 25);
    CHECK(gs.residual <= 1e-10 * std::abs(gs.energy));
    // Minimize sum_i (e_i n_i + 0.2 n_i (n_i - 1)) over occupations by brute force.
    double best = INFINITY;
    for (int s : b.sector(25)) {
        double v = 0.0;
        for (int i = 0; i < 4; ++i) v += mb.e[i] * b.state(s)[i] + 0.2 * b.state(s)[i] * (b.state(s)[i] - 1);
        best = std::min(best, v);
    }
    CHECK(gs.energy == doctest::Approx(best).epsilon(1e-10));
}

TEST_CASE("coherent states") {
    FockBasis b(2, 40);
    const CoherentVector vac = coherent_state({0.0, 0.0}, b);
    CHECK(std::abs(vac.state(b.index({0, 0})) - 1.0) < 1e-15);
    CHECK(vac.state.norm() == doctest::Approx(1.0));
    const std::vector<cplx> z{{0.8, -0.3}, {0.2, 0.5}}, zp{{-0.1, 0.4}, {0.6, 0.0}};
    const CoherentVector v = coherent_state(z, b), w = coherent_state(zp, b);
    CHECK(v.truncation_error < 1e-8);
    CHECK(std::abs(v.state.squaredNorm() - 1.0) <= v.truncation_error + 1e-14);
    CHECK(std::abs(v.state.dot(w.state) - coherent_overlap(z, zp)) < 1e-8);
    for (int j = 0; j < 2; ++j) {
        const LadderPair L = ladder_operators(b, j);
        CHECK(std::abs(expectation(v, number_operator(b, j, j + 1)) - std::norm(z[j])) < 1e-8);
        const Eigen::VectorXcd az = L.a.matrix * v.state - z[j] * v.state;
        CHECK(az.norm() < 1e-4);
    }
    CHECK_THROWS_AS(coherent_state({3.0, 3.0}, FockBasis(2, 10)), InvalidArgument);
}

TEST_CASE("normal ordering and parsing") {
    const OperatorPolynomial p = OperatorPolynomial::parse("a adag", 1);
    REQUIRE(p.terms().size() == 2);
    FockBasis b(1, 6);
    const Eigen::MatrixXcd M = dense(p.to_operator(b));
    for (int s = 0; s < 6; ++s) CHECK(M(s, s).real() == doctest::Approx(b.state(s)[0] + 1.0));
    const OperatorPolynomial q = OperatorPolynomial::parse("2*adag_1 a_2 - (0,1) adag_2 a_1 + 0.5", 2);
    CHECK(q.terms().size() == 3);
    CHECK(q.degree() == 2);
    CHECK_THROWS_AS(OperatorPolynomial::parse("adag_3", 2), InvalidArgument);
    CHECK_THROWS_AS(OperatorPolynomial::parse("b", 1), InvalidArgument);
    CHECK_THROWS_AS(OperatorPolynomial::parse("", 1), InvalidArgument);
}

TEST_CASE("lower and upper symbols of the basic monomials") {
    const std::vector<cplx> z{{0.7, 0.2}};
    const double r2 = std::norm(z[0]);
    const OperatorPolynomial n = OperatorPolynomial::parse("adag a", 1);
    CHECK(std::abs(lower_symbol(n)(z) - r2) < 1e-15);
    CHECK(std::abs(upper_symbol(n)(z) - (r2 - 1.0)) < 1e-15);
    const OperatorPolynomial c = OperatorPolynomial::parse("adag", 1);
    CHECK(std::abs(lower_symbol(c)(z) - std::conj(z[0])) < 1e-15);
    CHECK(std::abs(upper_symbol(c)(z) - std::conj(z[0])) < 1e-15);
    const OperatorPolynomial q = OperatorPolynomial::parse("adag adag a a", 1);
    CHECK(std::abs(lower_symbol(q)(z) - r2 * r2) < 1e-15);
    CHECK(std::abs(upper_symbol(q)(z) - (r2 * r2 - 4.0 * r2 + 2.0)) < 1e-14);
    CHECK_THROWS_AS(upper_symbol(OperatorPolynomial::parse("adag adag adag a a", 1)), InvalidArgument);
}

TEST_CASE("lower symbol equals the coherent expectation; heat flow round trip") {
    FockBasis b(2, 60);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd(0.0, 0.5);
    for (const char* text : {"adag_1 a_2 + adag_2 a_1", "adag_1 adag_2 a_1 a_2", "a_1 adag_1 a_2 adag_2",
                             "(0.3,0.1) adag_1 adag_1 a_2 a_2 + (0.3,-0.1) adag_2 adag_2 a_1 a_1", "adag_1 + a_2 + 1"}) {
        const OperatorPolynomial op = OperatorPolynomial::parse(text, 2);
        const FockOperator A = op.to_operator(b);
        const SymbolPolynomial lo = lower_symbol(op);
        CHECK(upper_symbol(op).heat(+1).distance(lo) < 1e-14);
        for (int t = 0; t < 5; ++t) {
            const std::vector<cplx> z{{nd(rng), nd(rng)}, {nd(rng), nd(rng)}};
            const CoherentVector v = coherent_state(z, b);
            CHECK(std::abs(expectation(v, A) - lo(z)) < 1e-8);
        }
    }
}

TEST_CASE("coherent resolution of identity and operator reconstruction") {
    for (const char* text : {"1", "adag a", "adag", "adag adag a a"}) {
        const ResolutionReport r = verify_resolution(OperatorPolynomial::parse(text, 1));
        CHECK(r.block == 4);
        CHECK(r.identity_error < 1e-6);
        CHECK(r.operator_error < 1e-6);
    }
    for (const char* text : {"adag_1 a_2 + adag_2 a_1", "adag_1 adag_2 a_1 a_2"}) {
        const ResolutionReport r = verify_resolution(OperatorPolynomial::parse(text, 2));
        CHECK(r.block == 10);
        CHECK(r.identity_error < 1e-6);
        CHECK(r.operator_error < 1e-6);
    }
    // A radius of 2 misses most of the weight of n = 3.
    ResolutionOptions small;
    small.Z = 2.0;
    CHECK(verify_resolution(OperatorPolynomial::parse("1", 1), small).identity_error > 1e-2);
    ResolutionOptions coarse;
    coarse.angular = 6;
    CHECK_THROWS_AS(verify_resolution(OperatorPolynomial::parse("adag a", 1), coarse), InvalidArgument);
}

TEST_CASE("error constants match an independent evaluation") {
    std::vector<double> e;
    for (int j = 1; j <= 20; ++j) e.push_back(double(j) * j * j);
    // a = 0.01, E = 0.03, eta = 2, delta = 0.1, C = 1, J = 20, e_j = j^3.
    const ErrorConstants d8 = error_constants(gp_scaling_inputs(0.01, 1e8, 0.1, 2.0, 0.03, 1.0, e, 20));
    CHECK(d8.D1 - 0.9 == doctest::Approx(-0.0056857305413556825).epsilon(1e-10));
    CHECK(d8.D2 == doctest::Approx(0.007358711601483025).epsilon(1e-10));
    CHECK(d8.D3 / 1e8 == doctest::Approx(0.000501001459739132).epsilon(1e-10));
    CHECK(std::abs(d8.D1 - 0.9) < 0.01);
    CHECK(d8.D2 < 0.01);
    CHECK(d8.D3 / 1e8 < 0.01);
    CHECK(d8.D1 <= 1.0);
    // Limits are approached, not reached at N = 1e6.
    const ErrorConstants d6 = error_constants(gp_scaling_inputs(0.01, 1e6, 0.1, 2.0, 0.03, 1.0, e, 20));
    CHECK(d6.D2 > d8.D2);
    CHECK(d6.D3 / 1e6 > d8.D3 / 1e8);
    // The O(1) instance is far from its limit at N = 1e8.
    const ErrorConstants big = error_constants(gp_scaling_inputs(1.0, 1e8, 0.1, 1.0, 1.0, 1.0, e, 20));
    CHECK(big.D1 - 0.9 == doctest::Approx(-1.5806589029013867).epsilon(1e-10));
    CHECK_THROWS_AS(error_constants(gp_scaling_inputs(0.01, 1e8, 0.1, 2.0, 0.03, 1.0, e, 21)), InvalidArgument);
}

TEST_CASE("hat transform against direct quadrature") {
    const double R = 0.3, r0 = std::cbrt(0.5) * R;
    CHECK(hat_potential_transform(R, 0.0) == doctest::Approx(4.0 * pi).epsilon(1e-14));
    for (double kR : {1e-6, 1e-3, 0.04999, 0.05001, 0.5, 3.0, 40.0}) {
        const double k = kR / R;
        auto f = [k](double r) { return r * r * (k * r == 0.0 ? 1.0 : std::sin(k * r) / (k * r)); };
        const double oracle = 6.0 / (R * R * R) * 4.0 * pi *
                              boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, r0, R, 0, 1e-14);
        CHECK(hat_potential_transform(R, k) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("smoothing estimate for a Gaussian and a vortex") {
    const Grid g(3, 32, 12.0);
    const ComplexField gauss = ComplexField::sample(g, [](double x, double y, double z) {
        return cplx(std::exp(-0.5 * (x * x + y * y + z * z)));
    });
    double prev_lhs = INFINITY;
    for (double R : {0.4, 0.2, 0.1, 0.05}) {
        const SmoothingEstimate s = smoothing_estimate_check(gauss, R);
        // rho * rho (r) = (pi/2)^{3/2} e^{-r^2/2}.
        auto f = [](double r) { return r * r * std::exp(-0.5 * r * r); };
        const double oracle = 6.0 / (R * R * R) * 4.0 * pi * std::pow(pi / 2.0, 1.5) *
                              boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, std::cbrt(0.5) * R, R);
        CHECK(s.convolution == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(s.holds);
        CHECK(s.lhs < prev_lhs);
        CHECK(s.rhs == doctest::Approx(8.0 * pi * R * std::pow(norm_p(gauss, 6.0), 3) * std::sqrt(gradient_norm_sq(gauss))));
        prev_lhs = s.lhs;
    }
    CHECK(smoothing_estimate_check(gauss, 1e-4).lhs < 1e-6);
    const ComplexField vortex = ComplexField::sample(g, [](double x, double y, double z) {
        return cplx(x, y) * std::exp(-0.5 * (x * x + y * y + z * z));
    });
    for (double R : {0.4, 0.1}) CHECK(smoothing_estimate_check(vortex, R).holds);
}
