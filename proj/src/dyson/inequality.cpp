#include "dyson/inequality.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/quadrature.hpp"

namespace rotogp {

namespace {

constexpr int kElementPoints = 6;
constexpr int kMomentumPoints = 96;  // per panel

double riccati_bessel(int l, double x) {
    if (l == 0) return std::sin(x);
    return x * boost::math::sph_bessel(static_cast<unsigned>(l), x);
}

struct Mesh {
    std::vector<double> nodes;  // includes both Dirichlet ends
};

// Geometric grid from r_lo with first step d0 and ratio q, step capped at
// cap; breakpoints inserted as nodes.
Mesh build_mesh(double r_lo, double r_hi, double d0, double q, double cap,
                std::vector<double> breaks) {
    std::vector<double> raw{r_lo};
    double step = d0, r = r_lo;
    while (r + step < r_hi) {
        r += step;
        raw.push_back(r);
        step = std::min(step * q, cap);
    }
    raw.push_back(r_hi);
    std::sort(breaks.begin(), breaks.end());
    for (double b : breaks) {
        if (!(b > r_lo && b < r_hi)) continue;
        auto it = std::lower_bound(raw.begin(), raw.end(), b);
        const double local = *it - *(it - 1);
        // Drop neighbours too close to the breakpoint, keeping the ends.
        std::vector<double> keep;
        for (double x : raw)
            if (x == r_lo || x == r_hi || std::abs(x - b) > 0.3 * local) keep.push_back(x);
        keep.push_back(b);
        std::sort(keep.begin(), keep.end());
        raw = std::move(keep);
    }
    return {raw};
}

struct ChannelProblem {
    Eigen::MatrixXd K, V, M, G;  // G: momentum rows times interior nodes
    Eigen::VectorXd c;           // B = G^T diag(c) G
};

// Quadratic form of A = K + V - B evaluated term by term.
double rayleigh(const ChannelProblem& P, const std::vector<double>& x, const Eigen::VectorXd& u) {
    const int n = static_cast<int>(u.size());
    double kin = 0.0;
    for (int e = 0; e + 1 < static_cast<int>(x.size()); ++e) {
        const double ul = e == 0 ? 0.0 : u(e - 1);
        const double ur = e == n ? 0.0 : u(e);
        kin += (ur - ul) * (ur - ul) / (x[e + 1] - x[e]);
    }
    const double pot = u.dot(P.V * u);
    const Eigen::VectorXd gu = P.G * u;
    const double b = gu.dot(P.c.asDiagonal() * gu);
    return (kin + pot - b) / u.dot(P.M * u);
}

double lowest_eigenvalue(const std::vector<double>& x, int l, const std::function<double(double)>& veff,
                         double s, const CutoffFunction& chi) {
    const int n = static_cast<int>(x.size()) - 2;
    if (n < 4) throw InvalidArgument("radial mesh too small");
    ChannelProblem P;
    P.K = Eigen::MatrixXd::Zero(n, n);
    P.V = Eigen::MatrixXd::Zero(n, n);
    P.M = Eigen::MatrixXd::Zero(n, n);
    const QuadratureRule ref = gauss_legendre(kElementPoints, 0.0, 1.0);
    const QuadratureRule kq = composite_gauss_legendre({0.0, 1.0 / s, 2.0 / s}, kMomentumPoints);
    const int nk = static_cast<int>(kq.nodes.size());
    P.G = Eigen::MatrixXd::Zero(nk, n);
    P.c.resize(nk);
    for (int q = 0; q < nk; ++q) {
        const double k = kq.nodes[q], chik = chi.chi(k);
        P.c(q) = 2.0 / std::numbers::pi * kq.weights[q] * k * k * (1.0 - chik * chik);
    }
    for (int e = 0; e + 1 < static_cast<int>(x.size()); ++e) {
        const double h = x[e + 1] - x[e];
        const int il = e - 1, ir = e;  // interior indices, -1 or n means Dirichlet
        const bool hl = il >= 0, hr = ir < n;
        double kll = 1.0 / h;
        if (hl) P.K(il, il) += kll;
        if (hr) P.K(ir, ir) += kll;
        if (hl && hr) {
            P.K(il, ir) -= kll;
            P.K(ir, il) -= kll;
            P.M(il, ir) += h / 6.0;
            P.M(ir, il) += h / 6.0;
        }
        if (hl) P.M(il, il) += h / 3.0;
        if (hr) P.M(ir, ir) += h / 3.0;
        double vll = 0, vlr = 0, vrr = 0;
        for (int g = 0; g < kElementPoints; ++g) {
            const double t = ref.nodes[g], wt = ref.weights[g] * h;
            const double r = x[e] + t * h;
            const double phl = 1.0 - t, phr = t;
            const double v = veff(r) + (l > 0 ? l * (l + 1) / (r * r) : 0.0);
            vll += wt * v * phl * phl;
            vlr += wt * v * phl * phr;
            vrr += wt * v * phr * phr;
            for (int q = 0; q < nk; ++q) {
                const double jb = riccati_bessel(l, kq.nodes[q] * r);
                if (hl) P.G(q, il) += wt * phl * jb;
                if (hr) P.G(q, ir) += wt * phr * jb;
            }
        }
        if (hl) P.V(il, il) += vll;
        if (hr) P.V(ir, ir) += vrr;
        if (hl && hr) {
            P.V(il, ir) += vlr;
            P.V(ir, il) += vlr;
        }
    }
    const Eigen::MatrixXd A = P.K + P.V - P.G.transpose() * P.c.asDiagonal() * P.G;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, P.M);
    if (es.info() != Eigen::Success) throw NumericalError("radial eigensolver failed");
    Eigen::VectorXd u = es.eigenvectors().col(0);
    double lambda = es.eigenvalues()(0);
    // Inverse iteration at the computed eigenvalue, then a term-by-term
    // Rayleigh quotient, removes the conditioning error of the dense solve.
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A - lambda * P.M);
    for (int it = 0; it < 2; ++it) {
        Eigen::VectorXd next = lu.solve(P.M * u);
        if (!next.allFinite() || next.norm() == 0.0) break;
        u = next / next.norm();
    }
    lambda = std::min(lambda, rayleigh(P, x, u));
    if (!std::isfinite(lambda)) throw NumericalError("non-finite radial eigenvalue");
    return lambda;
}

}  // namespace

DysonCheckResult check_dyson_inequality(const RadialPotential& w, double N, const SoftPotentials& sp,
                                        const CutoffFunction& chi, const DysonCheckOptions& opts) {
    if (!(N >= 1.0)) throw InvalidArgument("N must be >= 1");
    if (opts.levels < 2) throw InvalidArgument("at least two refinement levels are needed");
    if (opts.channels.empty()) throw InvalidArgument("no angular momentum channels");
    for (int l : opts.channels)
        if (l < 0) throw InvalidArgument("negative angular momentum channel");
    if (std::abs(chi.s() - sp.s) > 1e-14 * sp.s) throw InvalidArgument("cutoff scale differs from the soft potentials");
    w.validate();

    DysonCheckResult out;
    out.N = N;
    out.a = scattering_length(w, 1e-12, opts.scattering_factor).a;
    const RadialPotential vN = scale_interaction(w, N);
    if (!(opts.a_multiplier >= 0.0)) throw InvalidArgument("a_multiplier must be >= 0");
    const double aN = opts.a_multiplier * out.a / N;
    const double R = sp.R, eps = sp.epsilon, s = sp.s;
    if (vN.R0 > R) throw InvalidArgument("R must exceed the range R0/N of v_N");
    out.slack = std::max(1e-6 * (out.a / N) * sp.UR_sup, 1e-10);

    const double r_lo = vN.hard_core_radius, r_hi = sp.r_max();
    std::vector<double> breaks{R, std::cbrt(0.5) * R};
    if (vN.R0 > r_lo) breaks.push_back(vN.R0);
    for (double b : vN.breakpoints) breaks.push_back(b);
    double d0 = std::min((1.0 - std::cbrt(0.5)) * R / 6.0, s / 50.0);
    if (vN.R0 > r_lo) d0 = std::min(d0, (vN.R0 - r_lo) / 6.0);

    auto veff = [&](double r) {
        double v = 0.0;
        if (r > r_lo && r < vN.R0) v += 0.5 * vN(r);
        v -= (1.0 - eps) * aN * hat_potential(R, r);
        v += aN / eps * sp.wR_at(r);
        return v;
    };

    for (int level = 0; level < opts.levels; ++level) {
        const double scale = std::ldexp(1.0, -level);
        const Mesh mesh = build_mesh(r_lo, r_hi, d0 * scale, 1.0 + 0.12 * scale, s / 6.0 * std::sqrt(scale) ,
                                     breaks);
        DysonLevel lv;
        lv.nodes = static_cast<int>(mesh.nodes.size());
        lv.min_eig = INFINITY;
        for (int l : opts.channels) {
            lv.channel_min.push_back(lowest_eigenvalue(mesh.nodes, l, veff, s, chi));
            lv.min_eig = std::min(lv.min_eig, lv.channel_min.back());
        }
        out.levels.push_back(lv);
    }
    out.min_eig = out.levels.back().min_eig;
    out.drift = std::abs(out.min_eig - out.levels[out.levels.size() - 2].min_eig);
    // Nested Galerkin eigenvalues decrease towards the continuum value; the
    // finest value minus the last drift is the extrapolated lower estimate.
    out.extrapolated = out.min_eig - out.drift;
    bool levels_ok = true;
    for (const DysonLevel& lv : out.levels)
        if (lv.min_eig < -out.slack) levels_ok = false;
    if (levels_ok && out.drift > out.slack && out.extrapolated < -out.slack)
        throw NotConverged("radial grid too coarse: eigenvalue drift " + std::to_string(out.drift) +
                           " exceeds slack " + std::to_string(out.slack) + " and leaves the sign unresolved");
    out.passed = levels_ok && out.extrapolated >= -out.slack;
    return out;
}

}  // namespace rotogp
