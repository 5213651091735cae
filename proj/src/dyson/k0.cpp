#include "dyson/k0.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/lobpcg.hpp"
#include "field/gauge.hpp"
#include "field/spectral.hpp"

namespace rotogp {

namespace {

// Fourier multiplier m(k) plus rotation, optional |A|^2, plus a real potential.
struct GridOperator {
    KineticOperator kin;
    std::vector<double> multiplier;  // FFT order
    std::vector<double> potential;
    bool a2 = false;

    void apply(const Eigen::MatrixXcd& X, Eigen::MatrixXcd& Y) const {
        const Grid& g = kin.grid();
        const std::size_t n = g.size();
        std::vector<cplx> hat(n), work(n), rot(n);
        Y.resize(X.rows(), X.cols());
        for (int c = 0; c < X.cols(); ++c) {
            const cplx* in = X.col(c).data();
            fft(g, in, hat.data(), Direction::forward);
            for (std::size_t i = 0; i < n; ++i) hat[i] *= multiplier[i];
            fft(g, hat.data(), work.data(), Direction::inverse);
            kin.apply(in, rot.data(), 0.0, true, a2);
            cplx* out = Y.col(c).data();
            for (std::size_t i = 0; i < n; ++i) out[i] = work[i] + rot[i] + potential[i] * in[i];
        }
    }
};

std::vector<double> quartic(const Grid& g, double eta) {
    std::vector<double> q(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = g.position(i);
        const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        q[i] = eta * r2 * r2;
    }
    return q;
}

// Gaussian times low-degree monomials, ordered by total degree.
Eigen::MatrixXcd initial_block(const Grid& g, int k) {
    std::vector<std::array<int, 3>> powers;
    for (int deg = 0; static_cast<int>(powers.size()) < k; ++deg)
        for (int a = deg; a >= 0; --a)
            for (int b = deg - a; b >= 0; --b) {
                const int c = deg - a - b;
                if (g.dim() == 2 && c != 0) continue;
                powers.push_back({a, b, c});
            }
    Eigen::MatrixXcd X(g.size(), k);
    for (int j = 0; j < k; ++j)
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto x = g.position(i);
            const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            X(i, j) = std::pow(x[0], powers[j][0]) * std::pow(x[1], powers[j][1]) *
                      std::pow(x[2], powers[j][2]) * std::exp(-0.5 * r2) *
                      cplx(1.0, 0.01 * (j + 1));
        }
    return X;
}

LobpcgResult solve_lowest(const GridOperator& op, double shift, int wanted, const K0Options& opts) {
    const Grid& g = op.kin.grid();
    const std::size_t n = g.size();
    std::vector<double> pre(n);
    for (std::size_t i = 0; i < n; ++i) pre[i] = 1.0 / (op.multiplier[i] + shift);
    BlockOperator A = [&](const Eigen::MatrixXcd& X, Eigen::MatrixXcd& Y) { op.apply(X, Y); };
    std::vector<double> pot_inv(n);
    for (std::size_t i = 0; i < n; ++i) pot_inv[i] = 1.0 / (std::max(op.potential[i], 0.0) + shift);
    // Average of the kinetic and potential inverses: both ends of the
    // spectrum (large k, large |x|) are damped.
    BlockOperator T = [&](const Eigen::MatrixXcd& X, Eigen::MatrixXcd& Y) {
        Y.resize(X.rows(), X.cols());
        std::vector<cplx> hat(n), back(n);
        for (int c = 0; c < X.cols(); ++c) {
            fft(g, X.col(c).data(), hat.data(), Direction::forward);
            for (std::size_t i = 0; i < n; ++i) hat[i] *= pre[i];
            fft(g, hat.data(), back.data(), Direction::inverse);
            const cplx* x = X.col(c).data();
            cplx* y = Y.col(c).data();
            for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * (back[i] + pot_inv[i] * x[i]);
        }
    };
    LobpcgResult res = lobpcg(A, T, initial_block(g, wanted + opts.guard), wanted, opts.tol, opts.max_iter);
    if (!res.converged)
        throw NotConverged("eigensolver did not converge (residual " + std::to_string(res.residuals.maxCoeff()) + ")");
    return res;
}

double max_boundary(const Grid& g, const Eigen::MatrixXcd& V, int count) {
    double worst = 0.0;
    for (int j = 0; j < count; ++j) {
        ComplexField f(g, std::vector<cplx>(V.col(j).data(), V.col(j).data() + V.rows()));
        worst = std::max(worst, boundary_ratio(f));
    }
    return worst;
}

}  // namespace

KappaResult compute_kappa(const Grid& grid, const std::array<double, 3>& omega, double eta,
                          const K0Options& opts) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");
    GridOperator op{KineticOperator(GaugeField(grid, omega)), k_squared(grid), quartic(grid, eta), false};
    for (double& m : op.multiplier) m *= eta;
    const LobpcgResult res = solve_lowest(op, 1.0 + 4.0 * eta, 1, opts);
    KappaResult out;
    out.kappa = res.values(0);
    out.iterations = res.iterations;
    out.boundary = max_boundary(grid, res.vectors, 1);
    if (out.boundary > opts.decay_limit)
        throw InvalidArgument("insufficient box size: kappa eigenvector not decayed at the boundary");
    return out;
}

ModifiedOneBody build_K0(const GpProblem& p, const CutoffFunction& chi, double eta, int J,
                         const K0Options& opts) {
    p.validate();
    if (J < 1) throw InvalidArgument("J must be >= 1");
    const Grid& g = p.grid;
    ModifiedOneBody out;
    out.eta = eta;
    out.kappa = compute_kappa(g, p.omega, eta, opts).kappa;

    GridOperator op{KineticOperator(GaugeField(g, p.omega)), k_squared(g), quartic(g, eta), true};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double k2 = op.multiplier[i];
        const double c = chi.chi(std::sqrt(k2));
        op.multiplier[i] = k2 * (1.0 - c * c) + 2.0 * eta * k2;
        op.potential[i] += p.V[i] - out.kappa;
    }
    const LobpcgResult res = solve_lowest(op, 1.0 + std::abs(out.kappa), J, opts);
    out.iterations = res.iterations;
    out.boundary = max_boundary(g, res.vectors, J);
    if (out.boundary > opts.decay_limit)
        throw InvalidArgument("insufficient box size: K0 eigenvectors not decayed at the boundary");
    const double scale = 1.0 / std::sqrt(g.cell_volume());
    for (int j = 0; j < J; ++j) {
        out.e.push_back(res.values(j));
        std::vector<cplx> v(res.vectors.col(j).data(), res.vectors.col(j).data() + res.vectors.rows());
        for (cplx& z : v) z *= scale;
        out.phi.emplace_back(g, std::move(v));
    }
    return out;
}

}  // namespace rotogp
