#include "fock/hamiltonian.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/lobpcg.hpp"

namespace rotogp {

cplx ModeBasis::w(int i, int j, int k, int l) const {
    const int J = modes();
    return W[((static_cast<std::size_t>(i) * J + j) * J + k) * J + l];
}

void ModeBasis::validate(double tol) const {
    const int J = modes();
    if (J < 1) throw InvalidArgument("mode basis needs at least one mode");
    if (W.size() != static_cast<std::size_t>(J) * J * J * J) throw InvalidArgument("W must have J^4 entries");
    for (int j = 1; j < J; ++j)
        if (e[j] < e[j - 1]) throw InvalidArgument("one-particle energies must be nondecreasing");
    if (!(M > 0.0) || !(C >= 0.0)) throw InvalidArgument("need M > 0 and C >= 0");
    for (int i = 0; i < J; ++i)
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < J; ++k)
                for (int l = 0; l < J; ++l) {
                    const cplx v = w(i, j, k, l);
                    if (std::abs(v - std::conj(w(k, l, i, j))) > tol) throw InvalidArgument("W is not hermitian");
                    if (std::abs(v - w(j, i, k, l)) > tol || std::abs(v - w(i, j, l, k)) > tol)
                        throw InvalidArgument("W is not symmetric under i<->j, k<->l");
                }
}

double ModeBasis::pair_space_min_eigenvalue() const {
    const int J = modes();
    Eigen::MatrixXcd P(J * J, J * J);
    for (int i = 0; i < J; ++i)
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < J; ++k)
                for (int l = 0; l < J; ++l) P(i * J + j, k * J + l) = w(i, j, k, l);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(P).eigenvalues()(0);
}

FockOperator build_hamiltonian(const ModeBasis& mb, const FockBasis& basis, bool include_penalty) {
    mb.validate();
    const int J = mb.modes();
    if (basis.modes() != J) throw InvalidArgument("mode basis and Fock basis differ in J");
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int s = 0; s < basis.size(); ++s) {
        const Occupation& n = basis.state(s);
        double diag = 0.0;
        int total = 0;
        for (int j = 0; j < J; ++j) {
            diag += mb.e[j] * n[j];
            total += n[j];
        }
        if (include_penalty) diag += mb.C / mb.M * (total - mb.M) * (total - mb.M);
        if (diag != 0.0) trip.emplace_back(s, s, diag);
        // a_i^dag a_j^dag a_k a_l |n>: remove l then k, add j then i.
        for (int k = 0; k < J; ++k)
            for (int l = 0; l < J; ++l) {
                Occupation m = n;
                double amp = std::sqrt(double(m[l]));
                if (m[l] == 0) continue;
                --m[l];
                if (m[k] == 0) continue;
                amp *= std::sqrt(double(m[k]));
                --m[k];
                for (int i = 0; i < J; ++i)
                    for (int j = 0; j < J; ++j) {
                        const cplx v = mb.w(i, j, k, l);
                        if (v == 0.0) continue;
                        Occupation q = m;
                        ++q[j];
                        double a2 = amp * std::sqrt(double(q[j]));
                        ++q[i];
                        a2 *= std::sqrt(double(q[i]));
                        const int t = basis.index(q);
                        if (t >= 0) trip.emplace_back(t, s, v * a2);
                    }
            }
    }
    FockOperator H;
    H.matrix.resize(basis.size(), basis.size());
    H.matrix.setFromTriplets(trip.begin(), trip.end());
    H.hermitian = H.hermiticity_defect() <= 1e-12;
    if (!H.hermitian) throw NumericalError("assembled Hamiltonian is not hermitian");
    return H;
}

GroundState ground_state(const FockOperator& H, const FockBasis& basis, int N, double tol) {
    if (H.matrix.rows() != basis.size()) throw InvalidArgument("operator does not match basis");
    GroundState out;
    out.sector = basis.sector(N);
    const int d = static_cast<int>(out.sector.size());
    if (d == 0) throw InvalidArgument("sector N outside the truncation");
    // Sector block.
    std::vector<int> pos(basis.size(), -1);
    for (int i = 0; i < d; ++i) pos[out.sector[i]] = i;
    SparseMatrix Hs(d, d);
    {
        std::vector<Eigen::Triplet<cplx>> trip;
        for (int k = 0; k < H.matrix.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(H.matrix, k); it; ++it) {
                const int r = pos[it.row()], c = pos[it.col()];
                if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
                else if ((r >= 0) != (c >= 0) && std::abs(it.value()) > 1e-14)
                    throw InvalidArgument("operator does not conserve particle number");
            }
        Hs.setFromTriplets(trip.begin(), trip.end());
    }
    if (d <= 3000) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(Hs)};
        out.energy = es.eigenvalues()(0);
        out.vector = es.eigenvectors().col(0);
    } else {
        BlockOperator A = [&](const Eigen::MatrixXcd& X, Eigen::MatrixXcd& Y) { Y = Hs * X; };
        Eigen::VectorXd diag = Eigen::VectorXd(Hs.diagonal().real());
        const double shift = std::abs(diag.minCoeff()) + 1.0;
        BlockOperator T = [&](const Eigen::MatrixXcd& X, Eigen::MatrixXcd& Y) {
            Y.resize(X.rows(), X.cols());
            for (int c = 0; c < X.cols(); ++c)
                for (int i = 0; i < X.rows(); ++i) Y(i, c) = X(i, c) / (diag(i) - diag.minCoeff() + shift);
        };
        Eigen::MatrixXcd X0 = Eigen::MatrixXcd::Random(d, 4);
        LobpcgResult r = lobpcg(A, T, X0, 1, tol * 0.1, 2000);
        if (!r.converged) throw NotConverged("sector eigensolver did not converge");
        out.energy = r.values(0);
        out.vector = r.vectors.col(0);
    }
    out.residual = (Hs * out.vector - out.energy * out.vector).norm();
    if (out.residual > tol * std::max(1.0, std::abs(out.energy)))
        throw NotConverged("ground state residual " + std::to_string(out.residual) + " above tolerance");
    return out;
}

HartreeMinimum hartree_minimum(const ModeBasis& mb, double g) {
    mb.validate();
    if (mb.modes() != 2) throw InvalidArgument("Hartree minimization implemented for J = 2");
    auto energy = [&](double t, double p) {
        const std::vector<cplx> c{std::cos(t), std::polar(std::sin(t), p)};
        cplx quartic = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        quartic += mb.w(i, j, k, l) * std::conj(c[i]) * std::conj(c[j]) * c[k] * c[l];
        return mb.e[0] * std::norm(c[0]) + mb.e[1] * std::norm(c[1]) + g * quartic.real();
    };
    // Coarse scan, then alternating Brent refinement.
    const double pi = std::numbers::pi;
    double bt = 0, bp = 0, best = energy(0, 0);
    const int n = 200;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b < n; ++b) {
            const double t = 0.5 * pi * a / n, p = 2.0 * pi * b / n;
            const double v = energy(t, p);
            if (v < best) best = v, bt = t, bp = p;
        }
    for (int sweep = 0; sweep < 20; ++sweep) {
        auto rt = boost::math::tools::brent_find_minima([&](double t) { return energy(t, bp); },
                                                        std::max(0.0, bt - pi / n), std::min(0.5 * pi, bt + pi / n), 52);
        bt = rt.first;
        auto rp = boost::math::tools::brent_find_minima([&](double p) { return energy(bt, p); }, bp - 2 * pi / n,
                                                        bp + 2 * pi / n, 52);
        bp = rp.first;
        best = std::min(best, energy(bt, bp));
    }
    HartreeMinimum out;
    out.energy = energy(bt, bp);
    out.c = {std::cos(bt), std::polar(std::sin(bt), bp)};
    return out;
}

ModeBasis two_mode_oscillator() {
    const double base = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    ModeBasis mb;
    mb.e = {0.5, 1.5};
    mb.W.assign(16, 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const int ones = (i == 1) + (j == 1) + (k == 1) + (l == 1);
                    double v = 0.0;
                    if (ones == 0) v = base;
                    else if (ones == 2) v = 0.5 * base;
                    else if (ones == 4) v = 0.75 * base;
                    mb.W[((i * 2 + j) * 2 + k) * 2 + l] = v;
                }
    return mb;
}

}  // namespace rotogp
