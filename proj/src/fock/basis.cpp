#include "fock/basis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "core/errors.hpp"

namespace rotogp {

namespace {

double max_entry(const SparseMatrix& m) {
    double out = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
    return out;
}

}  // namespace

long long fock_dimension(int modes, int n_max) {
    long long c = 1;
    for (int i = 1; i <= modes; ++i) c = c * (n_max + i) / i;
    return c;
}

FockBasis::FockBasis(int modes, int n_max) : modes_(modes), n_max_(n_max) {
    if (modes < 1) throw InvalidArgument("Fock basis needs at least one mode");
    if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
    if (fock_dimension(modes, n_max) > 2000000) throw InvalidArgument("Fock basis too large");
    Occupation occ(modes, 0);
    for (int N = 0; N <= n_max; ++N) {
        // Compositions of N into `modes` parts, first mode largest first.
        std::function<void(int, int)> fill = [&](int mode, int left) {
            if (mode == modes - 1) {
                occ[mode] = left;
                lookup_[occ] = static_cast<int>(states_.size());
                states_.push_back(occ);
                totals_.push_back(N);
                return;
            }
            for (int k = left; k >= 0; --k) {
                occ[mode] = k;
                fill(mode + 1, left - k);
            }
        };
        fill(0, N);
    }
}

int FockBasis::index(const Occupation& n) const {
    auto it = lookup_.find(n);
    return it == lookup_.end() ? -1 : it->second;
}

std::vector<int> FockBasis::sector(int N) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (totals_[i] == N) out.push_back(i);
    return out;
}

double FockOperator::hermiticity_defect() const {
    SparseMatrix diff = matrix - SparseMatrix(matrix.adjoint());
    return max_entry(diff);
}

LadderPair ladder_operators(const FockBasis& basis, int j) {
    if (j < 0 || j >= basis.modes()) throw InvalidArgument("invalid mode index");
    std::vector<Eigen::Triplet<cplx>> ta, tc;
    LadderPair out;
    for (int i = 0; i < basis.size(); ++i) {
        Occupation n = basis.state(i);
        if (n[j] > 0) {
            Occupation m = n;
            --m[j];
            ta.emplace_back(basis.index(m), i, std::sqrt(double(n[j])));
        }
        Occupation m = n;
        ++m[j];
        const int k = basis.index(m);
        if (k >= 0)
            tc.emplace_back(k, i, std::sqrt(double(n[j] + 1)));
        else
            out.leakage.push_back(i);
    }
    out.a.matrix.resize(basis.size(), basis.size());
    out.a.matrix.setFromTriplets(ta.begin(), ta.end());
    out.adag.matrix.resize(basis.size(), basis.size());
    out.adag.matrix.setFromTriplets(tc.begin(), tc.end());
    return out;
}

FockOperator one_body_operator(const FockBasis& basis, const std::vector<double>& e, int first) {
    if (first < 0 || first + static_cast<int>(e.size()) > basis.modes())
        throw InvalidArgument("one-body operator modes out of range");
    std::vector<Eigen::Triplet<cplx>> t;
    for (int i = 0; i < basis.size(); ++i) {
        double v = 0.0;
        for (std::size_t k = 0; k < e.size(); ++k) v += e[k] * basis.state(i)[first + k];
        if (v != 0.0) t.emplace_back(i, i, v);
    }
    FockOperator out;
    out.matrix.resize(basis.size(), basis.size());
    out.matrix.setFromTriplets(t.begin(), t.end());
    out.hermitian = true;
    return out;
}

FockOperator number_operator(const FockBasis& basis, int first, int last) {
    if (last < 0) last = basis.modes();
    if (last < first) throw InvalidArgument("empty mode range");
    return one_body_operator(basis, std::vector<double>(last - first, 1.0), first);
}

double commutator_defect(const FockOperator& A, const FockOperator& B) {
    SparseMatrix c = A.matrix * B.matrix - B.matrix * A.matrix;
    return max_entry(c);
}

}  // namespace rotogp
