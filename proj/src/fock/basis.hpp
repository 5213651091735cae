#pragma once

#include <Eigen/Sparse>
#include <complex>
#include <map>
#include <vector>

namespace rotogp {

using cplx = std::complex<double>;
using Occupation = std::vector<int>;

// Occupation vectors (n_1..n_J) with sum n_j <= n_max, ordered by total
// number, then lexicographically descending.
class FockBasis {
public:
    FockBasis(int modes, int n_max);

    int modes() const { return modes_; }
    int n_max() const { return n_max_; }
    int size() const { return static_cast<int>(states_.size()); }
    const Occupation& state(int i) const { return states_[i]; }
    // -1 when the occupation is outside the truncation.
    int index(const Occupation& n) const;
    int total(int i) const { return totals_[i]; }
    // Indices of the states with sum n_j = N, in basis order.
    std::vector<int> sector(int N) const;

private:
    int modes_, n_max_;
    std::vector<Occupation> states_;
    std::vector<int> totals_;
    std::map<Occupation, int> lookup_;
};

// binomial(n_max + J, J).
long long fock_dimension(int modes, int n_max);

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

struct FockOperator {
    SparseMatrix matrix;
    bool hermitian = false;

    // max |A_ij - conj(A_ji)|.
    double hermiticity_defect() const;
};

struct LadderPair {
    FockOperator a, adag;
    // States whose a_j^dagger image leaves the truncation (top sector).
    std::vector<int> leakage;
};

// a_j |n> = sqrt(n_j) |n - e_j>, a_j^dagger |n> = sqrt(n_j + 1) |n + e_j>
// (dropped when sum n = n_max). Modes are 0-based.
LadderPair ladder_operators(const FockBasis& basis, int j);

// sum_{j in [first, last)} a_j^dagger a_j.
FockOperator number_operator(const FockBasis& basis, int first = 0, int last = -1);
// sum_{j in [first, first + e.size())} e_j a_j^dagger a_j (e.g. T for modes above a split).
FockOperator one_body_operator(const FockBasis& basis, const std::vector<double>& e, int first = 0);
// ||A B - B A|| in the max-entry norm.
double commutator_defect(const FockOperator& A, const FockOperator& B);

}  // namespace rotogp
