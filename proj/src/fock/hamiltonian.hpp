#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fock/basis.hpp"

namespace rotogp {

struct ModeBasis {
    std::vector<double> e;  // one-particle energies, nondecreasing
    std::vector<cplx> W;    // W[((i J + j) J + k) J + l] = <phi_i phi_j | W | phi_k phi_l>
    double C = 0.0;         // particle-number penalty weight
    double M = 1.0;         // target particle number

    int modes() const { return static_cast<int>(e.size()); }
    cplx w(int i, int j, int k, int l) const;
    // Throws InvalidArgument on size mismatch, decreasing e, or W that is not
    // hermitian (W_ijkl = conj W_klij) and symmetric (i<->j, k<->l).
    void validate(double tol = 1e-12) const;
    // Smallest eigenvalue of W as a matrix on pair space (ij),(kl).
    double pair_space_min_eigenvalue() const;
};

// H = sum e_j a_j^dag a_j + sum W_ijkl a_i^dag a_j^dag a_k a_l
//     [+ (C/M)(sum a_j^dag a_j - M)^2].
FockOperator build_hamiltonian(const ModeBasis& mb, const FockBasis& basis, bool include_penalty);

struct GroundState {
    double energy = 0.0;
    Eigen::VectorXcd vector;  // over the sector states
    std::vector<int> sector;  // basis indices of the sector
    double residual = 0.0;    // ||H v - E v||
};

// Lowest eigenpair of H restricted to sum n_j = N (H must conserve number).
GroundState ground_state(const FockOperator& H, const FockBasis& basis, int N, double tol = 1e-10);

struct HartreeMinimum {
    double energy = 0.0;
    std::vector<cplx> c;
};

// min over |c| = 1 of sum e_j |c_j|^2 + g sum Wt_ijkl conj(c_i) conj(c_j) c_k c_l,
// J = 2 only (parametrized by c = (cos t, e^{i p} sin t)).
HartreeMinimum hartree_minimum(const ModeBasis& mb, double g);

// Two lowest 1D oscillator modes with contact interaction:
// e = (1/2, 3/2), Wt_1111 = 1/sqrt(2 pi), Wt with two 1s and two 2s = 1/(2 sqrt(2 pi)),
// Wt_2222 = 3/(4 sqrt(2 pi)), odd index patterns vanish.
ModeBasis two_mode_oscillator();

}  // namespace rotogp
