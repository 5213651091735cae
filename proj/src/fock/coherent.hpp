#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fock/basis.hpp"
#include "fock/symbols.hpp"

namespace rotogp {

struct CoherentVector {
    std::vector<cplx> z;
    Eigen::VectorXcd state;         // amplitudes over the truncated basis
    double truncation_error = 0.0;  // 1 - ||state||^2 = P(Poisson(sum |z|^2) > n_max)
};

// prod_j exp(-|z_j|^2/2 + z_j a_j^dagger)|0>. Throws when the tail exceeds `max_tail`.
CoherentVector coherent_state(const std::vector<cplx>& z, const FockBasis& basis, double max_tail = 1e-8);

// <z|z'> = exp(sum_j -|z_j|^2/2 - |z'_j|^2/2 + conj(z_j) z'_j).
cplx coherent_overlap(const std::vector<cplx>& z, const std::vector<cplx>& zp);

// The same state from a Fock operator: <z|A|z>.
cplx expectation(const CoherentVector& v, const FockOperator& A);

struct ResolutionOptions {
    double Z = 6.0;       // quadrature radius per mode
    int radial = 64;      // Gauss-Legendre nodes in |z|
    int angular = 32;     // uniform nodes in arg z
    int n_cut = 3;        // compare on total occupation <= n_cut
};

struct ResolutionReport {
    double identity_error = 0.0;  // || int dz Pi(z) - Id ||
    double operator_error = 0.0;  // || int dz U(z) Pi(z) - op ||
    int block = 0;                // states with total <= n_cut
};

// Tensor-product polar quadrature of int dz U(z) |z><z| with dz = pi^{-J} d^2z,
// J <= 2, compared with op on the sectors n <= n_cut (spectral norm).
ResolutionReport verify_resolution(const OperatorPolynomial& op, const ResolutionOptions& opts = {});

}  // namespace rotogp
