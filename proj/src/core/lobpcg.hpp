#pragma once

#include <Eigen/Dense>
#include <functional>

namespace rotogp {

// Y = op(X) column by column.
using BlockOperator = std::function<void(const Eigen::MatrixXcd& X, Eigen::MatrixXcd& Y)>;

struct LobpcgResult {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;  // orthonormal columns (Euclidean)
    Eigen::VectorXd residuals;
    int iterations = 0;
    bool converged = false;
};

// Lowest X0.cols() eigenpairs of a Hermitian operator by the locally
// optimal block preconditioned conjugate gradient method, with an
// orthonormal Rayleigh-Ritz basis [X, W, P] each step. A column counts as
// converged when ||A x - l x|| <= tol * max(1, |l|). `n_wanted` leading
// pairs must converge; extra columns act as guard vectors.
LobpcgResult lobpcg(const BlockOperator& A, const BlockOperator& precond, Eigen::MatrixXcd X0,
                    int n_wanted, double tol, int max_iter);

}  // namespace rotogp
