#include "core/lobpcg.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace rotogp {

namespace {

using Mat = Eigen::MatrixXcd;

// Removes span(Q) from V twice, then returns an orthonormal basis of the
// remainder with numerically dependent directions dropped.
Mat orthonormal_complement(const Mat& Q, Mat V) {
    for (int pass = 0; pass < 2; ++pass)
        if (Q.cols() > 0) V -= Q * (Q.adjoint() * V);
    if (V.cols() == 0) return V;
    Eigen::ColPivHouseholderQR<Mat> qr(V);
    qr.setThreshold(1e-10);
    const int rank = static_cast<int>(qr.rank());
    Mat basis = qr.householderQ() * Mat::Identity(V.rows(), rank);
    for (int pass = 0; pass < 2; ++pass)
        if (Q.cols() > 0) basis -= Q * (Q.adjoint() * basis);
    Eigen::HouseholderQR<Mat> qr2(basis);
    return qr2.householderQ() * Mat::Identity(V.rows(), rank);
}

}  // namespace

LobpcgResult lobpcg(const BlockOperator& A, const BlockOperator& precond, Mat X0, int n_wanted,
                    double tol, int max_iter) {
    const int k = static_cast<int>(X0.cols());
    if (k < 1 || n_wanted < 1 || n_wanted > k) throw InvalidArgument("lobpcg: bad block size");
    if (X0.rows() < 3 * k) throw InvalidArgument("lobpcg: problem too small for the block");

    Mat X = orthonormal_complement(Mat(X0.rows(), 0), X0);
    if (X.cols() < k) throw NumericalError("lobpcg: initial block is rank deficient");
    Mat AX(X.rows(), k);
    A(X, AX);
    {
        Mat H = X.adjoint() * AX;
        H = 0.5 * (H + H.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        X = X * es.eigenvectors();
        AX = AX * es.eigenvectors();
    }
    Mat P(X.rows(), 0);
    LobpcgResult out;
    Eigen::VectorXd lambda(k);
    for (int it = 0;; ++it) {
        for (int j = 0; j < k; ++j) lambda(j) = (X.col(j).adjoint() * AX.col(j))(0, 0).real();
        Mat R = AX - X * lambda.asDiagonal();
        Eigen::VectorXd res(k);
        bool done = true;
        for (int j = 0; j < k; ++j) {
            res(j) = R.col(j).norm();
            if (j < n_wanted && res(j) > tol * std::max(1.0, std::abs(lambda(j)))) done = false;
        }
        out.iterations = it;
        out.residuals = res;
        if (done || it >= max_iter) {
            out.converged = done;
            break;
        }
        Mat W(R.rows(), k);
        precond(R, W);
        Mat WP(W.rows(), W.cols() + P.cols());
        WP << W, P;
        Mat Q = orthonormal_complement(X, WP);
        Mat AQ(Q.rows(), Q.cols());
        A(Q, AQ);
        Mat Z(X.rows(), k + Q.cols()), AZ(X.rows(), k + Q.cols());
        Z << X, Q;
        AZ << AX, AQ;
        Mat H = Z.adjoint() * AZ;
        H = 0.5 * (H + H.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        Mat C = es.eigenvectors().leftCols(k);
        X = Z * C;
        AX = AZ * C;
        P = Q * C.bottomRows(Q.cols());
        if (!X.allFinite()) throw NumericalError("lobpcg: non-finite iterate");
    }
    out.values = lambda;
    out.vectors = X;
    return out;
}

}  // namespace rotogp
