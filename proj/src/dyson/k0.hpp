#pragma once

#include <vector>

#include "dyson/cutoff.hpp"
#include "field/field.hpp"
#include "gp/problem.hpp"

namespace rotogp {

struct K0Options {
    double tol = 1e-9;           // LOBPCG residual tolerance (relative)
    int max_iter = 500;
    int guard = 3;               // extra block columns
    double decay_limit = 1e-4;   // max boundary-to-peak amplitude ratio of eigenvectors
};

struct KappaResult {
    double kappa = 0.0;
    double boundary = 0.0;
    int iterations = 0;
};

// kappa(eta) = inf spectrum[-eta Lap + 2 p.A + eta |x|^4] on the grid of p.
KappaResult compute_kappa(const Grid& grid, const std::array<double, 3>& omega, double eta,
                          const K0Options& opts = {});

struct ModifiedOneBody {
    double eta = 0.0;
    double kappa = 0.0;
    std::vector<double> e;          // lowest J eigenvalues of K0, nondecreasing
    std::vector<ComplexField> phi;  // normalized eigenvectors
    double boundary = 0.0;
    int iterations = 0;
};

// K0 = -grad (1 - chi^2) grad - 2 eta Lap + 2 p.A + A^2 + V + eta |x|^4 - kappa(eta).
ModifiedOneBody build_K0(const GpProblem& p, const CutoffFunction& chi, double eta, int J,
                         const K0Options& opts = {});

}  // namespace rotogp
