#pragma once

#include <string>
#include <vector>

#include "gp/solver.hpp"

namespace rotogp {

struct ScanRow {
    double param = 0.0;
    double energy = 0.0;
    double mu = 0.0;
    double residual = 0.0;
    double Lz = 0.0;
    int total_winding = 0;
    bool converged = false;
    std::string init;
};

// Best minimizer over all `inits` (one restart each) for a copy of `base`
// with the given parameter substituted.
GpState best_minimizer(const GpProblem& p, const std::vector<InitStrategy>& inits,
                       const SolverOptions& opts);
ScanRow summarize(double param, const GpState& st);

// Omega = (0, 0, omega_z) for each entry.
std::vector<ScanRow> scan_omega(const GpProblem& base, const std::vector<double>& omega_z,
                                const std::vector<InitStrategy>& inits, const SolverOptions& opts);

// Smallest |omega_z| (between the bracket ends, same sign) whose minimizer
// has <L_z>/sign >= lz_level, located by bisection to width `width`.
struct Threshold {
    double below = 0.0;  // last sample without the feature
    double above = 0.0;  // first sample with it
    ScanRow row_below;
    ScanRow row_above;
    int evaluations = 0;
};
Threshold locate_lz_threshold(const GpProblem& base, double omega_lo, double omega_hi,
                              double lz_level, const std::vector<InitStrategy>& inits,
                              const SolverOptions& opts, double width);

struct ConcavityReport {
    std::vector<ScanRow> rows;
    bool all_converged = true;
    bool monotone = true;
    bool concave = true;
    bool scaling = true;
    // worst violations (positive = violated)
    double worst_concavity = 0.0;
    double worst_scaling = 0.0;
    double worst_monotone = 0.0;
    double tolerance = 0.0;
};

// E(a) for each sample; checks monotonicity, three-point concavity
// E(a_j) >= interpolant(a_i, a_k) - 2 tol and E(l a) >= (1-l) E(0) + l E(a)
// for sampled pairs.
ConcavityReport concavity_scan(const GpProblem& base, const std::vector<double>& a_values,
                               const std::vector<InitStrategy>& inits, const SolverOptions& opts);

}  // namespace rotogp
