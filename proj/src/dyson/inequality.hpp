#pragma once

#include <vector>

#include "dyson/cutoff.hpp"
#include "dyson/soft_potentials.hpp"
#include "scattering/scattering.hpp"

namespace rotogp {

struct DysonCheckOptions {
    std::vector<int> channels{0, 1, 2};
    int levels = 3;
    // Scattering length convention for a: u'' = factor * w * u. The inequality
    // pairs -Lap with (1/2) v_N, i.e. factor 1/2.
    double scattering_factor = 0.5;
    // Multiplies a on the right-hand side; values > 1 probe the sensitivity
    // of the check (the inequality must then eventually fail).
    double a_multiplier = 1.0;
};

struct DysonLevel {
    int nodes = 0;
    std::vector<double> channel_min;  // lowest eigenvalue per channel
    double min_eig = 0.0;
};

struct DysonCheckResult {
    double N = 0.0;
    double a = 0.0;      // scattering length of w
    double slack = 0.0;  // max(1e-6 (a/N) ||U_R||_inf, 1e-10)
    double min_eig = 0.0;  // finest level
    double drift = 0.0;    // |finest - previous level|
    double extrapolated = 0.0;  // min_eig - drift
    std::vector<DysonLevel> levels;
    bool passed = false;
};

// Lowest eigenvalue of
//   -grad chi(p)^2 grad + (1/2) v_N - (1 - eps)(a/N) U_R + (a/(N eps)) w_R
// for a single centre at the origin, per angular momentum channel, by P1
// finite elements for u = r psi on nested geometric radial grids. The hard
// core of v_N is a Dirichlet node; -grad chi^2 grad = -Lap - p^2 (1 - chi^2)
// with the bounded second term assembled from Riccati-Bessel transforms.
// Passes when every level and the extrapolated value are >= -slack. Throws
// NotConverged when the drift exceeds slack and leaves the sign unresolved.
DysonCheckResult check_dyson_inequality(const RadialPotential& w, double N, const SoftPotentials& sp,
                                        const CutoffFunction& chi, const DysonCheckOptions& opts = {});

}  // namespace rotogp
