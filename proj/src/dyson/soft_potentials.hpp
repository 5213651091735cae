#pragma once

#include <vector>

#include "dyson/cutoff.hpp"

namespace rotogp {

// Sampling of the sup over |y| <= R: directions are the integer points on the
// surface of the cube [-shell, shell]^3 (26 for shell = 1, 98 for shell = 2),
// radii R m / radii for m = 1..radii, plus y = 0.
struct SupSampling {
    int shell = 1;
    int radii = 8;
};

// Radial tables on r_k = k dr, dr = s/25, up to 30 s.
struct SoftPotentials {
    double s = 0.0;
    double R = 0.0;
    double epsilon = 0.0;
    std::vector<double> r, h, fR, wR, UR;
    double int_fR = 0.0;  // integral over R^3
    double int_wR = 0.0;
    double int_UR = 0.0;
    double UR_sup = 0.0;  // 6 / R^3

    double r_max() const { return r.back(); }
    // Linear interpolation, zero beyond the table.
    double fR_at(double x) const;
    double wR_at(double x) const;
};

// U_R(r) = 6 R^-3 on [2^{-1/3} R, R], zero elsewhere.
double hat_potential(double R, double r);

SoftPotentials build_soft_potentials(const CutoffFunction& chi, double R, double epsilon,
                                     SupSampling sampling = {});

struct WrScaling {
    double s = 0.0;
    std::vector<double> R, int_wR, ratio;  // ratio = int_wR / (R/s)^2
    double slope = 0.0;                    // least-squares d log int_wR / d log R
    double ratio_min = 0.0, ratio_max = 0.0;
};

// Requires max R / min R >= 10 and every R <= s.
WrScaling verify_wr_scaling(const CutoffFunction& chi, std::vector<double> Rs);

}  // namespace rotogp
