#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rotogp {

// Radial, nonnegative, finite-range potential; w = +inf on [0, hard_core_radius).
struct RadialPotential {
    double R0 = 0.0;
    double hard_core_radius = 0.0;
    std::function<double(double)> w;  // evaluated on (hard_core_radius, R0]
    std::vector<double> breakpoints;  // interior discontinuities of w
    std::string label;

    static RadialPotential hard_sphere(double R0);
    static RadialPotential square_barrier(double R0, double W0);
    static RadialPotential zero(double R0);
    // Linear interpolation of (r, w) samples; w = 0 beyond the last sample.
    static RadialPotential tabulated(std::vector<double> r, std::vector<double> w,
                                     double hard_core_radius = 0.0);

    double operator()(double r) const;
    void validate() const;
};

struct ScatteringResult {
    double a = 0.0;
    std::vector<double> r;
    std::vector<double> f;  // zero-energy solution normalized to f -> 1
    double match_residual = 0.0;
    int steps = 0;
};

// Integrates u'' = factor * w * u (u = r f) outward from the core and reads a
// off the exterior affine form u = c (r - a) by least squares on [R0, 2 R0].
// factor = 2 follows [-(1/2) Lap + w] f = 0; factor = 1 is the alternative.
ScatteringResult scattering_length(const RadialPotential& pot, double tol = 1e-12, double factor = 2.0);

// v_N(r) = N^2 w(N r): range and core divided by N.
RadialPotential scale_interaction(const RadialPotential& pot, double N);

// a = R0 - tanh(kappa R0)/kappa, kappa = sqrt(factor W0).
double square_barrier_length(double R0, double W0, double factor = 2.0);

}  // namespace rotogp
