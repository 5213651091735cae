#pragma once

#include <vector>

#include "gp/problem.hpp"

namespace rotogp {

// phi(R(-angle) x) about the z axis by exact quarter turns plus a
// three-shear trigonometric interpolation for the remainder (|rest| <= pi/4).
ComplexField rotate_about_z(const ComplexField& phi, double angle);

struct OrbitReport {
    double base_energy = 0.0;
    std::vector<double> angles;
    std::vector<double> energies;
    // min over global phases of ||R phi - e^{i a} phi||_2
    std::vector<double> distances;
    double max_spread = 0.0;
    double max_distance = 0.0;
};

// Energies of rotated copies of phi; refuses non-axisymmetric traps.
OrbitReport symmetry_orbit_check(const ComplexField& phi, const GpProblem& p,
                                 const std::vector<double>& angles);

}  // namespace rotogp
