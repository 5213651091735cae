#pragma once

#include <vector>

#include "field/field.hpp"

namespace rotogp {

struct Vortex {
    double x = 0.0;
    double y = 0.0;
    int winding = 0;
};

struct VortexReport {
    std::vector<Vortex> vortices;
    int total_winding = 0;
    int z_layer = 0;  // slice used for 3D fields
};

// Plaquette phase-winding census in the xy-plane. Plaquettes with any corner
// below floor_fraction * max|phi| are skipped. For 3D fields the slice
// z_layer is used (default: the layer just above z = 0).
VortexReport detect_vortices(const ComplexField& phi, double floor_fraction = 1e-3, int z_layer = -1);

// <phi| x p_y - y p_x |phi> with spectral derivatives.
double angular_momentum_z(const ComplexField& phi);

}  // namespace rotogp
