#pragma once

#include <array>
#include <string>

#include "field/field.hpp"

namespace rotogp {

struct FieldDump {
    ComplexField field;
    std::array<double, 3> omega{0.0, 0.0, 0.0};
};

// Writes `<stem>.f64` (little-endian float64 pairs re,im in row-major order)
// and the sidecar `<stem>.json` {dim, n, L, omega, format}.
void write_field(const std::string& stem, const ComplexField& field,
                 const std::array<double, 3>& omega);
// Accepts either the .f64 or the .json path (or the bare stem).
FieldDump read_field(const std::string& path);

}  // namespace rotogp
