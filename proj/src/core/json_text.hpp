#pragma once

#include <json.hpp>
#include <string>

namespace rotogp {

// Formats a double with 17 significant digits; non-finite values become null.
std::string format_double(double v);

// Pretty JSON with every float written by format_double, so files round-trip exactly.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace rotogp
