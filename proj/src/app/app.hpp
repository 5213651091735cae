#pragma once

#include <complex>
#include <json.hpp>
#include <string>
#include <vector>

namespace rotogp {

struct RunOutput {
    // Deterministic record written to results.json: config echo, outputs and checks.
    nlohmann::json result;
    // Wall-clock seconds per stage; kept out of results.json so reruns match bit for bit.
    nlohmann::json timings;
    bool passed = false;
    std::vector<std::string> files;
};

const std::vector<std::string>& subcommands();

// Validates the config (an object with "command" plus module parameters),
// dispatches, and writes results.json, timings.json and any CSV or field
// dumps under "output_dir". Unknown keys and malformed values throw
// InvalidArgument before any computation starts.
RunOutput run(const nlohmann::json& config);

// Parses "0.7+0.2i", "-1i", "2", "(0.7,0.2)".
std::complex<double> parse_complex(const std::string& text);

}  // namespace rotogp
