#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "rotogp/rotogp.h"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_config = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// How a flag's tokens become a config value.
enum class Kind { number, integer, seed, text, flag, numbers, strings, tokens, omega };

struct FlagSpec {
    const char* flag;
    const char* key;
    Kind kind;
    const char* help;
};

struct Bound {
    FlagSpec spec;
    CLI::Option* opt = nullptr;
    std::vector<std::string> values;
    bool set = false;
};

const std::vector<FlagSpec> gp_flags = {
    {"--dim", "dim", Kind::integer, "2 or 3"},
    {"--n", "n", Kind::integer, "grid points per axis"},
    {"--box", "box", Kind::number, "box side length"},
    {"--a", "a", Kind::number, "scattering length"},
    {"--trap", "trap", Kind::text, "harmonic | file"},
    {"--trap-file", "trap_file", Kind::text, "n^dim float64 values, dump layout"},
    {"--tol", "tol", Kind::number, "projected-gradient tolerance"},
    {"--max-iter", "max_iter", Kind::integer, "iteration budget per run"},
    {"--step", "step", Kind::number, "initial geodesic step"},
};

const std::map<std::string, std::pair<std::string, std::vector<FlagSpec>>> commands = {
    {"solve-gp",
     {"Minimize the rotating GP functional",
      {{"--omega", "omega", Kind::omega, "Omega_z, or Omega_x Omega_y Omega_z"},
       {"--init", "init", Kind::text, "gaussian | random | vortex:<q>"},
       {"--restarts", "restarts", Kind::integer, "number of runs"},
       {"--restart-inits", "restart_inits", Kind::strings, "init per extra restart"},
       {"--dump", "dump", Kind::text, "field dump stem (empty disables)"}}}},
    {"scan-omega",
     {"Scan Omega_z and report energy, Lz and winding",
      {{"--values", "values", Kind::numbers, "Omega_z samples"},
       {"--from", "from", Kind::number, "first sample"},
       {"--to", "to", Kind::number, "last sample"},
       {"--steps", "steps", Kind::integer, "sample count"},
       {"--inits", "inits", Kind::strings, "init strategies tried per sample"},
       {"--locate", "locate", Kind::flag, "bisect the Lz threshold between the end samples"},
       {"--lz-level", "lz_level", Kind::number, "Lz level defining the threshold"},
       {"--width", "width", Kind::number, "bisection width"}}}},
    {"scan-a",
     {"Scan a and check concavity of E(a)",
      {{"--omega", "omega", Kind::omega, "Omega_z, or Omega_x Omega_y Omega_z"},
       {"--values", "values", Kind::numbers, "a samples"},
       {"--from", "from", Kind::number, "first sample"},
       {"--to", "to", Kind::number, "last sample"},
       {"--steps", "steps", Kind::integer, "sample count"},
       {"--inits", "inits", Kind::strings, "init strategies"}}}},
    {"analyze",
     {"Vortex census of a field dump",
      {{"--field", "field", Kind::text, "dump path (.f64, .json or stem)"},
       {"--floor", "floor", Kind::number, "amplitude floor relative to max |phi|"},
       {"--z-layer", "z_layer", Kind::integer, "slice index for 3D fields"}}}},
    {"scattering",
     {"Zero-energy scattering length",
      {{"--potential", "potential", Kind::tokens, "hardcore R0 | square R0 W0 | zero R0 | file PATH"},
       {"--core", "core", Kind::number, "hard-core radius for a tabulated potential"},
       {"--scale", "scale", Kind::number, "N for v_N(r) = N^2 w(N r)"},
       {"--factor", "factor", Kind::number, "u'' = factor w u"},
       {"--tol", "tol", Kind::number, "integration tolerance"}}}},
    {"dyson-check",
     {"Soft potentials and the single-centre operator inequality",
      {{"--s", "s", Kind::number, "cutoff scale"},
       {"--R", "R", Kind::number, "range of U_R"},
       {"--eps", "eps", Kind::number, "epsilon"},
       {"--N", "N", Kind::number, "particle number"},
       {"--potential", "potential", Kind::tokens, "hardcore R0 | square R0 W0 | zero R0 | file PATH"},
       {"--channels", "channels", Kind::numbers, "angular momentum channels"},
       {"--levels", "levels", Kind::integer, "radial refinement levels"},
       {"--scattering-factor", "scattering_factor", Kind::number, "convention for a"},
       {"--a-multiplier", "a_multiplier", Kind::number, "inflate a (sensitivity probe)"},
       {"--slope-R", "slope_R", Kind::numbers, "R samples for the w_R slope"},
       {"--k0", "k0", Kind::text, "true | false: build K0"},
       {"--J", "J", Kind::integer, "K0 eigenvalues"},
       {"--eta", "eta", Kind::number, "eta"},
       {"--k0-n", "k0_n", Kind::integer, "K0 grid points per axis"},
       {"--k0-box", "k0_box", Kind::number, "K0 box side"},
       {"--omega", "omega", Kind::omega, "Omega for K0"}}}},
    {"fock-ed",
     {"Exact diagonalization in a truncated Fock space",
      {{"--J", "J", Kind::integer, "modes"},
       {"--Nmax", "Nmax", Kind::integer, "truncation"},
       {"--e", "e", Kind::numbers, "one-particle energies"},
       {"--W-file", "W_file", Kind::text, "JSON {\"e\": [...], \"W\": [...]}"},
       {"--sector", "sector", Kind::integer, "particle number N"},
       {"--g", "g", Kind::number, "coupling"},
       {"--mean-field-scaling", "mean_field_scaling", Kind::text, "true | false: W -> g W / N"},
       {"--C", "C", Kind::number, "number penalty weight"},
       {"--sweep", "sweep", Kind::flag, "compare with Hartree for N = 2..sector"}}}},
    {"symbols-check",
     {"Lower and upper symbols and the coherent resolution",
      {{"--op", "op", Kind::text, "operator, e.g. \"adag a\""},
       {"--modes", "modes", Kind::integer, "mode count (default from the operator)"},
       {"--z", "z", Kind::strings, "evaluation point(s), e.g. 0.7+0.2i"},
       {"--Z", "Z", Kind::number, "quadrature radius"},
       {"--nodes", "nodes", Kind::integer, "radial nodes"},
       {"--angular", "angular", Kind::integer, "angular nodes"},
       {"--n-cut", "n_cut", Kind::integer, "compare on total occupation <= n_cut"},
       {"--n-max", "n_max", Kind::integer, "truncation for the coherent expectation"},
       {"--tol", "tol", Kind::number, "resolution tolerance"}}}},
    {"heat-bound",
     {"Heat-kernel diagonal bound, brute force and weighted trace",
      {{"--V", "V", Kind::tokens, "harmonic [w] | log C1 [C2] | zero | file PATH"},
       {"--alpha", "alpha", Kind::number, "alpha"},
       {"--s", "s", Kind::number, "trace weight exponent"},
       {"--dim", "dim", Kind::integer, "1 or 3"},
       {"--box", "box", Kind::number, "brute-force half width (1D) or radius (3D)"},
       {"--points", "points", Kind::integer, "brute-force grid points"},
       {"--R0", "R0", Kind::number, "first trace radius"},
       {"--max-doublings", "max_doublings", Kind::integer, "trace radius doublings"},
       {"--h-points", "h_points", Kind::integer, "h_alpha table size"},
       {"--trace", "trace", Kind::text, "true | false"},
       {"--B", "B", Kind::number, "rank-one perturbation amplitude"},
       {"--D", "D", Kind::number, "rank-one perturbation decay"}}}},
};

double to_number(const std::string& flag, const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != t.size() || !std::isfinite(v)) throw ConfigError(flag + ": '" + t + "' is not a number");
    return v;
}

json to_json(const Bound& b) {
    const auto& v = b.values;
    const std::string flag = b.spec.flag;
    switch (b.spec.kind) {
    case Kind::number:
        return to_number(flag, v.at(0));
    case Kind::integer: {
        const double d = to_number(flag, v.at(0));
        if (d != std::floor(d)) throw ConfigError(flag + " expects an integer");
        return static_cast<long long>(d);
    }
    case Kind::seed:
        try {
            return std::stoull(v.at(0));
        } catch (const std::exception&) {
            throw ConfigError(flag + " expects a nonnegative integer");
        }
    case Kind::text: {
        const std::string& s = v.at(0);
        if (s == "true") return true;
        if (s == "false") return false;
        return s;
    }
    case Kind::flag:
        return true;
    case Kind::numbers: {
        json a = json::array();
        for (const std::string& s : v) a.push_back(to_number(flag, s));
        return a;
    }
    case Kind::strings: {
        json a = json::array();
        for (const std::string& s : v) a.push_back(s);
        return a;
    }
    case Kind::tokens: {
        json a = json::array();
        for (const std::string& s : v) a.push_back(s);
        return a;
    }
    case Kind::omega: {
        if (v.size() == 1) return to_number(flag, v[0]);
        if (v.size() != 3) throw ConfigError(flag + " takes one or three numbers");
        return json::array({to_number(flag, v[0]), to_number(flag, v[1]), to_number(flag, v[2])});
    }
    }
    return nullptr;
}

CLI::Option* attach(CLI::App& app, Bound& b) {
    const std::string name = b.spec.flag;
    switch (b.spec.kind) {
    case Kind::flag:
        return app.add_flag(name, b.set, b.spec.help);
    case Kind::numbers:
    case Kind::strings:
        return app.add_option(name, b.values, b.spec.help)->expected(1, CLI::detail::expected_max_vector_size);
    case Kind::tokens:
        return app.add_option(name, b.values, b.spec.help)->expected(1, 3);
    case Kind::omega:
        return app.add_option(name, b.values, b.spec.help)->expected(1, 3)->allow_extra_args(false);
    default:
        return app.add_option(name, b.values, b.spec.help)->expected(1);
    }
}

json read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config " + path);
    try {
        json j;
        f >> j;
        if (!j.is_object()) throw ConfigError("config " + path + " must hold a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
}

int exit_code(rotogp_status s) {
    switch (s) {
    case ROTOGP_OK: return exit_ok;
    case ROTOGP_ERR_INVALID_ARGUMENT:
    case ROTOGP_ERR_GRID_MISMATCH:
    case ROTOGP_ERR_IO:
    case ROTOGP_ERR_NULL_POINTER: return exit_config;
    default: return exit_failed;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotating Bose gas toolkit: GP minimization, scattering, Dyson, Fock and heat-kernel checks"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    std::string config_path, out_dir, seed;
    bool quiet = false;
    app.add_option("--config", config_path, "JSON config; flags override its values");
    app.add_option("--out", out_dir, "output directory (default: current directory)");
    app.add_option("--seed", seed, "seed for stochastic restarts");
    app.add_flag("--quiet", quiet, "print only the check summary");
    app.set_version_flag("--version", std::string(rotogp_version()));

    std::map<std::string, std::vector<Bound>> bound;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        subs[name] = sub;
        std::vector<FlagSpec> specs = entry.second;
        if (name == "solve-gp" || name == "scan-omega" || name == "scan-a")
            specs.insert(specs.begin(), gp_flags.begin(), gp_flags.end());
        auto& list = bound[name];
        list.reserve(specs.size());
        for (const FlagSpec& s : specs) {
            list.push_back(Bound{s});
            list.back().opt = attach(*sub, list.back());
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    json cfg = json::object();
    try {
        if (!config_path.empty()) cfg = read_config_file(config_path);
        std::string chosen;
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) chosen = name;
        if (!chosen.empty()) {
            if (cfg.contains("command") && cfg["command"] != chosen)
                throw ConfigError("config command '" + cfg["command"].get<std::string>() + "' conflicts with '" +
                                  chosen + "'");
            cfg["command"] = chosen;
            for (Bound& b : bound[chosen])
                if (b.opt->count() > 0) cfg[b.spec.key] = to_json(b);
        }
        if (!cfg.contains("command")) throw ConfigError("no subcommand given (see --help)");
        if (!out_dir.empty()) cfg["output_dir"] = out_dir;
        if (!seed.empty()) cfg["seed"] = to_json(Bound{{"--seed", "seed", Kind::seed, ""}, nullptr, {seed}});
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "rotogp: %s\n", e.what());
        return exit_config;
    }

    rotogp_result* result = nullptr;
    const rotogp_status st = rotogp_run(cfg.dump().c_str(), &result);
    if (st != ROTOGP_OK) {
        std::fprintf(stderr, "rotogp: %s: %s\n", rotogp_status_string(st), rotogp_last_error());
        return exit_code(st);
    }
    const std::string text = rotogp_result_json(result);
    const bool passed = rotogp_result_passed(result) == 1;
    rotogp_result_free(result);

    if (quiet) {
        const json doc = json::parse(text);
        for (const json& c : doc.at("checks"))
            std::printf("%s %s\n", c.at("passed").get<bool>() ? "PASS" : "FAIL", c.at("name").get<std::string>().c_str());
    } else {
        std::printf("%s\n", text.c_str());
    }
    if (!passed) std::fprintf(stderr, "rotogp: one or more invariant checks failed\n");
    return passed ? exit_ok : exit_failed;
}
