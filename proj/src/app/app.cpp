#include "app/app.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "analysis/scans.hpp"
#include "analysis/vortex.hpp"
#include "core/errors.hpp"
#include "core/json_text.hpp"
#include "dyson/cutoff.hpp"
#include "dyson/inequality.hpp"
#include "dyson/k0.hpp"
#include "dyson/soft_potentials.hpp"
#include "field/dump.hpp"
#include "fock/coherent.hpp"
#include "fock/hamiltonian.hpp"
#include "fock/symbols.hpp"
#include "gp/solver.hpp"
#include "heatkernel/heat_kernel.hpp"
#include "scattering/scattering.hpp"

namespace rotogp {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

// Typed access to the config object. Every key read is recorded with its
// effective value so that unknown keys can be rejected and the echo is complete.
class Config {
public:
    explicit Config(const json& j) : j_(j) {
        if (!j_.is_object()) throw InvalidArgument("config must be a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    double number(const std::string& key, double def) {
        double v = def;
        if (has(key)) {
            const json& x = j_.at(key);
            if (!x.is_number()) throw InvalidArgument("config key '" + key + "' must be a number");
            v = x.get<double>();
        }
        if (!std::isfinite(v)) throw InvalidArgument("config key '" + key + "' must be finite");
        echo_[key] = v;
        return v;
    }

    int integer(const std::string& key, int def) {
        int v = def;
        if (has(key)) {
            const json& x = j_.at(key);
            if (!x.is_number()) throw InvalidArgument("config key '" + key + "' must be an integer");
            const double d = x.get<double>();
            if (d != std::floor(d) || std::abs(d) > 1e9)
                throw InvalidArgument("config key '" + key + "' must be an integer");
            v = static_cast<int>(d);
        }
        echo_[key] = v;
        return v;
    }

    std::uint64_t seed(const std::string& key, std::uint64_t def) {
        std::uint64_t v = def;
        if (has(key)) {
            const json& x = j_.at(key);
            if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0))
                throw InvalidArgument("config key '" + key + "' must be a nonnegative integer");
            v = x.get<std::uint64_t>();
        }
        echo_[key] = v;
        return v;
    }

    bool flag(const std::string& key, bool def) {
        bool v = def;
        if (has(key)) {
            if (!j_.at(key).is_boolean()) throw InvalidArgument("config key '" + key + "' must be true or false");
            v = j_.at(key).get<bool>();
        }
        echo_[key] = v;
        return v;
    }

    std::string text(const std::string& key, const std::string& def) {
        std::string v = def;
        if (has(key)) {
            if (!j_.at(key).is_string()) throw InvalidArgument("config key '" + key + "' must be a string");
            v = j_.at(key).get<std::string>();
        }
        echo_[key] = v;
        return v;
    }

    std::vector<double> numbers(const std::string& key, const std::vector<double>& def) {
        std::vector<double> v = def;
        if (has(key)) {
            const json& x = j_.at(key);
            v.clear();
            if (x.is_number()) {
                v.push_back(x.get<double>());
            } else if (x.is_array()) {
                for (const json& e : x) {
                    if (!e.is_number()) throw InvalidArgument("config key '" + key + "' must list numbers");
                    v.push_back(e.get<double>());
                }
            } else {
                throw InvalidArgument("config key '" + key + "' must be a number or a list of numbers");
            }
        }
        for (double d : v)
            if (!std::isfinite(d)) throw InvalidArgument("config key '" + key + "' must be finite");
        echo_[key] = v;
        return v;
    }

    std::vector<int> integers(const std::string& key, const std::vector<int>& def) {
        std::vector<double> d(def.begin(), def.end());
        d = numbers(key, d);
        std::vector<int> v;
        for (double x : d) {
            if (x != std::floor(x)) throw InvalidArgument("config key '" + key + "' must list integers");
            v.push_back(static_cast<int>(x));
        }
        echo_[key] = v;
        return v;
    }

    // A list of strings, or one string split at commas.
    std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& def) {
        std::vector<std::string> v = def;
        if (has(key)) {
            const json& x = j_.at(key);
            v.clear();
            if (x.is_string()) {
                std::stringstream ss(x.get<std::string>());
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) v.push_back(item);
            } else if (x.is_array()) {
                for (const json& e : x) {
                    if (!e.is_string()) throw InvalidArgument("config key '" + key + "' must list strings");
                    v.push_back(e.get<std::string>());
                }
            } else {
                throw InvalidArgument("config key '" + key + "' must be a string or a list of strings");
            }
        }
        echo_[key] = v;
        return v;
    }

    // Token list such as ["square", 1, 5]; numbers are kept as their JSON text.
    std::vector<std::string> tokens(const std::string& key, const std::vector<std::string>& def) {
        std::vector<std::string> v = def;
        json raw = json::array();
        if (has(key)) {
            const json& x = j_.at(key);
            v.clear();
            auto push = [&](const json& e) {
                if (e.is_string()) {
                    std::stringstream ss(e.get<std::string>());
                    std::string item;
                    while (ss >> item) v.push_back(item);
                } else if (e.is_number()) {
                    v.push_back(format_double(e.get<double>()));
                } else {
                    throw InvalidArgument("config key '" + key + "' must hold strings and numbers");
                }
            };
            if (x.is_array()) {
                for (const json& e : x) push(e);
            } else {
                push(x);
            }
        }
        if (v.empty()) throw InvalidArgument("config key '" + key + "' is empty");
        for (const std::string& t : v) raw.push_back(t);
        echo_[key] = raw;
        return v;
    }

    std::array<double, 3> omega(const std::string& key) {
        std::array<double, 3> w{0.0, 0.0, 0.0};
        if (has(key)) {
            const json& x = j_.at(key);
            if (x.is_number()) {
                w[2] = x.get<double>();
            } else if (x.is_array() && x.size() == 3 && x[0].is_number() && x[1].is_number() && x[2].is_number()) {
                w = {x[0].get<double>(), x[1].get<double>(), x[2].get<double>()};
            } else {
                throw InvalidArgument("config key '" + key + "' must be a number (z component) or [x, y, z]");
            }
        }
        for (double d : w)
            if (!std::isfinite(d)) throw InvalidArgument("config key '" + key + "' must be finite");
        echo_[key] = w;
        return w;
    }

    // Rejects keys that no parameter read consumed.
    void finish(const std::string& command) const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!echo_.contains(it.key()))
                throw InvalidArgument("unknown config key '" + it.key() + "' for " + command);
    }

    const json& echo() const { return echo_; }
    void note(const std::string& key, const json& v) { echo_[key] = v; }

private:
    json j_;
    json echo_ = json::object();
};

// Each check carries the value it measured and the tolerance it was held to.
class Checks {
public:
    void add(const std::string& name, double value, double tolerance, const std::string& relation, bool passed) {
        list_.push_back({{"name", name},
                         {"value", value},
                         {"tolerance", tolerance},
                         {"relation", relation},
                         {"passed", passed}});
        all_ = all_ && passed;
    }
    // |value - target| <= tol
    void near(const std::string& name, double value, double target, double tol) {
        const double err = std::abs(value - target);
        add(name, err, tol, "abs_error <= tolerance", err <= tol);
    }
    void at_most(const std::string& name, double value, double tol) {
        add(name, value, tol, "value <= tolerance", value <= tol);
    }
    void at_least(const std::string& name, double value, double tol) {
        add(name, value, tol, "value >= tolerance", value >= tol);
    }
    void truth(const std::string& name, bool ok) { add(name, ok ? 1.0 : 0.0, 1.0, "value == tolerance", ok); }
    const json& list() const { return list_; }
    bool all() const { return all_; }

private:
    json list_ = json::array();
    bool all_ = true;
};

class Stopwatch {
public:
    void lap(const std::string& stage) {
        const auto now = std::chrono::steady_clock::now();
        t_[stage] = std::chrono::duration<double>(now - last_).count();
        last_ = now;
    }
    const json& timings() const { return t_; }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    json t_ = json::object();
};

struct Context {
    std::filesystem::path out;
    std::vector<std::string> files;

    std::string path(const std::string& name) const { return (out / name).string(); }

    void write_text(const std::string& name, const std::string& body) {
        std::ofstream f(path(name), std::ios::binary);
        if (!f) throw IoError("cannot open " + path(name) + " for writing");
        f << body;
        if (!f) throw IoError("failed writing " + path(name));
        files.push_back(name);
    }
};

std::string csv_row(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ",";
        s += cells[i];
    }
    return s + "\n";
}

double parse_number(const std::string& t, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != t.size() || !std::isfinite(v)) throw InvalidArgument(what + ": '" + t + "' is not a number");
    return v;
}

// Whitespace separated two-column table; '#' starts a comment.
void read_table(const std::string& path, std::vector<double>& x, std::vector<double>& y) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open table " + path);
    std::string line;
    while (std::getline(f, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::stringstream ss(line);
        std::string a, b, extra;
        if (!(ss >> a)) continue;
        if (!(ss >> b) || (ss >> extra)) throw InvalidArgument("table " + path + ": expected two columns per row");
        x.push_back(parse_number(a, path));
        y.push_back(parse_number(b, path));
    }
    if (x.empty()) throw InvalidArgument("table " + path + " is empty");
}

// n^dim little-endian float64 values in the field dump layout.
std::vector<double> read_trap(const std::string& path, const Grid& grid) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open trap file " + path);
    f.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(f.tellg());
    f.seekg(0);
    if (bytes != grid.size() * sizeof(double))
        throw GridMismatch("trap file " + path + " holds " + std::to_string(bytes / sizeof(double)) +
                           " values, grid has " + std::to_string(grid.size()));
    std::vector<std::uint64_t> words(grid.size());
    f.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
    if (!f) throw IoError("failed reading trap file " + path);
    std::vector<double> V(grid.size());
    for (std::size_t i = 0; i < V.size(); ++i) {
        std::uint64_t w = words[i];
        if constexpr (std::endian::native == std::endian::big) w = __builtin_bswap64(w);
        V[i] = std::bit_cast<double>(w);
    }
    return V;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------- GP problems

struct GpSetup {
    GpProblem problem;
    SolverOptions opts;
};

GpSetup read_gp_setup(Config& c, bool with_omega, bool with_a) {
    const int dim = c.integer("dim", 3);
    if (dim != 2 && dim != 3) throw InvalidArgument("dim must be 2 or 3");
    const int n = c.integer("n", dim == 2 ? 48 : 32);
    const double box = c.number("box", 14.0);
    const Grid grid(dim, n, box);
    const std::array<double, 3> omega = with_omega ? c.omega("omega") : std::array<double, 3>{0.0, 0.0, 0.0};
    const double a = with_a ? c.number("a", 0.0) : 0.0;
    GpSetup s{GpProblem::harmonic(grid, omega, a), {}};
    const std::string trap = c.text("trap", "harmonic");
    if (trap == "file") {
        const std::string file = c.text("trap_file", "");
        if (file.empty()) throw InvalidArgument("trap 'file' needs trap_file");
        s.problem.V = read_trap(file, grid);
    } else if (trap != "harmonic") {
        throw InvalidArgument("trap must be 'harmonic' or 'file'");
    }
    s.opts.tol = c.number("tol", s.opts.tol);
    s.opts.max_iter = c.integer("max_iter", s.opts.max_iter);
    s.opts.step = c.number("step", s.opts.step);
    s.opts.seed = c.seed("seed", s.opts.seed);
    if (!(s.opts.tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (s.opts.max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
    if (with_omega) s.problem.validate();
    return s;
}

std::vector<InitStrategy> parse_inits(const std::vector<std::string>& names) {
    if (names.empty()) throw InvalidArgument("at least one init strategy is required");
    std::vector<InitStrategy> v;
    for (const std::string& s : names) v.push_back(InitStrategy::parse(s));
    return v;
}

json state_json(const GpProblem& p, const GpState& st) {
    const VortexReport vr = detect_vortices(st.phi);
    json vort = json::array();
    for (const Vortex& v : vr.vortices) vort.push_back({{"x", v.x}, {"y", v.y}, {"winding", v.winding}});
    const double q = quartic_integral(st.phi);
    return {{"energy", st.energy},
            {"mu", st.mu},
            {"residual", st.residual},
            {"iterations", st.iterations},
            {"converged", st.converged},
            {"monotone", st.monotone},
            {"boundary_warning", st.boundary_warning},
            {"boundary_ratio", boundary_ratio(st.phi)},
            {"init_used", st.init_used},
            {"restart_energies", st.restart_energies},
            {"quartic", q},
            {"mu_identity_defect", std::abs(st.mu - st.energy - 4.0 * pi * p.a * q)},
            {"Lz", angular_momentum_z(st.phi)},
            {"winding", vr.total_winding},
            {"vortices", vort}};
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
    std::string s = csv_row({"parameter", "energy", "mu", "Lz", "total_winding", "residual", "converged", "init"});
    for (const ScanRow& r : rows)
        s += csv_row({format_double(r.param), format_double(r.energy), format_double(r.mu), format_double(r.Lz),
                      std::to_string(r.total_winding), format_double(r.residual), r.converged ? "1" : "0", r.init});
    return s;
}

json rows_json(const std::vector<ScanRow>& rows) {
    json out = json::array();
    for (const ScanRow& r : rows)
        out.push_back({{"parameter", r.param},
                       {"energy", r.energy},
                       {"mu", r.mu},
                       {"Lz", r.Lz},
                       {"total_winding", r.total_winding},
                       {"residual", r.residual},
                       {"converged", r.converged},
                       {"init", r.init}});
    return out;
}

std::vector<double> sweep_values(Config& c, const std::vector<double>& def) {
    if (c.has("from") || c.has("to") || c.has("steps")) {
        const double from = c.number("from", 0.0), to = c.number("to", 0.0);
        const int steps = c.integer("steps", 2);
        if (steps < 2) throw InvalidArgument("steps must be >= 2");
        if (c.has("values")) throw InvalidArgument("give either values or from/to/steps");
        std::vector<double> v(steps);
        for (int i = 0; i < steps; ++i) v[i] = from + (to - from) * i / (steps - 1);
        c.note("values", v);
        return v;
    }
    const std::vector<double> v = c.numbers("values", def);
    if (v.empty()) throw InvalidArgument("values must not be empty");
    return v;
}

void mu_identity_checks(Checks& ck, const GpProblem& p, const GpState& st, const std::string& prefix) {
    const double q = quartic_integral(st.phi);
    const double tol = 1e-8 * std::abs(st.mu);
    ck.at_most(prefix + "mu_identity", std::abs(st.mu - st.energy - 4.0 * pi * p.a * q), tol);
}

json cmd_solve_gp(Config& c, Context& ctx, Checks& ck, Stopwatch& sw) {
    GpSetup s = read_gp_setup(c, true, true);
    const InitStrategy init = InitStrategy::parse(c.text("init", "gaussian"));
    s.opts.restarts = c.integer("restarts", 1);
    if (s.opts.restarts < 1) throw InvalidArgument("restarts must be >= 1");
    for (const std::string& r : c.strings("restart_inits", {})) s.opts.restart_inits.push_back(InitStrategy::parse(r));
    const std::string stem = c.text("dump", "phi");
    c.finish("solve-gp");
    sw.lap("setup");

    const GpState st = gp_minimize(s.problem, init, s.opts);
    sw.lap("minimize");
    json out = state_json(s.problem, st);
    ck.add("converged", st.residual, s.opts.tol, "residual <= tol", st.converged);
    mu_identity_checks(ck, s.problem, st, "");
    if (!stem.empty()) {
        write_field(ctx.path(stem), st.phi, s.problem.omega);
        ctx.files.push_back(stem + ".f64");
        ctx.files.push_back(stem + ".json");
        out["field"] = stem;
    }
    return out;
}

json cmd_scan_omega(Config& c, Context& ctx, Checks& ck, Stopwatch& sw) {
    GpSetup s = read_gp_setup(c, false, true);
    const std::vector<double> values = sweep_values(c, {0.0, -0.5, -1.0, -1.5});
    const std::vector<InitStrategy> inits = parse_inits(c.strings("inits", {"gaussian", "vortex:1"}));
    const bool locate = c.flag("locate", false);
    const double lz_level = locate ? c.number("lz_level", 0.5) : 0.0;
    const double width = locate ? c.number("width", 0.01) : 0.0;
    c.finish("scan-omega");
    s.problem.validate();
    sw.lap("setup");

    const std::vector<ScanRow> rows = scan_omega(s.problem, values, inits, s.opts);
    sw.lap("scan");
    ctx.write_text("scan_omega.csv", scan_csv(rows));
    bool conv = true;
    for (const ScanRow& r : rows) conv = conv && r.converged;
    ck.truth("all_converged", conv);
    json out = {{"rows", rows_json(rows)}, {"csv", "scan_omega.csv"}};
    if (locate) {
        const Threshold th = locate_lz_threshold(s.problem, values.front(), values.back(), lz_level, inits, s.opts, width);
        sw.lap("threshold");
        out["threshold"] = {{"below", th.below},
                            {"above", th.above},
                            {"Lz_below", th.row_below.Lz},
                            {"Lz_above", th.row_above.Lz},
                            {"winding_above", th.row_above.total_winding},
                            {"evaluations", th.evaluations}};
        ck.at_most("Lz_below_threshold", std::abs(th.row_below.Lz), 1e-3);
        ck.at_least("Lz_above_threshold", std::abs(th.row_above.Lz), lz_level);
        ck.at_least("winding_above_threshold", std::abs(th.row_above.total_winding), 1.0);
    }
    return out;
}

json cmd_scan_a(Config& c, Context& ctx, Checks& ck, Stopwatch& sw) {
    GpSetup s = read_gp_setup(c, true, false);
    const std::vector<double> values = sweep_values(c, {0.0, 0.5, 1.0, 2.0, 4.0});
    const std::vector<InitStrategy> inits = parse_inits(c.strings("inits", {"gaussian"}));
    c.finish("scan-a");
    s.problem.validate();
    sw.lap("setup");

    const ConcavityReport rep = concavity_scan(s.problem, values, inits, s.opts);
    sw.lap("scan");
    ctx.write_text("scan_a.csv", scan_csv(rep.rows));
    ck.truth("all_converged", rep.all_converged);
    ck.at_most("monotone", rep.worst_monotone, rep.tolerance);
    ck.at_most("midpoint_concavity", rep.worst_concavity, rep.tolerance);
    ck.at_most("scaling", rep.worst_scaling, rep.tolerance);
    return {{"rows", rows_json(rep.rows)},
            {"csv", "scan_a.csv"},
            {"monotone", rep.monotone},
            {"concave", rep.concave},
            {"scaling", rep.scaling},
            {"worst_concavity", rep.worst_concavity},
            {"worst_scaling", rep.worst_scaling},
            {"worst_monotone", rep.worst_monotone},
            {"tolerance", rep.tolerance}};
}

json cmd_analyze(Config& c, Context&, Checks& ck, Stopwatch& sw) {
    const std::string path = c.text("field", "");
    if (path.empty()) throw InvalidArgument("analyze needs a field dump path");
    const double floor = c.number("floor", 1e-3);
    const int z_layer = c.integer("z_layer", -1);
    c.finish("analyze");
    const FieldDump d = read_field(path);
    sw.lap("read");
    const VortexReport vr = detect_vortices(d.field, floor, z_layer);
    json vort = json::array();
    for (const Vortex& v : vr.vortices) vort.push_back({{"x", v.x}, {"y", v.y}, {"winding", v.winding}});
    const double nrm = norm(d.field);
    ck.truth("finite_field", std::isfinite(nrm));
    sw.lap("analyze");
    return {{"vortices", vort},
            {"total_winding", vr.total_winding},
            {"z_layer", vr.z_layer},
            {"Lz", angular_momentum_z(d.field)},
            {"norm", nrm},
            {"grid", {{"dim", d.field.grid().dim()}, {"n", d.field.grid().n()}, {"L", d.field.grid().extent()}}},
            {"omega", d.omega}};
}

// ---------------------------------------------------------------- scattering

struct PotentialSpec {
    RadialPotential pot;
    std::string kind;
    double R0 = 0.0, W0 = 0.0;
};

PotentialSpec parse_potential(const std::vector<std::string>& t, double core) {
    const std::string& k = t.front();
    auto arity = [&](std::size_t n) {
        if (t.size() != n + 1)
            throw InvalidArgument("potential '" + k + "' takes " + std::to_string(n) + " argument(s)");
    };
    PotentialSpec s;
    s.kind = k;
    if (k == "hardcore" || k == "hard_sphere") {
        arity(1);
        s.R0 = parse_number(t[1], "potential R0");
        s.pot = RadialPotential::hard_sphere(s.R0);
        s.kind = "hardcore";
    } else if (k == "square") {
        arity(2);
        s.R0 = parse_number(t[1], "potential R0");
        s.W0 = parse_number(t[2], "potential W0");
        s.pot = RadialPotential::square_barrier(s.R0, s.W0);
    } else if (k == "zero") {
        arity(1);
        s.R0 = parse_number(t[1], "potential R0");
        s.pot = RadialPotential::zero(s.R0);
    } else if (k == "file") {
        arity(1);
        std::vector<double> r, w;
        read_table(t[1], r, w);
        s.pot = RadialPotential::tabulated(r, w, core);
        s.R0 = s.pot.R0;
    } else {
        throw InvalidArgument("potential must be 'hardcore R0', 'square R0 W0', 'zero R0' or 'file PATH'");
    }
    s.pot.validate();
    return s;
}

json cmd_scattering(Config& c, Context& ctx, Checks& ck, Stopwatch& sw) {
    const std::vector<std::string> tok = c.tokens("potential", {"hardcore", "1"});
    const double core = tok.front() == "file" ? c.number("core", 0.0) : 0.0;
    const PotentialSpec spec = parse_potential(tok, core);
    const double scale = c.number("scale", 1.0);
    const double factor = c.number("factor", 2.0);
    const double tol = c.number("tol", 1e-12);
    if (!(scale >= 1.0)) throw InvalidArgument("scale N must be >= 1");
    if (!(factor > 0.0)) throw InvalidArgument("factor must be positive");
    c.finish("scattering");
    sw.lap("setup");

    const ScatteringResult r = scattering_length(spec.pot, tol, factor);
    sw.lap("solve");
    json out = {{"a", r.a}, {"residual", r.match_residual}, {"steps", r.steps}, {"potential", spec.pot.label}};
    if (spec.kind == "hardcore") ck.near("hardcore_a_equals_R0", r.a, spec.R0, 1e-6 * spec.R0);
    if (spec.kind == "square") {
        const double closed = square_barrier_length(spec.R0, spec.W0, factor);
        out["closed_form"] = closed;
        ck.near("square_closed_form", r.a, closed, 1e-6 * std::abs(closed));
    }
    if (scale != 1.0) {
        const ScatteringResult rs = scattering_length(scale_interaction(spec.pot, scale), tol, factor);
        sw.lap("scaled");
        out["scale"] = scale;
        out["a_scaled"] = rs.a;
        out["a_over_N"] = r.a / scale;
        ck.near("scaled_a_over_N", rs.a, r.a / scale, std::max(1e-6 * std::abs(r.a / scale), 1e-15));
    }
    std::string csv = csv_row({"r", "f"});
    for (std::size_t i = 0; i < r.r.size(); ++i) csv += csv_row({format_double(r.r[i]), format_double(r.f[i])});
    ctx.write_text("scattering_profile.csv", csv);
    out["csv"] = "scattering_profile.csv";
    return out;
}

// ---------------------------------------------------------------- dyson

json cmd_dyson(Config& c, Context&, Checks& ck, Stopwatch& sw) {
    const double s = c.number("s", 0.1);
    const double R = c.number("R", 1e-3);
    const double eps = c.number("eps", 0.5);
    const double N = c.number("N", 1e6);
    const PotentialSpec spec = parse_potential(c.tokens("potential", {"hardcore", "1"}), 0.0);
    DysonCheckOptions dopt;
    dopt.channels = c.integers("channels", dopt.channels);
    dopt.levels = c.integer("levels", dopt.levels);
    dopt.scattering_factor = c.number("scattering_factor", dopt.scattering_factor);
    dopt.a_multiplier = c.number("a_multiplier", dopt.a_multiplier);
    const std::vector<double> slope_R = c.numbers("slope_R", {R / 10.0, R / 5.0, R / 2.0, R});
    const bool k0 = c.flag("k0", true);
    int J = 0, kn = 0;
    double eta = 0.0, kbox = 0.0;
    std::array<double, 3> omega{};
    if (k0) {
        J = c.integer("J", 4);
        eta = c.number("eta", 0.5);
        kn = c.integer("k0_n", 24);
        kbox = c.number("k0_box", 8.0);
        omega = c.omega("omega");
        if (!c.has("omega")) {
            omega = {0.0, 0.0, -0.5};
            c.note("omega", omega);
        }
    }
    c.finish("dyson-check");
    const CutoffFunction chi(s);
    sw.lap("setup");

    const SoftPotentials sp = build_soft_potentials(chi, R, eps);
    sw.lap("soft_potentials");
    const WrScaling sc = verify_wr_scaling(chi, slope_R);
    sw.lap("wR_scaling");
    const DysonCheckResult dr = check_dyson_inequality(spec.pot, N, sp, chi, dopt);
    sw.lap("inequality");

    ck.near("int_UR", sp.int_UR, 4.0 * pi, 1e-12 * 4.0 * pi);
    ck.at_least("wR_slope", sc.slope, 1.9);
    ck.at_least("dyson_min_eig", std::min(dr.min_eig, dr.extrapolated), -dr.slack);

    json levels = json::array();
    for (const DysonLevel& lv : dr.levels)
        levels.push_back({{"nodes", lv.nodes}, {"channel_min", lv.channel_min}, {"min_eig", lv.min_eig}});
    json out = {{"int_UR", sp.int_UR},
                {"int_fR", sp.int_fR},
                {"int_wR", sp.int_wR},
                {"UR_sup", sp.UR_sup},
                {"slope", sc.slope},
                {"slope_R", sc.R},
                {"slope_int_wR", sc.int_wR},
                {"a", dr.a},
                {"min_eig", dr.min_eig},
                {"drift", dr.drift},
                {"extrapolated", dr.extrapolated},
                {"slack", dr.slack},
                {"levels", levels},
                {"inequality_passed", dr.passed}};
    if (k0) {
        const Grid grid(3, kn, kbox);
        const GpProblem p = GpProblem::harmonic(grid, omega, 0.0);
        const ModifiedOneBody m = build_K0(p, chi, eta, J);
        sw.lap("K0");
        const KappaResult k1 = compute_kappa(grid, {0.0, 0.0, 0.0}, eta);
        const KappaResult k2 = compute_kappa(grid, {0.0, 0.0, 0.0}, 2.0 * eta);
        sw.lap("kappa_linearity");
        out["kappa"] = m.kappa;
        out["e_spectrum"] = m.e;
        out["eta"] = eta;
        out["K0_boundary"] = m.boundary;
        out["kappa_omega0"] = {k1.kappa, k2.kappa};
        ck.at_least("K0_lowest", m.e.front(), -1e-8);
        ck.at_most("kappa_linear_in_eta", std::abs(k2.kappa - 2.0 * k1.kappa), 1e-10 * std::abs(k2.kappa));
    }
    return out;
}

// ---------------------------------------------------------------- fock

ModeBasis read_mode_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open W file " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw InvalidArgument("W file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("W") || !j.at("W").is_array())
        throw InvalidArgument("W file must be an object with a 'W' array");
    ModeBasis mb;
    for (const json& w : j.at("W")) {
        if (w.is_number()) mb.W.emplace_back(w.get<double>(), 0.0);
        else if (w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number())
            mb.W.emplace_back(w[0].get<double>(), w[1].get<double>());
        else throw InvalidArgument("W entries must be numbers or [re, im] pairs");
    }
    if (j.contains("e")) mb.e = j.at("e").get<std::vector<double>>();
    return mb;
}

json cmd_fock_ed(Config& c, Context&, Checks& ck, Stopwatch& sw) {
    const int J = c.integer("J", 2);
    const int N = c.integer("sector", 8);
    const int Nmax = c.integer("Nmax", N);
    const double g = c.number("g", 1.0);
    const bool mean_field = c.flag("mean_field_scaling", true);
    const double C = c.number("C", 0.0);
    const std::string wfile = c.text("W_file", "");
    const bool sweep = c.flag("sweep", false);
    ModeBasis mb;
    if (wfile.empty()) {
        if (J != 2) throw InvalidArgument("without W_file the built-in two-mode model needs J = 2");
        mb = two_mode_oscillator();
    } else {
        mb = read_mode_file(wfile);
    }
    mb.e = c.numbers("e", mb.e);
    if (static_cast<int>(mb.e.size()) != J) throw InvalidArgument("e must list J one-particle energies");
    const long long J4 = static_cast<long long>(J) * J * J * J;
    if (static_cast<long long>(mb.W.size()) != J4) throw InvalidArgument("W must hold J^4 entries");
    if (N < 1 || Nmax < N) throw InvalidArgument("need 1 <= sector <= Nmax");
    if (C < 0.0) throw InvalidArgument("C must be >= 0");
    c.finish("fock-ed");
    mb.validate();
    sw.lap("setup");

    auto scaled = [&](int n) {
        ModeBasis m = mb;
        const double f = mean_field ? g / n : g;
        for (cplx& w : m.W) w *= f;
        m.C = C;
        m.M = n;
        return m;
    };
    const ModeBasis m = scaled(N);
    const FockBasis basis(J, Nmax);
    const FockOperator H = build_hamiltonian(m, basis, C > 0.0);
    const GroundState gs = ground_state(H, basis, N);
    sw.lap("diagonalize");
    const double herm = H.hermiticity_defect();
    const double comm = commutator_defect(H, number_operator(basis));
    const double scale = std::max(1.0, std::abs(gs.energy));
    ck.at_most("ground_state_residual", gs.residual, 1e-10 * scale);
    ck.at_most("hermiticity_defect", herm, 1e-12 * scale);
    ck.at_most("number_commutator", comm, 1e-12 * scale);
    json out = {{"energy", gs.energy},
                {"energy_per_particle", gs.energy / N},
                {"residual", gs.residual},
                {"basis_dim", basis.size()},
                {"sector_dim", static_cast<int>(gs.sector.size())},
                {"hermiticity_defect", herm},
                {"number_commutator", comm},
                {"pair_space_min_eigenvalue", mb.pair_space_min_eigenvalue()}};
    if (J == 2 && mean_field) {
        const HartreeMinimum hm = hartree_minimum(mb, g);
        out["e_hartree"] = hm.energy;
        out["relative_gap"] = std::abs(gs.energy / N - hm.energy) / std::abs(hm.energy);
        if (sweep) {
            json rows = json::array();
            double prev = INFINITY;
            bool monotone = true;
            double last = 0.0;
            for (int n = 2; n <= N; ++n) {
                const FockBasis b(J, n);
                const GroundState gn = ground_state(build_hamiltonian(scaled(n), b, C > 0.0), b, n);
                last = std::abs(gn.energy / n - hm.energy) / std::abs(hm.energy);
                monotone = monotone && last <= prev;
                prev = last;
                rows.push_back({{"N", n}, {"energy_per_particle", gn.energy / n}, {"relative_gap", last}});
            }
            sw.lap("sweep");
            out["sweep"] = rows;
            ck.truth("gap_nonincreasing", monotone);
            ck.at_most("final_relative_gap", last, 0.10);
        }
    }
    return out;
}

// ---------------------------------------------------------------- symbols

int modes_in(const std::string& op) {
    int m = 1;
    for (std::size_t p = op.find('_'); p != std::string::npos; p = op.find('_', p + 1)) {
        std::size_t q = p + 1;
        int v = 0;
        while (q < op.size() && std::isdigit(static_cast<unsigned char>(op[q]))) v = 10 * v + (op[q++] - '0');
        m = std::max(m, v);
    }
    return m;
}

json cmd_symbols(Config& c, Context&, Checks& ck, Stopwatch& sw) {
    const std::string text = c.text("op", "adag a");
    const int modes = c.integer("modes", modes_in(text));
    const std::vector<std::string> zs = c.strings("z", {"0.7+0.2i"});
    ResolutionOptions ro;
    ro.Z = c.number("Z", ro.Z);
    ro.radial = c.integer("nodes", ro.radial);
    ro.angular = c.integer("angular", ro.angular);
    ro.n_cut = c.integer("n_cut", ro.n_cut);
    const int n_max = c.integer("n_max", 40);
    const double tol = c.number("tol", 1e-6);
    c.finish("symbols-check");
    if (modes < 1 || modes > 2) throw InvalidArgument("symbols-check supports 1 or 2 modes");
    std::vector<cplx> z;
    for (const std::string& s : zs) z.push_back(parse_complex(s));
    if (z.size() == 1) z.assign(modes, z.front());
    if (static_cast<int>(z.size()) != modes) throw InvalidArgument("give one z or one per mode");
    const OperatorPolynomial op = OperatorPolynomial::parse(text, modes);
    sw.lap("setup");

    const SymbolPolynomial lower = lower_symbol(op);
    const SymbolPolynomial upper = upper_symbol(op);
    const cplx lz = lower(z), uz = upper(z);
    const double round_trip = upper.heat(+1).distance(lower);
    const FockBasis basis(modes, n_max);
    const CoherentVector cv = coherent_state(z, basis);
    const cplx ex = expectation(cv, op.to_operator(basis));
    sw.lap("symbols");
    const ResolutionReport rr = verify_resolution(op, ro);
    sw.lap("resolution");

    auto coeffs = [](const SymbolPolynomial& s) {
        json out = json::array();
        for (const auto& [key, v] : s.coefficients())
            out.push_back({{"conj_z_powers", key.first}, {"z_powers", key.second}, {"coefficient", complex_json(v)}});
        return out;
    };
    const double ex_err = std::abs(ex - lz);
    ck.at_most("lower_equals_expectation", ex_err, 1e-10 * std::max(1.0, std::abs(lz)));
    ck.at_most("heat_round_trip", round_trip, 1e-12);
    ck.at_most("identity_error", rr.identity_error, tol);
    ck.at_most("operator_error", rr.operator_error, tol);
    json zj = json::array();
    for (cplx v : z) zj.push_back(complex_json(v));
    return {{"op", text},
            {"modes", modes},
            {"z", zj},
            {"lower", complex_json(lz)},
            {"upper", complex_json(uz)},
            {"expectation", complex_json(ex)},
            {"lower_coefficients", coeffs(lower)},
            {"upper_coefficients", coeffs(upper)},
            {"heat_round_trip", round_trip},
            {"identity_error", rr.identity_error},
            {"operator_error", rr.operator_error},
            {"block", rr.block}};
}

// ---------------------------------------------------------------- heat kernel

ConfiningPotential parse_confining(const std::vector<std::string>& t) {
    const std::string& k = t.front();
    if (k == "harmonic") {
        if (t.size() > 2) throw InvalidArgument("V harmonic takes at most one argument");
        return ConfiningPotential::harmonic(t.size() == 2 ? parse_number(t[1], "V weight") : 1.0);
    }
    if (k == "log") {
        if (t.size() < 2 || t.size() > 3) throw InvalidArgument("V log takes C1 [C2]");
        return ConfiningPotential::log_growth(parse_number(t[1], "V C1"), t.size() == 3 ? parse_number(t[2], "V C2") : 0.0);
    }
    if (k == "zero") {
        if (t.size() != 1) throw InvalidArgument("V zero takes no arguments");
        return ConfiningPotential::zero();
    }
    if (k == "file") {
        if (t.size() != 2) throw InvalidArgument("V file takes a path");
        std::vector<double> r, v;
        read_table(t[1], r, v);
        return ConfiningPotential::tabulated(r, v);
    }
    throw InvalidArgument("V must be 'harmonic [w]', 'log C1 [C2]', 'zero' or 'file PATH'");
}

json cmd_heat(Config& c, Context& ctx, Checks& ck, Stopwatch& sw) {
    const ConfiningPotential V = parse_confining(c.tokens("V", {"harmonic"}));
    const double alpha = c.number("alpha", 1.0);
    const double s = c.number("s", 2.0);
    const int dim = c.integer("dim", 1);
    BruteOptions bo;
    bo.box = c.number("box", bo.box);
    bo.points = c.integer("points", dim == 3 ? 200 : bo.points);
    TraceOptions to;
    to.R0 = c.number("R0", to.R0);
    to.max_doublings = c.integer("max_doublings", to.max_doublings);
    const int h_points = c.integer("h_points", 60);
    const bool trace = c.flag("trace", true);
    const bool perturbed = c.has("B") || c.has("D");
    double B = 0.0, D = 0.0;
    if (perturbed) {
        B = c.number("B", 1.0);
        D = c.number("D", 1.0);
    }
    c.finish("heat-bound");
    if (dim != 1 && dim != 3) throw InvalidArgument("dim must be 1 or 3");
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (perturbed && dim != 1) throw InvalidArgument("the rank-one perturbation check is 1D only");
    sw.lap("setup");

    const HAlphaTable h = build_h_alpha(alpha, dim, h_points);
    sw.lap("h_alpha");
    const DiagComparison cmp = compare_diag(V, alpha, dim, bo);
    sw.lap("brute_force");
    ck.near("int_h", h.integral, 1.0, 1e-6);
    ck.at_most("diag_violation", cmp.max_violation, cmp.slack);
    json out = {{"V", V.describe()},
                {"int_h", h.integral},
                {"max_violation", cmp.max_violation},
                {"slack", cmp.slack},
                {"dominated", cmp.dominated}};
    std::string csv = csv_row({"x", "bound", "brute"});
    for (std::size_t i = 0; i < cmp.x.size(); ++i)
        csv += csv_row({format_double(cmp.x[i]), format_double(cmp.bound[i]), format_double(cmp.brute[i])});
    ctx.write_text("heat_diag.csv", csv);
    out["csv"] = "heat_diag.csv";
    if (trace) {
        const WeightedTrace w = weighted_trace(V, alpha, s, dim, to);
        sw.lap("trace");
        out["trace_value"] = w.value;
        out["converged"] = w.converged;
        out["divergent"] = w.divergent;
        out["last_growth"] = w.last_growth;
        out["tail_estimate"] = w.tail_estimate;
        out["trace_radii"] = w.radii;
        out["trace_partial"] = w.partial;
    }
    if (perturbed) {
        const PerturbedReport pr = perturbed_bound_check(V, alpha, B, D, bo);
        sw.lap("perturbed");
        out["perturbed"] = {{"phi_norm_sq", pr.phi_norm_sq},
                            {"max_kernel", pr.max_kernel},
                            {"max_violation", pr.max_violation},
                            {"slack", pr.slack},
                            {"passed", pr.passed}};
        ck.at_most("perturbed_violation", pr.max_violation, pr.slack);
    }
    return out;
}

using Command = json (*)(Config&, Context&, Checks&, Stopwatch&);

const std::vector<std::pair<std::string, Command>>& table() {
    static const std::vector<std::pair<std::string, Command>> t = {
        {"solve-gp", cmd_solve_gp},   {"scan-omega", cmd_scan_omega},  {"scan-a", cmd_scan_a},
        {"analyze", cmd_analyze},     {"scattering", cmd_scattering},  {"dyson-check", cmd_dyson},
        {"fock-ed", cmd_fock_ed},     {"symbols-check", cmd_symbols},  {"heat-bound", cmd_heat}};
    return t;
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, fn] : table()) v.push_back(name);
        return v;
    }();
    return names;
}

std::complex<double> parse_complex(const std::string& raw) {
    std::string t;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw InvalidArgument("empty complex number");
    if (t.front() == '(' && t.back() == ')') {
        const auto comma = t.find(',');
        if (comma == std::string::npos) throw InvalidArgument("complex '" + raw + "' needs (re,im)");
        return {parse_number(t.substr(1, comma - 1), "complex"), parse_number(t.substr(comma + 1, t.size() - comma - 2), "complex")};
    }
    if (t.back() != 'i' && t.back() != 'j') return {parse_number(t, "complex"), 0.0};
    t.pop_back();
    // Split at the last sign that is not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;)
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    auto imag = [&](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return parse_number(s, "complex");
    };
    if (split == std::string::npos) return {0.0, imag(t)};
    return {parse_number(t.substr(0, split), "complex"), imag(t.substr(split))};
}

RunOutput run(const json& config) {
    Config cfg(config);
    const std::string command = cfg.text("command", "");
    Command fn = nullptr;
    for (const auto& [name, f] : table())
        if (name == command) fn = f;
    if (!fn) throw InvalidArgument("unknown command '" + command + "'");
    Context ctx;
    ctx.out = cfg.text("output_dir", ".");
    std::error_code ec;
    std::filesystem::create_directories(ctx.out, ec);
    if (ec) throw IoError("cannot create output directory " + ctx.out.string() + ": " + ec.message());
    Checks ck;
    Stopwatch sw;
    const json outputs = fn(cfg, ctx, ck, sw);

    RunOutput r;
    r.passed = ck.all();
    r.timings = sw.timings();
    r.result = {{"command", command},
                {"config", cfg.echo()},
                {"outputs", outputs},
                {"checks", ck.list()},
                {"passed", r.passed}};
    ctx.write_text("timings.json", dump_json(r.timings) + "\n");
    r.result["files"] = ctx.files;
    r.result["files"].push_back("results.json");
    ctx.write_text("results.json", dump_json(r.result) + "\n");
    r.files = ctx.files;
    return r;
}

}  // namespace rotogp
