#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>

#include "rotogp/rotogp.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_root() { return fs::temp_directory_path() / ("rotogp_capi_" + std::to_string(::getpid())); }

// Removes the per-process scratch tree at exit.
struct ScratchCleanup {
    ~ScratchCleanup() {
        std::error_code ec;
        fs::remove_all(scratch_root(), ec);
    }
} cleanup;

fs::path scratch(const std::string& name) {
    const fs::path p = scratch_root() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json run_ok(const json& cfg) {
    rotogp_result* r = nullptr;
    const rotogp_status st = rotogp_run(cfg.dump().c_str(), &r);
    INFO(rotogp_last_error());
    REQUIRE(st == ROTOGP_OK);
    REQUIRE(r != nullptr);
    json doc = json::parse(rotogp_result_json(r));
    doc["__passed"] = rotogp_result_passed(r) == 1;
    rotogp_result_free(r);
    return doc;
}

rotogp_status run_status(const std::string& text) {
    rotogp_result* r = nullptr;
    const rotogp_status st = rotogp_run(text.c_str(), &r);
    if (st != ROTOGP_OK) CHECK(r == nullptr);
    rotogp_result_free(r);
    return st;
}

std::string cli() {
    const char* p = std::getenv("ROTOGP_CLI");
    return p ? p : "";
}

int run_cli(const std::string& args) {
    const std::string cmd = cli() + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    REQUIRE(raw != -1);
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

json read_json(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    return json::parse(f);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("version, status strings and command table") {
    CHECK(std::string(rotogp_version()) == "0.1.0");
    CHECK(std::string(rotogp_status_string(ROTOGP_ERR_GRID_MISMATCH)) == "grid mismatch");
    REQUIRE(rotogp_command_count() == 9);
    CHECK(std::string(rotogp_command_name(0)) == "solve-gp");
    CHECK(std::string(rotogp_command_name(8)) == "heat-bound");
    CHECK(rotogp_command_name(9) == nullptr);
}

TEST_CASE("null pointers are reported, not dereferenced") {
    rotogp_result* r = nullptr;
    CHECK(rotogp_run(nullptr, &r) == ROTOGP_ERR_NULL_POINTER);
    CHECK(std::string(rotogp_last_error()).find("null") != std::string::npos);
    CHECK(rotogp_run("{}", nullptr) == ROTOGP_ERR_NULL_POINTER);
    double v = 0.0;
    CHECK(rotogp_result_number(nullptr, "/x", &v) == ROTOGP_ERR_NULL_POINTER);
    CHECK(rotogp_result_passed(nullptr) == 0);
    CHECK(rotogp_result_json(nullptr) == nullptr);
    CHECK(rotogp_field_load(nullptr, nullptr) == ROTOGP_ERR_NULL_POINTER);
    CHECK(rotogp_field_info(nullptr, nullptr, nullptr, nullptr) == ROTOGP_ERR_NULL_POINTER);
    rotogp_result_free(nullptr);
    rotogp_field_free(nullptr);
}

TEST_CASE("2D oscillator through the C API, with the field dump") {
    const fs::path out = scratch("solve");
    const json cfg = {{"command", "solve-gp"}, {"dim", 2}, {"omega", 0.0}, {"a", 0.0}, {"output_dir", out.string()}};
    rotogp_result* r = nullptr;
    REQUIRE(rotogp_run(cfg.dump().c_str(), &r) == ROTOGP_OK);
    CHECK(rotogp_result_passed(r) == 1);
    double e = 0.0, conv = 0.0;
    REQUIRE(rotogp_result_number(r, "/outputs/energy", &e) == ROTOGP_OK);
    CHECK(std::abs(e - 2.0) <= 1e-5);
    REQUIRE(rotogp_result_number(r, "/outputs/converged", &conv) == ROTOGP_OK);
    CHECK(conv == 1.0);
    CHECK(rotogp_result_number(r, "/outputs/init_used", &e) == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(rotogp_result_number(r, "/outputs/missing", &e) == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(json::parse(rotogp_result_timings(r)).contains("minimize"));
    // results.json on disk is the same document.
    CHECK(slurp(out / "results.json") == std::string(rotogp_result_json(r)) + "\n");
    rotogp_result_free(r);

    rotogp_field* f = nullptr;
    REQUIRE(rotogp_field_load((out / "phi.f64").string().c_str(), &f) == ROTOGP_OK);
    int dim = 0, n = 0;
    double L = 0.0;
    REQUIRE(rotogp_field_info(f, &dim, &n, &L) == ROTOGP_OK);
    CHECK(dim == 2);
    CHECK(n == 48);
    CHECK(L == 14.0);
    const double* data = nullptr;
    std::size_t count = 0;
    REQUIRE(rotogp_field_data(f, &data, &count) == ROTOGP_OK);
    REQUIRE(count == 48u * 48u);
    double nrm = 0.0;
    for (std::size_t i = 0; i < 2 * count; ++i) nrm += data[i] * data[i];
    CHECK(nrm * (L / n) * (L / n) == doctest::Approx(1.0).epsilon(1e-12));
    int winding = -1;
    double lz = 1.0;
    REQUIRE(rotogp_field_vortices(f, &winding, &lz) == ROTOGP_OK);
    CHECK(winding == 0);
    CHECK(std::abs(lz) < 1e-12);
    const std::string copy = (out / "copy").string();
    REQUIRE(rotogp_field_save(f, copy.c_str()) == ROTOGP_OK);
    CHECK(slurp(out / "copy.f64") == slurp(out / "phi.f64"));
    rotogp_field_free(f);
}

TEST_CASE("config errors map to status codes before any work") {
    const fs::path out = scratch("errors");
    CHECK(run_status("not json") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status("[1, 2]") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "nope"})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "solve-gp", "dim": 4})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "solve-gp", "dim": "two"})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "solve-gp", "n": 2.5})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "solve-gp", "omgea": 1})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(std::string(rotogp_last_error()).find("omgea") != std::string::npos);
    CHECK(run_status(R"({"command": "solve-gp", "dim": 2, "omega": [1, 0, 0]})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "scattering", "potential": ["square", 1]})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "symbols-check", "z": "0.7+"})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "fock-ed", "J": 3})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "heat-bound", "dim": 3, "B": 1})") == ROTOGP_ERR_INVALID_ARGUMENT);
    CHECK(run_status(R"({"command": "analyze", "field": "/nonexistent/phi"})") == ROTOGP_ERR_IO);

    // A trap file with the wrong number of values is a grid mismatch.
    const fs::path trap = out / "trap.f64";
    {
        std::ofstream t(trap, std::ios::binary);
        const double v = 1.0;
        for (int i = 0; i < 10; ++i) t.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    const json cfg = {{"command", "solve-gp"}, {"dim", 2}, {"n", 16}, {"trap", "file"}, {"trap_file", trap.string()},
                      {"output_dir", out.string()}};
    CHECK(run_status(cfg.dump()) == ROTOGP_ERR_GRID_MISMATCH);
    CHECK_FALSE(fs::exists(out / "results.json"));
}

TEST_CASE("trap from file reproduces the built-in harmonic trap") {
    const fs::path out = scratch("trap");
    const int n = 32;
    const double L = 12.0, h = L / n;
    {
        std::ofstream t(out / "trap.f64", std::ios::binary);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double x = -0.5 * L + (i + 0.5) * h, y = -0.5 * L + (j + 0.5) * h;
                const double v = x * x + y * y;
                t.write(reinterpret_cast<const char*>(&v), sizeof v);
            }
    }
    const json base = {{"command", "solve-gp"}, {"dim", 2}, {"n", n}, {"box", L}, {"a", 1.0}, {"dump", ""},
                       {"output_dir", out.string()}};
    json file = base;
    file["trap"] = "file";
    file["trap_file"] = (out / "trap.f64").string();
    const double e0 = run_ok(base)["outputs"]["energy"].get<double>();
    const double e1 = run_ok(file)["outputs"]["energy"].get<double>();
    CHECK(e1 == doctest::Approx(e0).epsilon(1e-12));
}

TEST_CASE("identical config and seed reproduce outputs bit for bit") {
    const fs::path a = scratch("rep_a"), b = scratch("rep_b");
    json cfg = {{"command", "solve-gp"}, {"dim", 2}, {"n", 48}, {"box", 16.0}, {"omega", -1.0}, {"a", 3.0},
                {"init", "random"}, {"restarts", 2}, {"seed", 99}};
    cfg["output_dir"] = a.string();
    const json ra = run_ok(cfg);
    cfg["output_dir"] = b.string();
    const json rb = run_ok(cfg);
    CHECK(ra["outputs"] == rb["outputs"]);
    CHECK(slurp(a / "phi.f64") == slurp(b / "phi.f64"));
    // A different seed takes a different path.
    cfg["seed"] = 100;
    CHECK(run_ok(cfg)["outputs"]["restart_energies"] != ra["outputs"]["restart_energies"]);
}

TEST_CASE("symbols, scattering and fock through the C API") {
    const fs::path out = scratch("misc");
    const json s = run_ok({{"command", "symbols-check"}, {"op", "adag a"}, {"z", "0.7+0.2i"}, {"output_dir", out.string()}});
    CHECK(s["__passed"] == true);
    CHECK(s["outputs"]["lower"][0].get<double>() == doctest::Approx(0.53).epsilon(1e-14));
    CHECK(s["outputs"]["upper"][0].get<double>() == doctest::Approx(-0.47).epsilon(1e-14));

    const json sc = run_ok({{"command", "scattering"}, {"potential", {"square", 1, 5}}, {"scale", 10},
                            {"output_dir", out.string()}});
    CHECK(sc["__passed"] == true);
    const double kappa = std::sqrt(10.0);
    CHECK(sc["outputs"]["a"].get<double>() == doctest::Approx(1.0 - std::tanh(kappa) / kappa).epsilon(1e-6));
    CHECK(fs::exists(out / "scattering_profile.csv"));

    const json f = run_ok({{"command", "fock-ed"}, {"sector", 4}, {"output_dir", out.string()}});
    CHECK(f["__passed"] == true);
    CHECK(f["outputs"]["sector_dim"] == 5);
}

TEST_CASE("command-line examples and exit codes") {
    REQUIRE_FALSE(cli().empty());
    const fs::path out = scratch("cli");
    const std::string o = " --out " + out.string();

    CHECK(run_cli(o + " solve-gp --dim 2 --omega 0 --a 0") == 0);
    json r = read_json(out / "results.json");
    CHECK(std::abs(r["outputs"]["energy"].get<double>() - 2.0) <= 1e-5);
    CHECK(fs::exists(out / "phi.f64"));
    CHECK(fs::exists(out / "phi.json"));

    CHECK(run_cli(o + " heat-bound --V harmonic --alpha 1 --dim 1") == 0);
    r = read_json(out / "results.json");
    CHECK(r["outputs"]["max_violation"].get<double>() <= 0.0);
    CHECK(r["outputs"]["converged"] == true);

    CHECK(run_cli(o + " dyson-check") == 0);
    r = read_json(out / "results.json");
    CHECK(r["outputs"]["int_UR"].get<double>() == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
    CHECK(r["outputs"]["e_spectrum"].size() == 4);

    // Config validation failures exit with 2.
    CHECK(run_cli(o + " solve-gp --dim 7") == 2);
    CHECK(run_cli(o + " solve-gp --bogus") == 2);
    CHECK(run_cli(o + " scattering --potential square 1 x") == 2);
    CHECK(run_cli(o + " --config /nonexistent.json") == 2);
    CHECK(run_cli(o) == 2);
    // A failing invariant check exits with 1: an inflated a breaks the inequality.
    CHECK(run_cli(o + " dyson-check --a-multiplier 300 --channels 0 --k0 false") == 1);
    r = read_json(out / "results.json");
    CHECK(r["passed"] == false);

    // Flags override the config file.
    {
        std::ofstream c(out / "cfg.json");
        c << R"({"command": "scattering", "potential": ["hardcore", 2.0], "scale": 10})";
    }
    CHECK(run_cli(o + " --config " + (out / "cfg.json").string()) == 0);
    CHECK(read_json(out / "results.json")["outputs"]["a"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(run_cli(o + " --config " + (out / "cfg.json").string() + " scattering --potential hardcore 3") == 0);
    r = read_json(out / "results.json");
    CHECK(r["outputs"]["a"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(r["config"]["scale"].get<double>() == 10.0);
    CHECK(run_cli(o + " --config " + (out / "cfg.json").string() + " solve-gp") == 2);
}

TEST_CASE("floats are written with 17 significant digits") {
    const fs::path out = scratch("digits");
    run_ok({{"command", "scattering"}, {"potential", {"square", 1, 5}}, {"output_dir", out.string()}});
    const std::string text = slurp(out / "results.json");
    const auto pos = text.find("\"a\": ");
    REQUIRE(pos != std::string::npos);
    const std::string token = text.substr(pos + 5, text.find_first_of(",\n", pos) - pos - 5);
    int digits = 0;
    for (char c : token.substr(0, token.find_first_of("eE"))) digits += std::isdigit(static_cast<unsigned char>(c)) ? 1 : 0;
    // A leading "0." contributes one non-significant digit.
    CHECK(digits >= 17);
    CHECK(std::stod(token) == read_json(out / "results.json")["outputs"]["a"].get<double>());
}
