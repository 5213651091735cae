#include "rotogp/rotogp.h"

#include <exception>
#include <json.hpp>
#include <new>
#include <string>

#include "analysis/vortex.hpp"
#include "app/app.hpp"
#include "core/errors.hpp"
#include "core/json_text.hpp"
#include "field/dump.hpp"

struct rotogp_result {
    std::string json;
    std::string timings;
    nlohmann::json doc;
    bool passed = false;
};

struct rotogp_field {
    rotogp::FieldDump dump;
};

namespace {

thread_local std::string last_error;

rotogp_status fail(rotogp_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

// Maps exceptions escaping the core onto status codes.
template <class F>
rotogp_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return ROTOGP_OK;
    } catch (const rotogp::GridMismatch& e) {
        return fail(ROTOGP_ERR_GRID_MISMATCH, e.what());
    } catch (const rotogp::InvalidArgument& e) {
        return fail(ROTOGP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(ROTOGP_ERR_INVALID_ARGUMENT, std::string("config: ") + e.what());
    } catch (const rotogp::NotConverged& e) {
        return fail(ROTOGP_ERR_NOT_CONVERGED, e.what());
    } catch (const rotogp::NumericalError& e) {
        return fail(ROTOGP_ERR_NUMERICAL, e.what());
    } catch (const rotogp::IoError& e) {
        return fail(ROTOGP_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(ROTOGP_ERR_INTERNAL, "out of memory");
    } catch (const std::invalid_argument& e) {
        return fail(ROTOGP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(ROTOGP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(ROTOGP_ERR_INTERNAL, "unknown exception");
    }
}

}  // namespace

extern "C" {

const char* rotogp_version(void) { return "0.1.0"; }

const char* rotogp_status_string(rotogp_status status) {
    switch (status) {
    case ROTOGP_OK: return "ok";
    case ROTOGP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ROTOGP_ERR_GRID_MISMATCH: return "grid mismatch";
    case ROTOGP_ERR_NOT_CONVERGED: return "not converged";
    case ROTOGP_ERR_NUMERICAL: return "numerical failure";
    case ROTOGP_ERR_IO: return "i/o failure";
    case ROTOGP_ERR_NULL_POINTER: return "null pointer";
    case ROTOGP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* rotogp_last_error(void) { return last_error.c_str(); }

size_t rotogp_command_count(void) { return rotogp::subcommands().size(); }

const char* rotogp_command_name(size_t index) {
    const auto& names = rotogp::subcommands();
    return index < names.size() ? names[index].c_str() : nullptr;
}

rotogp_status rotogp_run(const char* config_json, rotogp_result** out) {
    if (!config_json || !out) return fail(ROTOGP_ERR_NULL_POINTER, "rotogp_run: null argument");
    *out = nullptr;
    return guarded([&] {
        nlohmann::json cfg;
        try {
            cfg = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::parse_error& e) {
            throw rotogp::InvalidArgument(std::string("config is not valid JSON: ") + e.what());
        }
        rotogp::RunOutput r = rotogp::run(cfg);
        auto* res = new rotogp_result;
        res->json = rotogp::dump_json(r.result);
        res->timings = rotogp::dump_json(r.timings);
        res->doc = std::move(r.result);
        res->passed = r.passed;
        *out = res;
    });
}

const char* rotogp_result_json(const rotogp_result* result) { return result ? result->json.c_str() : nullptr; }

const char* rotogp_result_timings(const rotogp_result* result) { return result ? result->timings.c_str() : nullptr; }

int rotogp_result_passed(const rotogp_result* result) { return result && result->passed ? 1 : 0; }

rotogp_status rotogp_result_number(const rotogp_result* result, const char* pointer, double* value) {
    if (!result || !pointer || !value) return fail(ROTOGP_ERR_NULL_POINTER, "rotogp_result_number: null argument");
    return guarded([&] {
        const nlohmann::json::json_pointer ptr(pointer);
        if (!result->doc.contains(ptr)) throw rotogp::InvalidArgument(std::string("no entry at ") + pointer);
        const nlohmann::json& v = result->doc.at(ptr);
        if (v.is_boolean()) *value = v.get<bool>() ? 1.0 : 0.0;
        else if (v.is_number()) *value = v.get<double>();
        else throw rotogp::InvalidArgument(std::string("entry at ") + pointer + " is not a number");
    });
}

void rotogp_result_free(rotogp_result* result) { delete result; }

rotogp_status rotogp_field_load(const char* path, rotogp_field** out) {
    if (!path || !out) return fail(ROTOGP_ERR_NULL_POINTER, "rotogp_field_load: null argument");
    *out = nullptr;
    return guarded([&] { *out = new rotogp_field{rotogp::read_field(path)}; });
}

rotogp_status rotogp_field_info(const rotogp_field* field, int* dim, int* n, double* extent) {
    if (!field) return fail(ROTOGP_ERR_NULL_POINTER, "rotogp_field_info: null field");
    const rotogp::Grid& g = field->dump.field.grid();
    if (dim) *dim = g.dim();
    if (n) *n = g.n();
    if (extent) *extent = g.extent();
    return ROTOGP_OK;
}

rotogp_status rotogp_field_data(const rotogp_field* field, const double** values, size_t* count) {
    if (!field || !values || !count) return fail(ROTOGP_ERR_NULL_POINTER, "rotogp_field_data: null argument");
    *values = reinterpret_cast<const double*>(field->dump.field.data());
    *count = field->dump.field.size();
    return ROTOGP_OK;
}

rotogp_status rotogp_field_save(const rotogp_field* field, const char* stem) {
    if (!field || !stem) return fail(ROTOGP_ERR_NULL_POINTER, "rotogp_field_save: null argument");
    return guarded([&] { rotogp::write_field(stem, field->dump.field, field->dump.omega); });
}

rotogp_status rotogp_field_vortices(const rotogp_field* field, int* total_winding, double* lz) {
    if (!field) return fail(ROTOGP_ERR_NULL_POINTER, "rotogp_field_vortices: null field");
    return guarded([&] {
        if (total_winding) *total_winding = rotogp::detect_vortices(field->dump.field).total_winding;
        if (lz) *lz = rotogp::angular_momentum_z(field->dump.field);
    });
}

void rotogp_field_free(rotogp_field* field) { delete field; }

}  // extern "C"
