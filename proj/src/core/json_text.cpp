#include "core/json_text.hpp"

#include <cmath>
#include <cstdio>

namespace rotogp {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep the token a JSON float so readers do not narrow it to an integer.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

namespace {

void emit(const nlohmann::json& j, int indent, int depth, std::string& out) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
    case nlohmann::json::value_t::number_float:
        out += format_double(j.get<double>());
        return;
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{";
        out += nl;
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ",";
                out += nl;
            }
            first = false;
            out += pad;
            out += nlohmann::json(it.key()).dump();
            out += indent > 0 ? ": " : ":";
            emit(it.value(), indent, depth + 1, out);
        }
        out += nl;
        out += close;
        out += "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Flat numeric arrays stay on one line.
        bool flat = true;
        for (const auto& e : j) flat = flat && (e.is_number() || e.is_boolean() || e.is_null());
        out += "[";
        if (!flat) out += nl;
        bool first = true;
        for (const auto& e : j) {
            if (!first) {
                out += ",";
                if (flat) out += indent > 0 ? " " : "";
                else out += nl;
            }
            first = false;
            if (!flat) out += pad;
            emit(e, indent, depth + 1, out);
        }
        if (!flat) {
            out += nl;
            out += close;
        }
        out += "]";
        return;
    }
    default:
        out += j.dump();
    }
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    return out;
}

}  // namespace rotogp
