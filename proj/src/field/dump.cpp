#include "field/dump.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <vector>

#include "core/errors.hpp"
#include "core/json_text.hpp"

namespace rotogp {

namespace {

std::string strip_suffix(const std::string& path) {
    for (const char* ext : {".f64", ".json"}) {
        const std::size_t len = std::strlen(ext);
        if (path.size() > len && path.compare(path.size() - len, len, ext) == 0)
            return path.substr(0, path.size() - len);
    }
    return path;
}

std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
        return r;
    }
    return v;
}

}  // namespace

void write_field(const std::string& stem_in, const ComplexField& field,
                 const std::array<double, 3>& omega) {
    const std::string stem = strip_suffix(stem_in);
    std::ofstream bin(stem + ".f64", std::ios::binary);
    if (!bin) throw IoError("cannot open " + stem + ".f64 for writing");
    std::vector<std::uint64_t> words(2 * field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        words[2 * i] = to_little(std::bit_cast<std::uint64_t>(field[i].real()));
        words[2 * i + 1] = to_little(std::bit_cast<std::uint64_t>(field[i].imag()));
    }
    bin.write(reinterpret_cast<const char*>(words.data()),
              static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
    if (!bin) throw IoError("failed writing " + stem + ".f64");

    nlohmann::json side = {{"dim", field.grid().dim()},
                           {"n", field.grid().n()},
                           {"L", field.grid().extent()},
                           {"omega", omega},
                           {"format", "f64le-interleaved-rowmajor"}};
    std::ofstream js(stem + ".json");
    if (!js) throw IoError("cannot open " + stem + ".json for writing");
    js << dump_json(side) << "\n";
}

FieldDump read_field(const std::string& path) {
    const std::string stem = strip_suffix(path);
    std::ifstream js(stem + ".json");
    if (!js) throw IoError("cannot open sidecar " + stem + ".json");
    nlohmann::json side;
    try {
        js >> side;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed sidecar: ") + e.what());
    }
    Grid grid(side.at("dim").get<int>(), side.at("n").get<int>(), side.at("L").get<double>());
    FieldDump out{ComplexField(grid), {0.0, 0.0, 0.0}};
    if (side.contains("omega")) out.omega = side.at("omega").get<std::array<double, 3>>();

    std::ifstream bin(stem + ".f64", std::ios::binary);
    if (!bin) throw IoError("cannot open " + stem + ".f64");
    std::vector<std::uint64_t> words(2 * grid.size());
    bin.read(reinterpret_cast<char*>(words.data()),
             static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
    if (bin.gcount() != static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)))
        throw IoError("field dump shorter than its sidecar declares");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.field[i] = cplx(std::bit_cast<double>(to_little(words[2 * i])),
                            std::bit_cast<double>(to_little(words[2 * i + 1])));
    }
    return out;
}

}  // namespace rotogp
