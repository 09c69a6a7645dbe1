#include "paralog/field_io.hpp"

#include <json.hpp>

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace paralog {

namespace {

using nlohmann::json;

void commit(const std::string& path, const std::string& payload) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw DomainError("cannot open '" + tmp + "' for writing");
        os.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        if (!os) throw DomainError("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DomainError("cannot rename into '" + path + "': " + ec.message());
    }
}

void put_le(std::string& out, double x) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.append(buf, 8);
}

double get_le(const char* p) {
    std::uint64_t bits;
    std::memcpy(&bits, p, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_text(const std::string& path, const std::string& contents) { commit(path, contents); }

void write_field(const std::string& path, const Field& f, const std::string& manifest_json) {
    if (!f.finite()) throw DomainError("field: refusing to write non-finite values");
    const Grid& g = f.grid;
    json h;
    h["version"] = kFieldFormatVersion;
    h["n"] = g.n();
    h["shape"] = g.shape();
    std::vector<double> box(g.n()), origin(g.axes());
    for (int a = 0; a < g.n(); ++a) box[a] = g.length(a);
    for (int a = 0; a < g.axes(); ++a) origin[a] = g.origin(a);
    h["box_len"] = box;
    h["time_len"] = g.time_len();
    h["origin"] = origin;
    h["manifest"] = manifest_json.empty() ? json::object() : json::parse(manifest_json);
    std::string out = h.dump();
    out.push_back('\n');
    out.reserve(out.size() + 8 * static_cast<std::size_t>(f.values.size()));
    for (Index i = 0; i < f.values.size(); ++i) put_le(out, f.values[i]);
    commit(path, out);
}

FieldFile read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DomainError("cannot open field file '" + path + "'");
    std::string header;
    if (!std::getline(is, header)) throw DomainError("field file '" + path + "' has no header line");
    json h;
    try {
        h = json::parse(header);
    } catch (const json::exception& e) {
        throw DomainError("field file '" + path + "': malformed header: " + e.what());
    }
    try {
        if (h.at("version").get<int>() != kFieldFormatVersion) throw DomainError("field file '" + path + "': unsupported version");
        const int n = h.at("n").get<int>();
        auto shape = h.at("shape").get<std::vector<Index>>();
        auto box = h.at("box_len").get<std::vector<double>>();
        const double T = h.at("time_len").get<double>();
        std::vector<double> lengths = box;
        lengths.push_back(T);
        std::vector<double> origin;
        if (h.contains("origin")) origin = h["origin"].get<std::vector<double>>();
        Grid g(n, lengths, shape, origin);
        std::string body((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
        if (body.size() != 8 * static_cast<std::size_t>(g.size()))
            throw DomainError("field file '" + path + "': payload has " + std::to_string(body.size()) +
                              " bytes, expected " + std::to_string(8 * g.size()));
        Field f(g);
        for (Index i = 0; i < g.size(); ++i) f.values[i] = get_le(body.data() + 8 * i);
        if (!f.finite()) throw DomainError("field file '" + path + "': non-finite values");
        FieldFile out{std::move(f), h.contains("manifest") ? h["manifest"].dump() : "{}"};
        return out;
    } catch (const json::exception& e) {
        throw DomainError("field file '" + path + "': " + e.what());
    }
}

}  // namespace paralog
