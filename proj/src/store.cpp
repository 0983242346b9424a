#include "novfp/store.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <zlib.h>

#include "novfp/rng.hpp"

namespace novfp::store {

namespace fs = std::filesystem;

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& buf, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[at + i])) << (8 * i);
    return v;
}

template <class T, class U>
void put_values(std::string& buf, std::span<const T> values) {
    for (T v : values) {
        U bits = std::bit_cast<U>(v);
        for (std::size_t i = 0; i < sizeof(U); ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
}

template <class T, class U>
void get_values(const std::string& buf, std::size_t at, std::size_t n, std::vector<T>& out) {
    out.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        U bits = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i)
            bits |= static_cast<U>(static_cast<unsigned char>(buf[at + k * sizeof(U) + i])) << (8 * i);
        out[k] = std::bit_cast<T>(bits);
    }
}

std::uint32_t crc_of(const std::string& buf, std::size_t len) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(len)));
}

void write_blob(const fs::path& path, std::string buf) {
    put_u32(buf, crc_of(buf, buf.size()));
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError(ErrorKind::io, "cannot write " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw StoreError(ErrorKind::io, "write failed: " + path.string());
}

struct Header {
    std::uint32_t version, rows, dim;
};

// Check order: magic, header checksum, version, size, payload checksum. The
// header carries its own CRC so a corrupted row count or dimension is
// reported as corruption rather than as truncation.
Header read_blob(const fs::path& path, std::uint32_t expected_version, std::string& buf) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    buf = ss.str();
    const std::string name = path.string();
    if (buf.size() >= 4 && buf.compare(0, 4, "NVFP") != 0)
        throw StoreError(ErrorKind::bad_magic, name + ": not an NVFP file");
    if (buf.size() < kHeaderBytes) throw StoreError(ErrorKind::truncated, name + ": truncated header");
    if (crc_of(buf, kHeaderBytes - 4) != get_u32(buf, kHeaderBytes - 4))
        throw StoreError(ErrorKind::checksum, name + ": header checksum mismatch");
    Header h{get_u32(buf, 4), get_u32(buf, 8), get_u32(buf, 12)};
    if (h.version != expected_version)
        throw StoreError(ErrorKind::version_mismatch, name + ": format version " + std::to_string(h.version) +
                                                          ", expected " + std::to_string(expected_version));
    const std::size_t elem = h.version == kFloat64Version ? 8 : 4;
    const std::uint64_t expected = kHeaderBytes + std::uint64_t{h.rows} * h.dim * elem + 4;
    if (buf.size() < expected) {
        throw StoreError(ErrorKind::truncated, name + ": truncated payload (" + std::to_string(buf.size()) +
                                                   " of " + std::to_string(expected) + " bytes)");
    }
    if (buf.size() > expected) throw StoreError(ErrorKind::checksum, name + ": trailing bytes after payload");
    if (crc_of(buf, buf.size() - 4) != get_u32(buf, buf.size() - 4))
        throw StoreError(ErrorKind::checksum, name + ": payload checksum mismatch");
    return h;
}

std::string header(std::uint32_t version, std::uint32_t rows, std::uint32_t dim) {
    std::string buf = "NVFP";
    put_u32(buf, version);
    put_u32(buf, rows);
    put_u32(buf, dim);
    put_u32(buf, crc_of(buf, buf.size()));
    return buf;
}

}  // namespace

void write_f32(const fs::path& path, const Float32Matrix& m) {
    if (m.data.size() != std::size_t{m.rows} * m.dim) throw ConfigError("matrix shape does not match data size");
    std::string buf = header(kFloat32Version, m.rows, m.dim);
    buf.reserve(buf.size() + m.data.size() * 4 + 4);
    put_values<float, std::uint32_t>(buf, std::span<const float>(m.data));
    write_blob(path, std::move(buf));
}

Float32Matrix read_f32(const fs::path& path) {
    std::string buf;
    const Header h = read_blob(path, kFloat32Version, buf);
    Float32Matrix m{h.rows, h.dim, {}};
    get_values<float, std::uint32_t>(buf, kHeaderBytes, std::size_t{h.rows} * h.dim, m.data);
    return m;
}

void write_series(const fs::path& path, std::span<const double> values) {
    std::string buf = header(kFloat64Version, static_cast<std::uint32_t>(values.size()), 1);
    put_values<double, std::uint64_t>(buf, values);
    write_blob(path, std::move(buf));
}

std::vector<double> read_series(const fs::path& path) {
    std::string buf;
    const Header h = read_blob(path, kFloat64Version, buf);
    if (h.dim != 1) throw StoreError(ErrorKind::checksum, path.string() + ": series must have dim 1");
    std::vector<double> out;
    get_values<double, std::uint64_t>(buf, kHeaderBytes, h.rows, out);
    return out;
}

void write_index(const fs::path& path, const std::map<std::string, std::string>& entries) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StoreError(ErrorKind::io, "cannot write " + path.string());
    out << nlohmann::json(entries).dump(2) << '\n';
}

std::map<std::string, std::string> read_index(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw StoreError(ErrorKind::io, "index not found: " + path.string());
    try {
        return nlohmann::json::parse(in).get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string safe_name(const std::string& book_id) {
    std::string out;
    for (char c : book_id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    // Disambiguate ids that collapse to the same stem.
    char suffix[20];
    std::snprintf(suffix, sizeof suffix, "-%08x", static_cast<unsigned>(fnv1a64(book_id) & 0xffffffffu));
    return out + suffix;
}

}  // namespace novfp::store
