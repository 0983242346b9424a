#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "novfp/error.hpp"

namespace novfp {

/// Binary artifact layout (all little-endian):
///
///   "NVFP" | version u32 | rows u32 | dim u32 | header crc32 u32 | payload | crc32 u32
///
/// Version 1 carries float32 payloads (embeddings), version 2 float64
/// payloads (novelty curves, dim = 1). The header CRC-32 covers the first
/// 16 bytes; the trailing CRC-32 covers everything before it.
namespace store {

inline constexpr std::uint32_t kFloat32Version = 1;
inline constexpr std::uint32_t kFloat64Version = 2;
inline constexpr std::size_t kHeaderBytes = 20;

enum class ErrorKind { bad_magic, version_mismatch, truncated, checksum, io };

class StoreError : public InputError {
public:
    StoreError(ErrorKind kind, const std::string& what) : InputError(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct Float32Matrix {
    std::uint32_t rows = 0;
    std::uint32_t dim = 0;
    std::vector<float> data;  // row-major

    bool operator==(const Float32Matrix&) const = default;
};

void write_f32(const std::filesystem::path& path, const Float32Matrix& m);
Float32Matrix read_f32(const std::filesystem::path& path);

void write_series(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_series(const std::filesystem::path& path);

/// Corpus-level JSON index: book_id -> file path relative to the index.
void write_index(const std::filesystem::path& path, const std::map<std::string, std::string>& entries);
std::map<std::string, std::string> read_index(const std::filesystem::path& path);

/// File-system-safe stem for a book id.
std::string safe_name(const std::string& book_id);

}  // namespace store
}  // namespace novfp
