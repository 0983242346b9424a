#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace novfp {

/// 64-bit FNV-1a digest of a byte string.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// SplitMix64 finalizer; a bijective avalanche mix.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derive an independent stream seed from a master seed and a list of
/// identifiers. Stable across platforms and independent of call order, so
/// parallel schedules never change which stream a task receives.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> keys) noexcept;

/// Seeded generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// The standard distributions are implementation-defined, so bounded
/// integers and normals are drawn here directly to keep results
/// bit-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal deviate (Box-Muller, no cached state).
    double normal();

    /// Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    /// k distinct indices from [0, n), in draw order.
    std::vector<std::size_t> sample(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
};

}  // namespace novfp
