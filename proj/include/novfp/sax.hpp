#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace novfp {

/// SAX parameters. `window` absent means whole-book mode.
struct SaxConfig {
    std::size_t paa_segments = 16;  // w
    int alphabet = 5;               // alpha, in [2, 20]
    std::size_t motif_length = 4;   // k, in [1, w]
    std::optional<std::size_t> window;
    std::optional<std::size_t> stride;  // defaults to window / 2

    /// Throws ConfigError on out-of-range or conflicting values.
    void validate() const;
    std::size_t effective_stride() const;
    /// alpha^k, the size of the motif index space.
    std::uint64_t motif_space() const;

    bool operator==(const SaxConfig&) const = default;
};

void to_json(nlohmann::json& j, const SaxConfig& c);
void from_json(const nlohmann::json& j, SaxConfig& c);

/// Piecewise aggregate approximation with fractional point weights.
///
/// Segment j covers [j L / w, (j+1) L / w) of the series domain; each point
/// contributes in proportion to its overlap. Equals plain segment means when
/// w divides L and upsamples when w > L.
std::vector<double> paa(std::span<const double> series, std::size_t w);

struct ZNormResult {
    std::vector<double> values;
    bool degenerate = false;
};

/// Zero mean, unit population std. Spread below 1e-12 gives all zeros and
/// degenerate = true.
ZNormResult znorm(std::span<const double> v);

/// Standard-normal quantiles at j / alpha for j = 1 .. alpha-1.
std::vector<double> breakpoints(int alphabet);

/// Inverse standard normal CDF, accurate to about 1e-15 on (0, 1).
double normal_quantile(double p);

/// symbol = number of breakpoints <= value (ties go to the upper bin).
std::vector<std::uint8_t> discretize(std::span<const double> z, int alphabet);

/// Symbols rendered as 'a', 'b', ...
std::string render_symbols(std::span<const std::uint8_t> symbols);

/// Sparse motif histogram, sorted by index.
struct MotifCounts {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;  // (index, count)
    std::uint64_t total = 0;

    bool operator==(const MotifCounts&) const = default;
};

/// All overlapping k-grams, indexed as base-alpha integers (first symbol most
/// significant). Throws InputError when fewer than k symbols are given.
MotifCounts extract_motifs(std::span<const std::uint8_t> symbols, int alphabet, std::size_t k);

/// Add `other` into `into`.
void merge_counts(MotifCounts& into, const MotifCounts& other);

struct SaxProfile {
    std::string book_id;
    SaxConfig config;
    std::vector<double> paa;             // whole-book mode only
    std::vector<std::uint8_t> symbols;   // whole-book mode only
    MotifCounts motifs;
    bool degenerate = false;             // window mode: every window degenerate
    std::size_t window_count = 0;
    std::size_t degenerate_windows = 0;

    bool operator==(const SaxProfile&) const = default;
};

/// PAA -> z-normalization -> discretization -> k-grams over the whole series.
SaxProfile sax_string(std::span<const double> series, const SaxConfig& config);

/// Window start offsets: 0, s, 2s, ... while offset + W <= length, plus a
/// tail window at length - W when the last one does not reach the end.
std::vector<std::size_t> window_offsets(std::size_t length, std::size_t window, std::size_t stride);

/// Per-window SAX (each window z-normalized on its own), motif counts summed
/// across windows. Degenerate windows contribute their all-middle motifs
/// unless `drop_degenerate` is set; they are tallied either way.
SaxProfile sliding_window_profile(std::span<const double> curve, const SaxConfig& config,
                                  bool drop_degenerate = false);

/// Least-squares slope of every window, for the window-level scalar baseline.
std::vector<double> window_slopes(std::span<const double> curve, std::size_t window, std::size_t stride);

/// {book_id, config, paa, sax, motifs: {"index": count}, degenerate, window_count, degenerate_windows}
nlohmann::json profile_to_json(const SaxProfile& p);
SaxProfile profile_from_json(const nlohmann::json& j);

}  // namespace novfp
