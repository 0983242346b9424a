#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "novfp/embed.hpp"

namespace novfp {

struct NoveltyCurve {
    std::string book_id;
    std::vector<double> values;  // length T-1, each in [0, 2]
};

/// values[i] = 1 - <e_i, e_{i+1}> on unit rows, clamped to [0, 2].
/// Rows are re-normalized defensively; a zero row is an InputError.
NoveltyCurve novelty_curve(const EmbeddingMatrix& embeddings);

namespace dynamics_flag {
inline constexpr unsigned flat_net_displacement = 1u << 0;
inline constexpr unsigned constant_curve = 1u << 1;
inline constexpr unsigned too_short_for_speed = 1u << 2;
inline constexpr unsigned too_short_for_reversals = 1u << 3;
}  // namespace dynamics_flag

/// The seven book-level scalar features of a novelty curve.
///
/// Features that need a longer curve than supplied are left empty and the
/// matching too_short flag is set.
struct ScalarDynamics {
    double mean_novelty = 0.0;
    std::optional<double> speed;
    std::optional<double> volume;
    std::optional<double> circuitousness;
    std::optional<long> reversal_count;
    double novelty_std = 0.0;
    std::optional<double> trend_irregularity;
    unsigned flags = 0;

    bool has(unsigned flag) const noexcept { return (flags & flag) != 0; }
    bool complete() const noexcept {
        return speed && volume && circuitousness && reversal_count && trend_irregularity;
    }
    /// Values in column order; throws InputError if incomplete.
    std::array<double, 7> as_array() const;
};

inline constexpr std::array<std::string_view, 7> kScalarColumns = {
    "mean_novelty", "speed", "volume", "circuitousness", "reversal_count", "novelty_std", "trend_irregularity"};

/// Net displacement below this is treated as zero for circuitousness.
inline constexpr double kNetDisplacementFloor = 1e-9;
inline constexpr double kCircuitousnessCap = 1e12;

ScalarDynamics scalar_dynamics(std::span<const double> curve);

/// Flag names, e.g. "flat_net_displacement".
std::vector<std::string> flag_names(unsigned flags);

/// CSV with header book_id + kScalarColumns + flags. Missing values are empty cells.
std::string scalars_csv(std::span<const std::string> book_ids, std::span<const ScalarDynamics> rows);
/// {"columns": [...], "books": [{"book_id":..., "values": {...}, "flags": [...]}]}
std::string scalars_json(std::span<const std::string> book_ids, std::span<const ScalarDynamics> rows);

}  // namespace novfp
