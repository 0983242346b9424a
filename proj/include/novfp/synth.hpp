#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "novfp/curve_corpus.hpp"

namespace novfp {

enum class Archetype { null_model, intensity, rhythm, genre, genre_author };

std::string to_string(Archetype a);
Archetype parse_archetype(std::string_view name);

/// Generator settings. Defaults reproduce the shipped synthetic corpora.
struct SynthParams {
    // shared background
    double base_level = 0.35;
    double level_sd = 0.08;
    double ar_coefficient = 0.3;

    // intensity: per-author level, noise sd (log-uniform) and AR coefficient
    double level_lo = 0.30, level_hi = 0.40;
    double sd_lo = 0.02, sd_hi = 0.30;
    double ar_lo = -0.4, ar_hi = 0.8;

    // rhythm: per-author template
    std::size_t template_min = 8, template_max = 16;
    std::size_t template_stretch = 1;  // each template value repeated this many times
    double template_amplitude = 0.32;
    std::size_t template_gap = 2;      // spacing between injections, before jitter

    // genre: groups by author position
    std::size_t groups = 4;
    double group_level_lo = 0.2, group_level_hi = 0.8;
    double group_arc = 0.0;  // alternating-sign half-sine per group; off by default

    // genre_author: author-level noise sd and AR coefficient within a group
    double author_sd_lo = 0.03, author_sd_hi = 0.12;
    double author_ar_lo = 0.0, author_ar_hi = 0.6;
};

struct AuthorProfile {
    std::string author_id;
    double base_level = 0.35;
    double level_sd = 0.08;
    double ar_coefficient = 0.3;
    std::vector<double> rhythm_template;  // additive values, already scaled
    std::size_t template_stretch = 1;
    std::size_t template_gap = 2;
    double arc_amplitude = 0.0;  // amplitude of a half-sine over the book
    double strength = 0.0;
    int group = -1;

    bool operator==(const AuthorProfile&) const = default;
};

/// Author position within a stratified draw of `count` authors. Each
/// parameter axis is split into `count` strata assigned by a seeded
/// permutation, so values are spread evenly over their ranges.
struct Stratum {
    std::size_t index = 0;
    std::size_t count = 1;
};

AuthorProfile background_profile(const SynthParams& params = {});

/// Without a stratum, author parameters are drawn from a stream keyed by
/// (seed, author_id). Throws ConfigError when strength is outside [0, 1].
AuthorProfile gen_profile(std::string_view author_id, Archetype archetype, double strength, std::uint64_t seed,
                          const SynthParams& params = {}, std::optional<Stratum> stratum = std::nullopt);

/// AR(1) around the base level (stationary start), plus the optional arc and
/// the rhythm template at jittered periodic offsets, clamped to [0, 2].
std::vector<double> gen_curve(const AuthorProfile& profile, std::size_t length, std::uint64_t seed);

struct SynthSpec {
    std::size_t n_authors = 200;
    std::size_t books_per_author = 6;
    std::size_t min_length = 150;  // curve points
    std::size_t max_length = 400;
    Archetype archetype = Archetype::null_model;
    double strength = 1.0;
    std::uint64_t seed = 0;
    SynthParams params;
};

struct SynthCorpus {
    CurveCorpus corpus;
    std::vector<AuthorProfile> profiles;
};

/// Author ids "author-000", book ids "author-000/book-00". Each book has
/// curve length + 1 paragraphs and synthetic = true.
SynthCorpus gen_corpus(const SynthSpec& spec, unsigned threads = 1);

/// Write `<dir>/<author>/<book>.txt` with one deterministic filler paragraph
/// per manifest paragraph, for exercising ingest and embed end to end.
/// The texts carry no information about the curves.
void write_synthetic_texts(const std::filesystem::path& dir, const CurveCorpus& corpus, std::uint64_t seed);

}  // namespace novfp
