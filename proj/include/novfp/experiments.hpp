#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "novfp/curve_corpus.hpp"
#include "novfp/features.hpp"
#include "novfp/fingerprint.hpp"
#include "novfp/sax.hpp"

namespace novfp {

/// Everything that determines an experiment's results. Thread count is
/// deliberately absent: results never depend on it.
struct ExperimentConfig {
    FeatureKind kind = FeatureKind::sax_motifs;
    SaxConfig sax;                     // whole-book SAX, also the PAA width for paa/combined
    std::size_t window = 20;           // window kinds
    std::optional<std::size_t> stride; // window kinds; default window / 2
    std::size_t window_paa = 8;
    bool drop_degenerate_windows = false;
    double combined_weight = 1.0;
    FingerprintMethod method = FingerprintMethod::leave_one_out;
    std::size_t n_null = 200;
    std::size_t n_repeats = 50;
    std::size_t topk = 5;
    std::size_t min_books = 5;
    std::size_t min_paragraphs = 2;
    std::uint64_t seed = 0;
    bool run_fingerprint = true;
    bool run_attribution = true;

    /// SaxConfig used for window kinds.
    SaxConfig window_sax() const;
    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);

/// Per-book features of one kind over a curve corpus. Books whose curves are
/// too short for the kind are an InputError; filter first.
FeatureSet build_features(const CurveCorpus& corpus, const ExperimentConfig& config, unsigned threads);

/// Shortest curve a configuration can use.
std::size_t required_curve_length(const ExperimentConfig& config);

struct ExperimentResult {
    std::string experiment;
    std::string label;  // configuration tag, e.g. "w64_k4"
    ExperimentConfig config;
    bool skipped = false;
    std::string diagnostic;
    std::size_t n_books = 0;
    std::size_t n_authors = 0;
    std::vector<AuthorFingerprint> authors;
    FingerprintSummary summary;
    std::optional<Attribution> attribution;

    nlohmann::json to_json() const;
    std::string csv() const;
    double top1() const { return attribution ? attribution->top_k(1) : 0.0; }
    double times_chance() const;
};

/// Filter the corpus to the configuration's minima, build features, then
/// fingerprint and attribute. A corpus that fails the minima gives a
/// skipped result with a diagnostic.
ExperimentResult run_experiment(const CurveCorpus& corpus, const std::string& experiment, const std::string& label,
                                const ExperimentConfig& config, unsigned threads);

/// Single configuration with base.kind.
std::vector<ExperimentResult> run_baseline(const CurveCorpus& corpus, const ExperimentConfig& base, unsigned threads);

/// (w, k) grid; every configuration runs on books long enough for the largest w.
inline const std::vector<std::pair<std::size_t, std::size_t>> kResolutionGrid = {
    {16, 4}, {32, 4}, {64, 4}, {64, 5}, {64, 6}};
std::vector<ExperimentResult> run_resolution_sweep(
    const CurveCorpus& corpus, const ExperimentConfig& base, unsigned threads,
    const std::vector<std::pair<std::size_t, std::size_t>>& grid = kResolutionGrid);

/// sax, scalars, paa and combined on the same corpus.
std::vector<ExperimentResult> run_multifeature(const CurveCorpus& corpus, const ExperimentConfig& base,
                                               unsigned threads);

/// Window motifs for each window size, split-half fingerprints, plus the
/// window-slope baseline attribution; all on books long enough for the
/// largest window.
inline const std::vector<std::size_t> kWindowGrid = {20, 40, 80};
std::vector<ExperimentResult> run_windows(const CurveCorpus& corpus, const ExperimentConfig& base, unsigned threads,
                                          const std::vector<std::size_t>& windows = kWindowGrid);

}  // namespace novfp
