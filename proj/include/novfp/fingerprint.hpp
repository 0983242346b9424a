#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "novfp/features.hpp"
#include "novfp/rng.hpp"

namespace novfp {

enum class FingerprintMethod { leave_one_out, split_half };

std::string to_string(FingerprintMethod m);
FingerprintMethod parse_fingerprint_method(std::string_view name);

struct FingerprintOptions {
    std::size_t n_null = 200;
    std::size_t n_repeats = 50;  // split-half partitions per statistic
    std::uint64_t seed = 0;
    std::string stream = "fingerprint";  // keys the RNG together with the author id
    double alpha = 0.05;
};

struct AuthorFingerprint {
    std::string author_id;
    std::size_t n_books = 0;
    double intra_mean = 0.0;  // observed statistic
    double null_mean = 0.0;
    double null_std = 0.0;
    double effect = 0.0;      // (null_mean - intra_mean) / null_std
    double p_value = 1.0;
    bool significant = false;
    bool null_degenerate = false;  // null spread below 1e-12; effect forced to 0
};

/// Leave-one-out fingerprint of one author.
///
/// The statistic is the mean distance from each of the author's books to the
/// centroid of the author's other books. Each null draw forms a pseudo-author
/// from m books by m distinct other authors (pooled sampling when fewer
/// authors exist) and computes the same statistic. The p-value is
/// (1 + #{null <= observed}) / (1 + n_null); the null mean and spread are
/// taken over the per-book distances of all draws.
AuthorFingerprint loo_fingerprint(const FeatureSet& fs, const AuthorIndex& index, std::string_view author,
                                  const FingerprintOptions& opts);

/// Split-half fingerprint: mean distance between the centroids of two random
/// halves of the author's books over n_repeats partitions, against the same
/// statistic on pseudo-authors. Odd counts put the extra book in the first half.
AuthorFingerprint split_half_fingerprint(const FeatureSet& fs, const AuthorIndex& index, std::string_view author,
                                         const FingerprintOptions& opts);

AuthorFingerprint fingerprint(const FeatureSet& fs, const AuthorIndex& index, std::string_view author,
                              FingerprintMethod method, const FingerprintOptions& opts);

/// Every author with at least min_books books (never fewer than 2, or 4 for
/// split-half), in author order.
std::vector<AuthorFingerprint> fingerprint_all(const FeatureSet& fs, FingerprintMethod method,
                                               const FingerprintOptions& opts, std::size_t min_books,
                                               unsigned threads);

/// Draw one pseudo-author of m books, none by `exclude`.
std::vector<std::size_t> draw_pseudo_author(Rng& rng, const AuthorIndex& index, std::size_t exclude, std::size_t m);

struct Attribution {
    std::vector<std::string> book_ids;
    std::vector<std::string> author_ids;
    std::vector<std::size_t> ranks;  // 1-based rank of the true author
    std::size_t n_candidates = 0;
    std::vector<std::string> excluded_authors;  // single-book authors

    double top_k(std::size_t k) const;
    double chance(std::size_t k) const;
};

/// Rank every candidate author's centroid by distance to each book; the
/// book's own author is represented by the centroid of its other books.
/// Ties go to the lexicographically smaller author id.
Attribution attribute_all(const FeatureSet& fs, unsigned threads);

struct FisherRatios {
    std::vector<std::string> labels;
    std::vector<double> ratio;      // between-author / within-author variance
    std::vector<bool> infinite;     // within-author variance below 1e-12
};

/// Per-dimension Fisher ratios over authors with at least two books.
/// Motif kinds use one dimension per motif seen in the corpus.
FisherRatios fisher_ratios(const FeatureSet& fs);

/// Aggregate over per-author results.
struct FingerprintSummary {
    std::size_t n_authors = 0;
    double pct_significant = 0.0;
    double mean_effect = 0.0;
};

FingerprintSummary summarize(const std::vector<AuthorFingerprint>& results);

nlohmann::json to_json(const AuthorFingerprint& f);
std::string fingerprints_csv(const std::vector<AuthorFingerprint>& rows);

}  // namespace novfp
