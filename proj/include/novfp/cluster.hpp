#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "novfp/curve_corpus.hpp"
#include "novfp/experiments.hpp"

namespace novfp {

using Points = std::vector<std::vector<double>>;

struct KMeansOptions {
    std::size_t max_iter = 300;
    double tol = 1e-6;  // stop when no centroid moves farther than this
};

struct ClusterModel {
    std::size_t k = 0;
    Points centroids;
    std::vector<std::size_t> assignments;  // per input point
    std::vector<std::string> book_ids;     // parallel to assignments when built from a corpus
    std::vector<std::size_t> counts;
    double silhouette = 0.0;
    std::vector<double> objective_trace;   // sum of squared distances after each assignment step
    std::size_t iterations = 0;

    bool operator==(const ClusterModel&) const = default;
};

/// k-means++ seeding then Lloyd iterations. Empty clusters are re-seeded at
/// the point farthest from its centroid. Throws InputError when there are
/// fewer distinct points than k. The silhouette field is left at 0.
ClusterModel kmeans(const Points& points, std::size_t k, std::uint64_t seed, const KMeansOptions& opts = {},
                    unsigned threads = 1);

/// Mean silhouette with Euclidean distances; singleton clusters contribute 0.
/// Above `full_limit` points, a seeded sample of `sample_size` points is used.
double silhouette_score(const Points& points, const std::vector<std::size_t>& assignments, std::uint64_t seed = 0,
                        unsigned threads = 1, std::size_t full_limit = 20000, std::size_t sample_size = 2000);

/// kmeans for every k in [k_min, k_max] (capped by the number of distinct
/// points); keeps the best silhouette, ties to the smaller k.
ClusterModel select_k(const Points& points, std::size_t k_min, std::size_t k_max, std::uint64_t seed,
                      const KMeansOptions& opts = {}, unsigned threads = 1);

/// Raw PAA profiles of every curve, in corpus order.
Points paa_profiles(const CurveCorpus& corpus, std::size_t segments, unsigned threads = 1);

struct ClusterFingerprints {
    std::size_t index = 0;
    std::size_t n_books = 0;
    std::size_t n_qualifying_authors = 0;
    double pct_significant = 0.0;
    bool skipped = false;
    std::string diagnostic;
    std::vector<double> centroid;
    std::vector<AuthorFingerprint> authors;
};

struct ClusterReport {
    std::size_t k = 0;
    double silhouette = 0.0;
    std::vector<ClusterFingerprints> clusters;

    /// Significant share over every author fingerprinted in any cluster.
    double pooled_pct_significant() const;
    nlohmann::json to_json() const;
};

/// Rerun fingerprints inside each cluster. Features are standardized over the
/// whole corpus; only authors with at least min_books books in a cluster are
/// tested, and their null draws come from books in the same cluster.
ClusterReport within_cluster_fingerprints(const ClusterModel& model, const CurveCorpus& corpus,
                                          const ExperimentConfig& config, std::size_t min_books = 3,
                                          unsigned threads = 1);

}  // namespace novfp
