#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "novfp/sax.hpp"

namespace novfp {

enum class FeatureKind { sax_motifs, scalars, paa_vector, window_motifs, window_slopes, combined };

/// CLI spelling: sax, scalars, paa, windows, window_slopes, combined.
std::string to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view name);

inline bool is_motif_kind(FeatureKind k) {
    return k == FeatureKind::sax_motifs || k == FeatureKind::window_motifs;
}

/// Sparse probability distribution, sorted by index, summing to 1.
struct SparseDist {
    std::vector<std::uint64_t> index;
    std::vector<double> prob;

    std::size_t size() const noexcept { return index.size(); }
    bool operator==(const SparseDist&) const = default;
};

SparseDist to_distribution(const MotifCounts& counts);

/// Base-2 Jensen-Shannon divergence in [0, 1]. Inputs are renormalized;
/// a distribution with zero mass is an InputError.
double jsd(const SparseDist& p, const SparseDist& q);
double jsd(std::span<const double> p, std::span<const double> q);

/// Per-book feature vectors of one kind, in canonical (author_id, book_id)
/// order so results never depend on input order.
///
/// Dense kinds store corpus-standardized rows together with the
/// standardization parameters. Motif kinds store normalized distributions.
/// The combined kind stores both; its motif block is scaled by motif_weight.
struct FeatureSet {
    FeatureKind kind = FeatureKind::scalars;
    std::vector<std::string> book_ids;
    std::vector<std::string> author_ids;

    std::size_t dense_dim = 0;
    std::vector<double> dense;   // standardized, row-major
    std::vector<double> center;  // per-dimension corpus mean
    std::vector<double> scale;   // per-dimension corpus std (1 where constant)
    std::vector<std::string> dense_labels;

    std::vector<SparseDist> dists;
    double motif_weight = 1.0;
    int alphabet = 0;
    std::size_t motif_length = 0;

    std::size_t size() const noexcept { return book_ids.size(); }
    bool has_dense() const noexcept { return dense_dim > 0; }
    bool has_dists() const noexcept { return !dists.empty(); }
    std::span<const double> row(std::size_t i) const { return {dense.data() + i * dense_dim, dense_dim}; }
};

/// Input rows for a feature set; ids need not be sorted.
struct FeatureRows {
    std::vector<std::string> book_ids;
    std::vector<std::string> author_ids;
    std::vector<std::vector<double>> dense;  // raw values, empty for motif kinds
    std::vector<MotifCounts> motifs;         // empty for dense kinds
};

/// Standardizes dense rows (population std; constant dimensions get scale 1)
/// and normalizes motif counts. Throws InputError on ragged rows or a motif
/// table with zero total.
FeatureSet make_feature_set(FeatureKind kind, FeatureRows rows, std::vector<std::string> dense_labels = {},
                            int alphabet = 0, std::size_t motif_length = 0, double motif_weight = 1.0);

/// Restrict to the given rows, keeping the corpus-level standardization.
FeatureSet subset(const FeatureSet& fs, std::span<const std::size_t> rows);

/// Mean of member vectors. For the motif part this is the mean of the
/// distributions, renormalized.
struct Centroid {
    std::vector<double> dense;
    SparseDist dist;
};

Centroid centroid(const FeatureSet& fs, std::span<const std::size_t> members);

/// JSD for motif kinds; Euclidean on standardized coordinates for dense
/// kinds; for the combined kind, Euclidean over the dense block concatenated
/// with motif_weight * probabilities.
double distance(const FeatureSet& fs, std::size_t book, const Centroid& c);
double distance(const FeatureSet& fs, const Centroid& a, const Centroid& b);
double distance(const FeatureSet& fs, std::size_t a, std::size_t b);

/// Books grouped by author, authors sorted.
struct AuthorIndex {
    std::vector<std::string> authors;
    std::vector<std::vector<std::size_t>> books;

    explicit AuthorIndex(const FeatureSet& fs);
    /// Position of an author, or authors.size() if absent.
    std::size_t find(std::string_view author) const;
};

}  // namespace novfp
