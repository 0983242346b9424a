#include "novfp/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "novfp/error.hpp"

namespace novfp {

std::string to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::sax_motifs: return "sax";
        case FeatureKind::scalars: return "scalars";
        case FeatureKind::paa_vector: return "paa";
        case FeatureKind::window_motifs: return "windows";
        case FeatureKind::window_slopes: return "window_slopes";
        case FeatureKind::combined: return "combined";
    }
    return "unknown";
}

FeatureKind parse_feature_kind(std::string_view name) {
    for (auto k : {FeatureKind::sax_motifs, FeatureKind::scalars, FeatureKind::paa_vector,
                   FeatureKind::window_motifs, FeatureKind::window_slopes, FeatureKind::combined}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown feature kind: " + std::string(name));
}

SparseDist to_distribution(const MotifCounts& counts) {
    if (counts.total == 0) throw InputError("motif table is empty");
    SparseDist d;
    d.index.reserve(counts.entries.size());
    d.prob.reserve(counts.entries.size());
    const double total = static_cast<double>(counts.total);
    for (const auto& [idx, c] : counts.entries) {
        d.index.push_back(idx);
        d.prob.push_back(static_cast<double>(c) / total);
    }
    return d;
}

namespace {

// Contribution of one coordinate, with both masses already normalized.
inline double jsd_term(double p, double q) {
    const double m = p + q;
    double t = 0.0;
    if (p > 0.0) t += p * std::log2(2.0 * p / m);
    if (q > 0.0) t += q * std::log2(2.0 * q / m);
    return t;
}

inline double finish_jsd(double acc) { return std::clamp(0.5 * acc, 0.0, 1.0); }

double mass(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw InputError("distribution has a negative or non-finite entry");
        s += x;
    }
    if (s <= 0.0) throw InputError("distribution has zero mass");
    return s;
}

}  // namespace

double jsd(const SparseDist& p, const SparseDist& q) {
    const double sp = mass(p.prob), sq = mass(q.prob);
    double acc = 0.0;
    std::size_t i = 0, j = 0;
    while (i < p.size() || j < q.size()) {
        if (j == q.size() || (i < p.size() && p.index[i] < q.index[j])) {
            acc += jsd_term(p.prob[i++] / sp, 0.0);
        } else if (i == p.size() || q.index[j] < p.index[i]) {
            acc += jsd_term(0.0, q.prob[j++] / sq);
        } else {
            acc += jsd_term(p.prob[i++] / sp, q.prob[j++] / sq);
        }
    }
    return finish_jsd(acc);
}

double jsd(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw InputError("distributions differ in length");
    const double sp = mass(p), sq = mass(q);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += jsd_term(p[i] / sp, q[i] / sq);
    return finish_jsd(acc);
}

FeatureSet make_feature_set(FeatureKind kind, FeatureRows rows, std::vector<std::string> dense_labels, int alphabet,
                            std::size_t motif_length, double motif_weight) {
    const std::size_t n = rows.book_ids.size();
    if (rows.author_ids.size() != n) throw InputError("book and author id counts differ");
    const bool want_dense = !is_motif_kind(kind);
    const bool want_dists = is_motif_kind(kind) || kind == FeatureKind::combined;
    if (want_dense && rows.dense.size() != n) throw InputError("dense feature rows missing");
    if (want_dists && rows.motifs.size() != n) throw InputError("motif tables missing");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows.author_ids[a] != rows.author_ids[b]) return rows.author_ids[a] < rows.author_ids[b];
        return rows.book_ids[a] < rows.book_ids[b];
    });
    for (std::size_t i = 1; i < n; ++i) {
        if (rows.book_ids[order[i]] == rows.book_ids[order[i - 1]] &&
            rows.author_ids[order[i]] == rows.author_ids[order[i - 1]])
            throw InputError("duplicate book id: " + rows.book_ids[order[i]]);
    }

    FeatureSet fs;
    fs.kind = kind;
    fs.motif_weight = motif_weight;
    fs.alphabet = alphabet;
    fs.motif_length = motif_length;
    for (std::size_t i : order) {
        fs.book_ids.push_back(std::move(rows.book_ids[i]));
        fs.author_ids.push_back(std::move(rows.author_ids[i]));
    }

    if (want_dense && n > 0) {
        const std::size_t dim = rows.dense[0].size();
        if (dim == 0) throw InputError("dense feature rows are empty");
        for (const auto& r : rows.dense) {
            if (r.size() != dim) throw InputError("dense feature rows differ in length");
            for (double x : r)
                if (!std::isfinite(x)) throw InputError("non-finite feature value");
        }
        fs.dense_dim = dim;
        fs.center.assign(dim, 0.0);
        fs.scale.assign(dim, 0.0);
        // Canonical order keeps the sums bit-identical under input permutation.
        for (std::size_t i : order)
            for (std::size_t d = 0; d < dim; ++d) fs.center[d] += rows.dense[i][d];
        for (double& c : fs.center) c /= static_cast<double>(n);
        for (std::size_t i : order)
            for (std::size_t d = 0; d < dim; ++d)
                fs.scale[d] += (rows.dense[i][d] - fs.center[d]) * (rows.dense[i][d] - fs.center[d]);
        for (double& s : fs.scale) {
            s = std::sqrt(s / static_cast<double>(n));
            if (s < 1e-12) s = 1.0;
        }
        fs.dense.reserve(n * dim);
        for (std::size_t i : order)
            for (std::size_t d = 0; d < dim; ++d)
                fs.dense.push_back((rows.dense[i][d] - fs.center[d]) / fs.scale[d]);
        if (dense_labels.empty())
            for (std::size_t d = 0; d < dim; ++d) dense_labels.push_back("dim" + std::to_string(d));
        if (dense_labels.size() != dim) throw InputError("dense label count differs from dimension");
        fs.dense_labels = std::move(dense_labels);
    }
    if (want_dists) {
        fs.dists.reserve(n);
        for (std::size_t i : order) fs.dists.push_back(to_distribution(rows.motifs[i]));
    }
    return fs;
}

FeatureSet subset(const FeatureSet& fs, std::span<const std::size_t> rows) {
    FeatureSet out;
    out.kind = fs.kind;
    out.dense_dim = fs.dense_dim;
    out.center = fs.center;
    out.scale = fs.scale;
    out.dense_labels = fs.dense_labels;
    out.motif_weight = fs.motif_weight;
    out.alphabet = fs.alphabet;
    out.motif_length = fs.motif_length;
    std::vector<std::size_t> sorted(rows.begin(), rows.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i : sorted) {
        if (i >= fs.size()) throw InputError("subset row out of range");
        out.book_ids.push_back(fs.book_ids[i]);
        out.author_ids.push_back(fs.author_ids[i]);
        if (fs.has_dense()) {
            auto r = fs.row(i);
            out.dense.insert(out.dense.end(), r.begin(), r.end());
        }
        if (fs.has_dists()) out.dists.push_back(fs.dists[i]);
    }
    return out;
}

namespace {

SparseDist mean_distribution(const FeatureSet& fs, std::span<const std::size_t> members) {
    std::vector<std::pair<std::uint64_t, double>> all;
    for (std::size_t m : members) {
        const auto& d = fs.dists[m];
        for (std::size_t i = 0; i < d.size(); ++i) all.emplace_back(d.index[i], d.prob[i]);
    }
    std::sort(all.begin(), all.end());
    SparseDist out;
    double total = 0.0;
    for (const auto& [idx, p] : all) {
        if (!out.index.empty() && out.index.back() == idx) {
            out.prob.back() += p;
        } else {
            out.index.push_back(idx);
            out.prob.push_back(p);
        }
        total += p;
    }
    for (double& p : out.prob) p /= total;
    return out;
}

double sq_dense(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

double sq_sparse(const SparseDist& p, const SparseDist& q) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < p.size() || j < q.size()) {
        double diff;
        if (j == q.size() || (i < p.size() && p.index[i] < q.index[j])) {
            diff = p.prob[i++];
        } else if (i == p.size() || q.index[j] < p.index[i]) {
            diff = q.prob[j++];
        } else {
            diff = p.prob[i++] - q.prob[j++];
        }
        s += diff * diff;
    }
    return s;
}

double combine(const FeatureSet& fs, std::span<const double> da, std::span<const double> db, const SparseDist& pa,
               const SparseDist& pb) {
    if (is_motif_kind(fs.kind)) return jsd(pa, pb);
    double s = sq_dense(da, db);
    if (fs.kind == FeatureKind::combined) s += fs.motif_weight * fs.motif_weight * sq_sparse(pa, pb);
    return std::sqrt(s);
}

const SparseDist kEmpty{};

}  // namespace

Centroid centroid(const FeatureSet& fs, std::span<const std::size_t> members) {
    if (members.empty()) throw InputError("centroid of an empty set");
    Centroid c;
    if (fs.has_dense()) {
        c.dense.assign(fs.dense_dim, 0.0);
        for (std::size_t m : members) {
            auto r = fs.row(m);
            for (std::size_t d = 0; d < fs.dense_dim; ++d) c.dense[d] += r[d];
        }
        for (double& x : c.dense) x /= static_cast<double>(members.size());
    }
    if (fs.has_dists()) c.dist = mean_distribution(fs, members);
    return c;
}

double distance(const FeatureSet& fs, std::size_t book, const Centroid& c) {
    const auto& p = fs.has_dists() ? fs.dists[book] : kEmpty;
    return combine(fs, fs.has_dense() ? fs.row(book) : std::span<const double>{}, c.dense, p, c.dist);
}

double distance(const FeatureSet& fs, const Centroid& a, const Centroid& b) {
    return combine(fs, a.dense, b.dense, a.dist, b.dist);
}

double distance(const FeatureSet& fs, std::size_t a, std::size_t b) {
    std::span<const double> ra, rb;
    if (fs.has_dense()) {
        ra = fs.row(a);
        rb = fs.row(b);
    }
    return combine(fs, ra, rb, fs.has_dists() ? fs.dists[a] : kEmpty, fs.has_dists() ? fs.dists[b] : kEmpty);
}

AuthorIndex::AuthorIndex(const FeatureSet& fs) {
    std::map<std::string, std::vector<std::size_t>, std::less<>> groups;
    for (std::size_t i = 0; i < fs.size(); ++i) groups[fs.author_ids[i]].push_back(i);
    for (auto& [author, rows] : groups) {
        authors.push_back(author);
        books.push_back(std::move(rows));
    }
}

std::size_t AuthorIndex::find(std::string_view author) const {
    auto it = std::lower_bound(authors.begin(), authors.end(), author);
    if (it == authors.end() || *it != author) return authors.size();
    return static_cast<std::size_t>(it - authors.begin());
}

}  // namespace novfp
