#include "novfp/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "novfp/error.hpp"
#include "novfp/parallel.hpp"
#include "novfp/rng.hpp"

namespace novfp {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

std::size_t count_distinct(const Points& points) {
    Points copy = points;
    std::sort(copy.begin(), copy.end());
    return static_cast<std::size_t>(std::unique(copy.begin(), copy.end()) - copy.begin());
}

void check_points(const Points& points) {
    if (points.empty()) throw InputError("no points to cluster");
    const std::size_t dim = points[0].size();
    if (dim == 0) throw InputError("points have no dimensions");
    for (const auto& p : points) {
        if (p.size() != dim) throw InputError("points differ in dimension");
        for (double x : p)
            if (!std::isfinite(x)) throw InputError("non-finite coordinate");
    }
}

}  // namespace

ClusterModel kmeans(const Points& points, std::size_t k, std::uint64_t seed, const KMeansOptions& opts,
                    unsigned threads) {
    check_points(points);
    if (k == 0) throw ConfigError("k must be positive");
    if (count_distinct(points) < k) throw InputError("fewer distinct points than k = " + std::to_string(k));
    const std::size_t n = points.size(), dim = points[0].size();
    Rng rng(seed);

    ClusterModel m;
    m.k = k;
    m.centroids.push_back(points[rng.below(n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points[i], m.centroids[0]);
    while (m.centroids.size() < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        double target = rng.uniform() * total;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            pick = i;
            target -= d2[i];
            if (target < 0.0) break;
        }
        m.centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(points[i], m.centroids.back()));
    }

    m.assignments.assign(n, 0);
    std::vector<double> best(n);
    for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
        parallel_for(n, threads, [&](std::size_t i) {
            std::size_t arg = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_dist(points[i], m.centroids[c]);
                if (d < bd) {
                    bd = d;
                    arg = c;
                }
            }
            m.assignments[i] = arg;
            best[i] = bd;
        });
        double objective = 0.0;
        for (double b : best) objective += b;
        m.objective_trace.push_back(objective);
        m.iterations = iter + 1;

        Points next(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = next[m.assignments[i]];
            for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
            ++counts[m.assignments[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                const auto far = std::max_element(best.begin(), best.end()) - best.begin();
                next[c] = points[static_cast<std::size_t>(far)];
                best[static_cast<std::size_t>(far)] = 0.0;
            } else {
                for (double& x : next[c]) x /= static_cast<double>(counts[c]);
            }
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, std::sqrt(sq_dist(next[c], m.centroids[c])));
        m.centroids = std::move(next);
        if (shift < opts.tol) break;
    }
    // Final assignment against the settled centroids.
    parallel_for(n, threads, [&](std::size_t i) {
        std::size_t arg = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            const double d = sq_dist(points[i], m.centroids[c]);
            if (d < bd) {
                bd = d;
                arg = c;
            }
        }
        m.assignments[i] = arg;
        best[i] = bd;
    });
    double objective = 0.0;
    for (double b : best) objective += b;
    m.objective_trace.push_back(objective);
    m.counts.assign(k, 0);
    for (std::size_t a : m.assignments) ++m.counts[a];
    return m;
}

double silhouette_score(const Points& points, const std::vector<std::size_t>& assignments, std::uint64_t seed,
                        unsigned threads, std::size_t full_limit, std::size_t sample_size) {
    check_points(points);
    if (assignments.size() != points.size()) throw InputError("assignment count differs from point count");
    std::vector<std::size_t> rows(points.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    if (points.size() > full_limit) {
        Rng rng(seed);
        rows = rng.sample(points.size(), std::min(sample_size, points.size()));
        std::sort(rows.begin(), rows.end());
    }
    std::size_t k = 0;
    for (std::size_t r : rows) k = std::max(k, assignments[r] + 1);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t r : rows) ++sizes[assignments[r]];
    const auto used = std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; });
    if (used < 2) throw InputError("silhouette needs at least two non-empty clusters");

    std::vector<double> s(rows.size(), 0.0);
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const std::size_t own = assignments[rows[i]];
        if (sizes[own] < 2) return;
        std::vector<double> sums(k, 0.0);
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j == i) continue;
            sums[assignments[rows[j]]] += std::sqrt(sq_dist(points[rows[i]], points[rows[j]]));
        }
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c)
            if (c != own && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        const double denom = std::max(a, b);
        s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    });
    double total = 0.0;
    for (double v : s) total += v;
    return total / static_cast<double>(s.size());
}

ClusterModel select_k(const Points& points, std::size_t k_min, std::size_t k_max, std::uint64_t seed,
                      const KMeansOptions& opts, unsigned threads) {
    check_points(points);
    if (k_min < 2 || k_max < k_min) throw ConfigError("invalid k range");
    const std::size_t distinct = count_distinct(points);
    if (distinct < 2) throw InputError("need at least two distinct points to select k");
    const std::size_t hi = std::min({k_max, distinct, points.size() - 1});
    if (hi < k_min) throw InputError("too few distinct points for the k range");

    std::vector<ClusterModel> models(hi - k_min + 1);
    parallel_for(models.size(), threads, [&](std::size_t i) {
        const std::size_t k = k_min + i;
        models[i] = kmeans(points, k, derive_seed(seed, {"kmeans", std::to_string(k)}), opts, 1);
        models[i].silhouette =
            silhouette_score(points, models[i].assignments, derive_seed(seed, {"silhouette", std::to_string(k)}));
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < models.size(); ++i)
        if (models[i].silhouette > models[best].silhouette) best = i;
    return std::move(models[best]);
}

Points paa_profiles(const CurveCorpus& corpus, std::size_t segments, unsigned threads) {
    Points out(corpus.size());
    parallel_for(corpus.size(), threads, [&](std::size_t i) { out[i] = paa(corpus.curves[i], segments); });
    return out;
}

double ClusterReport::pooled_pct_significant() const {
    std::size_t n = 0, sig = 0;
    for (const auto& c : clusters) {
        for (const auto& a : c.authors) {
            ++n;
            sig += a.significant ? 1 : 0;
        }
    }
    return n == 0 ? 0.0 : 100.0 * static_cast<double>(sig) / static_cast<double>(n);
}

nlohmann::json ClusterReport::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["silhouette"] = silhouette;
    j["pooled_pct_significant"] = pooled_pct_significant();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : clusters) {
        nlohmann::json e{{"index", c.index},
                         {"n_books", c.n_books},
                         {"n_qualifying_authors", c.n_qualifying_authors},
                         {"pct_significant", c.pct_significant},
                         {"centroid", c.centroid},
                         {"skipped", c.skipped}};
        if (!c.diagnostic.empty()) e["diagnostic"] = c.diagnostic;
        nlohmann::json authors = nlohmann::json::array();
        for (const auto& a : c.authors) authors.push_back(novfp::to_json(a));
        e["authors"] = authors;
        arr.push_back(e);
    }
    j["clusters"] = arr;
    return j;
}

ClusterReport within_cluster_fingerprints(const ClusterModel& model, const CurveCorpus& corpus,
                                          const ExperimentConfig& config, std::size_t min_books, unsigned threads) {
    if (model.assignments.size() != corpus.size()) throw InputError("cluster model does not match the corpus");
    if (!model.book_ids.empty()) {
        for (std::size_t i = 0; i < corpus.size(); ++i)
            if (model.book_ids[i] != corpus.books[i].book_id)
                throw InputError("cluster model book order differs from the corpus");
    }
    min_books = std::max<std::size_t>(min_books, 2);
    const FeatureSet all = build_features(corpus, config, threads);
    std::map<std::string, std::size_t> cluster_of;
    for (std::size_t i = 0; i < corpus.size(); ++i) cluster_of[corpus.books[i].book_id] = model.assignments[i];

    ClusterReport report;
    report.k = model.k;
    report.silhouette = model.silhouette;
    for (std::size_t c = 0; c < model.k; ++c) {
        ClusterFingerprints cf;
        cf.index = c;
        cf.centroid = model.centroids[c];
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < all.size(); ++i)
            if (cluster_of.at(all.book_ids[i]) == c) rows.push_back(i);
        cf.n_books = rows.size();
        const FeatureSet sub = subset(all, rows);
        const AuthorIndex index(sub);
        for (const auto& books : index.books)
            if (books.size() >= min_books) ++cf.n_qualifying_authors;
        if (cf.n_qualifying_authors < 2) {
            cf.skipped = true;
            cf.diagnostic = "fewer than 2 authors with " + std::to_string(min_books) + "+ books in cluster";
        } else {
            FingerprintOptions opts;
            opts.n_null = config.n_null;
            opts.n_repeats = config.n_repeats;
            opts.seed = config.seed;
            opts.stream = "cluster/" + std::to_string(c);
            cf.authors = fingerprint_all(sub, config.method, opts, min_books, threads);
            cf.pct_significant = summarize(cf.authors).pct_significant;
        }
        report.clusters.push_back(std::move(cf));
    }
    return report;
}

}  // namespace novfp
