#include <doctest.h>

#include <cmath>
#include <set>

#include "novfp/cluster.hpp"
#include "novfp/error.hpp"
#include "novfp/rng.hpp"
#include "novfp/synth.hpp"

using namespace novfp;

namespace {
Points blobs(Rng& rng, const Points& centers, std::size_t per, double spread) {
    Points out;
    for (std::size_t i = 0; i < per; ++i)
        for (const auto& c : centers) {
            std::vector<double> p(c.size());
            for (std::size_t d = 0; d < c.size(); ++d) p[d] = c[d] + spread * rng.normal();
            out.push_back(p);
        }
    return out;
}
}  // namespace

TEST_CASE("two separated clouds split cleanly") {
    Rng rng(1);
    const auto pts = blobs(rng, {{0, 0}, {10, 0}}, 40, 0.5);
    const auto m = kmeans(pts, 2, 7);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(m.assignments[i] == m.assignments[i % 2]);
    CHECK(m.assignments[0] != m.assignments[1]);
    CHECK(m.counts == std::vector<std::size_t>{40, 40});
    CHECK(silhouette_score(pts, m.assignments) > 0.9);
}

TEST_CASE("k = 1 gives the global mean") {
    Rng rng(2);
    const auto pts = blobs(rng, {{1, 2, 3}}, 30, 1.0);
    const auto m = kmeans(pts, 1, 3);
    for (std::size_t d = 0; d < 3; ++d) {
        double mean = 0;
        for (const auto& p : pts) mean += p[d];
        mean /= pts.size();
        CHECK(m.centroids[0][d] == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("too few distinct points") {
    const Points pts{{0, 0}, {0, 0}, {1, 1}, {1, 1}};
    CHECK_THROWS_AS(kmeans(pts, 3, 1), InputError);
    CHECK_NOTHROW(kmeans(pts, 2, 1));
    const Points same(10, std::vector<double>{0.5, 0.5});
    CHECK_THROWS_AS(select_k(same, 2, 5, 1), InputError);
    CHECK_THROWS_AS(kmeans(Points{}, 1, 1), InputError);
}

TEST_CASE("silhouette on uniform noise is near zero") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        Rng rng(100 + s);
        Points pts(200, std::vector<double>(16));
        for (auto& p : pts)
            for (double& x : p) x = rng.uniform();
        const auto m = kmeans(pts, 2, s);
        CHECK(std::abs(silhouette_score(pts, m.assignments)) < 0.2);
    }
}

TEST_CASE("silhouette of a singleton is zero") {
    // two points together, one alone: the pair scores 1 - 0/d, the singleton 0
    const Points pts{{0.0}, {0.0}, {5.0}};
    CHECK(silhouette_score(pts, {0, 0, 1}) == doctest::Approx(2.0 / 3.0));
    // 1 - a/b per paired point: 1 - 1/5 and 1 - 1/4
    const Points pair{{0.0}, {1.0}, {5.0}};
    CHECK(silhouette_score(pair, {0, 0, 1}) == doctest::Approx((0.8 + 0.75) / 3.0));
}

TEST_CASE("silhouette sampling is used above the full limit") {
    Rng rng(6);
    const auto pts = blobs(rng, {{0, 0}, {8, 8}}, 100, 0.5);
    const auto m = kmeans(pts, 2, 1);
    const double full = silhouette_score(pts, m.assignments);
    const double sampled = silhouette_score(pts, m.assignments, 4, 1, 50, 60);
    CHECK(sampled == doctest::Approx(full).epsilon(0.05));
    CHECK(sampled == silhouette_score(pts, m.assignments, 4, 2, 50, 60));
}

TEST_CASE("select_k recovers the blob count") {
    Rng rng(3);
    const auto five = blobs(rng, {{0, 0}, {10, 0}, {0, 10}, {10, 10}, {5, 20}}, 30, 0.7);
    const auto m5 = select_k(five, 2, 8, 11);
    CHECK(m5.k == 5);
    const auto two = blobs(rng, {{0, 0, 0}, {9, 9, 9}}, 50, 1.0);
    const auto m2 = select_k(two, 2, 8, 11, {}, 2);
    CHECK(m2.k == 2);

    // no scanned k beats the chosen one
    for (std::size_t k = 2; k <= 8; ++k) {
        const auto mk = kmeans(five, k, derive_seed(11, {"kmeans", std::to_string(k)}));
        const double s = silhouette_score(five, mk.assignments, derive_seed(11, {"silhouette", std::to_string(k)}));
        CHECK(s <= m5.silhouette);
    }
}

TEST_CASE("objective never increases and runs are deterministic") {
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        Points pts(150, std::vector<double>(4));
        for (auto& p : pts)
            for (double& x : p) x = rng.normal();
        const std::size_t k = 2 + rng.below(6);
        const auto m = kmeans(pts, k, t);
        REQUIRE_FALSE(m.objective_trace.empty());
        for (std::size_t i = 1; i < m.objective_trace.size(); ++i)
            CHECK(m.objective_trace[i] <= m.objective_trace[i - 1] * (1 + 1e-12));
        CHECK(kmeans(pts, k, t) == m);
        CHECK(kmeans(pts, k, t, {}, 3) == m);
        std::set<std::size_t> used(m.assignments.begin(), m.assignments.end());
        CHECK(used.size() == k);
    }
}

TEST_CASE("within-cluster fingerprints on a genre corpus stay near nominal") {
    SynthSpec spec;
    spec.n_authors = 40;
    spec.books_per_author = 6;
    spec.min_length = 60;
    spec.max_length = 90;
    spec.archetype = Archetype::genre;
    spec.seed = 5;
    const auto corpus = gen_corpus(spec).corpus;
    const auto pts = paa_profiles(corpus, 16);
    CHECK(pts.size() == corpus.size());
    ExperimentConfig cfg;
    cfg.kind = FeatureKind::scalars;
    cfg.n_null = 100;
    cfg.seed = 5;
    const auto model = select_k(pts, 2, 6, 5);
    const auto report = within_cluster_fingerprints(model, corpus, cfg, 3, 1);
    CHECK(report.clusters.size() == model.k);
    CHECK(report.pooled_pct_significant() < 20.0);
    const auto j = report.to_json();
    CHECK(j.at("k").get<std::size_t>() == model.k);

    // a cluster with a single author is skipped
    ClusterModel lone = model;
    for (std::size_t i = 0; i < lone.assignments.size(); ++i)
        lone.assignments[i] = corpus.books[i].author_id == "author-000" ? 1 : 0;
    lone.k = 2;
    lone.counts = {0, 0};
    for (auto a : lone.assignments) ++lone.counts[a];
    lone.centroids.resize(2);
    const auto r2 = within_cluster_fingerprints(lone, corpus, cfg, 3, 1);
    CHECK(r2.clusters[1].skipped);
    CHECK_FALSE(r2.clusters[1].diagnostic.empty());
    CHECK_FALSE(r2.clusters[0].skipped);
}
