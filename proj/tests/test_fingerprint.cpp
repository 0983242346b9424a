#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "novfp/error.hpp"
#include "novfp/fingerprint.hpp"
#include "novfp/rng.hpp"

using namespace novfp;

namespace {

std::string author_name(std::size_t a) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "a%03zu", a);
    return buf;
}

void add_book(FeatureRows& rows, std::size_t author, std::size_t book) {
    rows.author_ids.push_back(author_name(author));
    rows.book_ids.push_back(author_name(author) + "/" + std::to_string(book));
}

// iid standard-normal dense rows.
FeatureRows iid_dense(Rng& rng, std::size_t authors, std::size_t books, std::size_t dim) {
    FeatureRows rows;
    for (std::size_t a = 0; a < authors; ++a)
        for (std::size_t b = 0; b < books; ++b) {
            add_book(rows, a, b);
            std::vector<double> v(dim);
            for (double& x : v) x = rng.normal();
            rows.dense.push_back(v);
        }
    return rows;
}

MotifCounts single_motif(std::uint64_t index, std::uint64_t count = 5) {
    MotifCounts c;
    c.entries = {{index, count}};
    c.total = count;
    return c;
}

FingerprintOptions options(std::uint64_t seed, std::size_t n_null = 200) {
    FingerprintOptions o;
    o.seed = seed;
    o.n_null = n_null;
    o.n_repeats = 20;
    return o;
}
}  // namespace

TEST_CASE("method names") {
    CHECK(parse_fingerprint_method(to_string(FingerprintMethod::leave_one_out)) == FingerprintMethod::leave_one_out);
    CHECK(parse_fingerprint_method("split_half") == FingerprintMethod::split_half);
    CHECK_THROWS_AS(parse_fingerprint_method("bootstrap"), ConfigError);
}

TEST_CASE("identical books give no signal") {
    FeatureRows rows;
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            add_book(rows, a, b);
            rows.motifs.push_back(single_motif(3));
        }
    const auto fs = make_feature_set(FeatureKind::sax_motifs, rows, {}, 5, 4);
    const AuthorIndex index(fs);
    for (auto method : {FingerprintMethod::leave_one_out, FingerprintMethod::split_half}) {
        const auto f = fingerprint(fs, index, "a002", method, options(1, 100));
        CHECK(f.intra_mean == 0.0);
        CHECK(f.null_mean == 0.0);
        CHECK(f.null_degenerate);
        CHECK(f.effect == 0.0);
        CHECK(f.p_value == 1.0);
        CHECK_FALSE(f.significant);
    }
}

TEST_CASE("planted author is detected in at least 95% of seeds") {
    int hits = 0;
    const int seeds = 40;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(1000 + s);
        auto rows = iid_dense(rng, 40, 5, 7);
        std::vector<double> profile(7);
        for (double& x : profile) x = rng.normal();
        for (std::size_t b = 0; b < 5; ++b) {
            add_book(rows, 40, b);
            std::vector<double> v(7);
            for (std::size_t d = 0; d < 7; ++d) v[d] = profile[d] + 0.2 * rng.normal();
            rows.dense.push_back(v);
        }
        const auto fs = make_feature_set(FeatureKind::scalars, rows);
        const AuthorIndex index(fs);
        const auto f = loo_fingerprint(fs, index, author_name(40), options(s));
        if (f.effect > 1.0 && f.p_value < 0.05) ++hits;
        CHECK(f.effect == doctest::Approx((f.null_mean - f.intra_mean) / f.null_std).epsilon(1e-12));
        CHECK(f.significant == (f.p_value < 0.05));
    }
    CHECK(hits >= 38);
}

TEST_CASE("maximally diverse author has a negative effect") {
    Rng rng(5);
    auto rows = iid_dense(rng, 30, 5, 7);
    for (std::size_t b = 0; b < 5; ++b) {
        add_book(rows, 30, b);
        std::vector<double> v(7, 0.0);
        v[b] = (b % 2 == 0 ? 6.0 : -6.0);
        rows.dense.push_back(v);
    }
    const auto fs = make_feature_set(FeatureKind::scalars, rows);
    const AuthorIndex index(fs);
    const auto f = loo_fingerprint(fs, index, author_name(30), options(2));
    CHECK(f.effect < 0.0);
    CHECK(f.p_value > 0.5);
}

TEST_CASE("split-half extremes") {
    FeatureRows rows;
    // a000: four identical tables; a001: four disjoint tables
    for (std::size_t b = 0; b < 4; ++b) {
        add_book(rows, 0, b);
        rows.motifs.push_back(single_motif(7));
    }
    for (std::size_t b = 0; b < 4; ++b) {
        add_book(rows, 1, b);
        rows.motifs.push_back(single_motif(100 + b));
    }
    Rng rng(3);
    for (std::size_t a = 2; a < 10; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            add_book(rows, a, b);
            MotifCounts c;
            for (std::uint64_t i = 0; i < 10; ++i) c.entries.emplace_back(i, 1 + rng.below(4));
            for (const auto& e : c.entries) c.total += e.second;
            rows.motifs.push_back(c);
        }
    const auto fs = make_feature_set(FeatureKind::window_motifs, rows, {}, 5, 4);
    const AuthorIndex index(fs);
    CHECK(split_half_fingerprint(fs, index, "a000", options(1)).intra_mean == 0.0);
    CHECK(split_half_fingerprint(fs, index, "a001", options(1)).intra_mean == 1.0);

    FeatureRows small;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            add_book(small, a, b);
            small.motifs.push_back(single_motif(a * 3 + b));
        }
    const auto sfs = make_feature_set(FeatureKind::window_motifs, small, {}, 5, 4);
    const AuthorIndex sidx(sfs);
    CHECK_THROWS_AS(split_half_fingerprint(sfs, sidx, "a000", options(1)), InputError);
    CHECK(fingerprint_all(sfs, FingerprintMethod::split_half, options(1), 2, 1).empty());
    CHECK(fingerprint_all(sfs, FingerprintMethod::leave_one_out, options(1), 2, 1).size() == 3);
}

TEST_CASE("loo needs two books") {
    FeatureRows rows;
    add_book(rows, 0, 0);
    rows.dense.push_back({1.0});
    add_book(rows, 1, 0);
    rows.dense.push_back({2.0});
    add_book(rows, 1, 1);
    rows.dense.push_back({3.0});
    const auto fs = make_feature_set(FeatureKind::scalars, rows);
    const AuthorIndex index(fs);
    CHECK_THROWS_AS(loo_fingerprint(fs, index, "a000", options(1)), InputError);
    CHECK_THROWS_AS(loo_fingerprint(fs, index, "nobody", options(1)), InputError);
}

TEST_CASE("pseudo-authors avoid the excluded author and use distinct authors") {
    Rng data(1);
    const auto fs = make_feature_set(FeatureKind::scalars, iid_dense(data, 10, 3, 2));
    const AuthorIndex index(fs);
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        const auto picked = draw_pseudo_author(rng, index, 4, 5);
        REQUIRE(picked.size() == 5);
        std::vector<std::string> authors;
        for (std::size_t b : picked) authors.push_back(fs.author_ids[b]);
        CHECK(std::find(authors.begin(), authors.end(), "a004") == authors.end());
        std::sort(authors.begin(), authors.end());
        CHECK(std::adjacent_find(authors.begin(), authors.end()) == authors.end());
    }
    // more books than other authors: pooled draw
    const auto pooled = draw_pseudo_author(rng, index, 0, 12);
    CHECK(std::adjacent_find(pooled.begin(), pooled.end()) == pooled.end());
    CHECK_THROWS_AS(draw_pseudo_author(rng, index, 0, 28), InputError);
}

TEST_CASE("p-values on an iid corpus are roughly uniform") {
    Rng rng(77);
    const auto fs = make_feature_set(FeatureKind::scalars, iid_dense(rng, 200, 5, 7));
    const auto res = fingerprint_all(fs, FingerprintMethod::leave_one_out, options(4), 5, 1);
    REQUIRE(res.size() == 200);
    const double rate = summarize(res).pct_significant / 100.0;
    const double sd = std::sqrt(0.05 * 0.95 / 200.0);
    CHECK(rate <= 0.05 + 2.576 * sd);
    CHECK(rate >= 0.05 - 2.576 * sd);
}

TEST_CASE("fingerprints do not depend on input order or thread count") {
    Rng rng(31);
    auto rows = iid_dense(rng, 12, 5, 3);
    const auto fs = make_feature_set(FeatureKind::scalars, rows);
    FeatureRows shuffled;
    const auto order = Rng(8).sample(rows.book_ids.size(), rows.book_ids.size());
    for (std::size_t i : order) {
        shuffled.book_ids.push_back(rows.book_ids[i]);
        shuffled.author_ids.push_back(rows.author_ids[i]);
        shuffled.dense.push_back(rows.dense[i]);
    }
    const auto fs2 = make_feature_set(FeatureKind::scalars, shuffled);
    for (auto method : {FingerprintMethod::leave_one_out, FingerprintMethod::split_half}) {
        const auto a = fingerprint_all(fs, method, options(6, 100), 2, 1);
        const auto b = fingerprint_all(fs2, method, options(6, 100), 2, 3);
        CHECK(fingerprints_csv(a) == fingerprints_csv(b));
        nlohmann::json ja = nlohmann::json::array(), jb = nlohmann::json::array();
        for (const auto& f : a) ja.push_back(to_json(f));
        for (const auto& f : b) jb.push_back(to_json(f));
        CHECK(ja.dump() == jb.dump());
    }
    const auto r1 = attribute_all(fs, 1);
    const auto r2 = attribute_all(fs2, 4);
    CHECK(r1.ranks == r2.ranks);
}

TEST_CASE("attribution with perfect separation") {
    FeatureRows rows;
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            add_book(rows, a, b);
            rows.dense.push_back({static_cast<double>(a), static_cast<double>(a * a)});
        }
    const auto fs = make_feature_set(FeatureKind::scalars, rows);
    const auto r = attribute_all(fs, 2);
    CHECK(r.top_k(1) == 1.0);
    CHECK(r.n_candidates == 5);
    CHECK(r.chance(1) == doctest::Approx(0.2));
    CHECK(r.top_k(1) / r.chance(1) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("attribution ties go to the first author") {
    FeatureRows rows;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            add_book(rows, a, b);
            rows.motifs.push_back(single_motif(1));
        }
    add_book(rows, 9, 0);  // single-book author: not a candidate
    rows.motifs.push_back(single_motif(1));
    const auto fs = make_feature_set(FeatureKind::sax_motifs, rows, {}, 5, 1);
    const auto r = attribute_all(fs, 1);
    CHECK(r.excluded_authors == std::vector<std::string>{"a009"});
    CHECK(r.n_candidates == 4);
    REQUIRE(r.ranks.size() == 12);
    for (std::size_t i = 0; i < r.ranks.size(); ++i) {
        const std::size_t author = static_cast<std::size_t>(std::stoi(r.author_ids[i].substr(1)));
        CHECK(r.ranks[i] == author + 1);
    }
    CHECK(r.top_k(1) == doctest::Approx(0.25));
    CHECK(r.top_k(4) == 1.0);
}

TEST_CASE("random motif books attribute at chance") {
    Rng rng(55);
    FeatureRows rows;
    for (std::size_t a = 0; a < 100; ++a)
        for (std::size_t b = 0; b < 5; ++b) {
            add_book(rows, a, b);
            std::vector<std::uint64_t> hist(625, 0);
            for (int t = 0; t < 60; ++t) ++hist[rng.below(625)];
            MotifCounts c;
            for (std::uint64_t i = 0; i < 625; ++i)
                if (hist[i]) c.entries.emplace_back(i, hist[i]);
            c.total = 60;
            rows.motifs.push_back(c);
        }
    const auto fs = make_feature_set(FeatureKind::sax_motifs, rows, {}, 5, 4);
    const auto r = attribute_all(fs, 1);
    const double sd = std::sqrt(0.01 * 0.99 / 500.0);
    CHECK(std::abs(r.top_k(1) - 0.01) <= 3 * sd);
    CHECK(r.top_k(100) == 1.0);
    CHECK(r.top_k(5) >= r.top_k(1));
}

TEST_CASE("fisher ratios") {
    Rng rng(4);
    FeatureRows rows;
    for (std::size_t a = 0; a < 20; ++a)
        for (std::size_t b = 0; b < 5; ++b) {
            add_book(rows, a, b);
            // dim0 constant per author, dim1 author mean plus noise, dim2 iid
            rows.dense.push_back({static_cast<double>(a % 7), static_cast<double>(a) + 0.5 * rng.normal(), rng.normal()});
        }
    const auto fs = make_feature_set(FeatureKind::scalars, rows, {"fixed", "shifted", "noise"});
    const auto fr = fisher_ratios(fs);
    REQUIRE(fr.ratio.size() == 3);
    CHECK(fr.labels[2] == "noise");
    CHECK(fr.infinite[0]);
    CHECK(std::isinf(fr.ratio[0]));
    CHECK_FALSE(fr.infinite[1]);
    CHECK(fr.ratio[1] > fr.ratio[2]);

    // the iid column sits inside its own label-permutation distribution
    std::vector<double> perm;
    Rng prng(12);
    for (int t = 0; t < 200; ++t) {
        auto p = rows;
        const auto order = prng.sample(p.author_ids.size(), p.author_ids.size());
        for (std::size_t i = 0; i < order.size(); ++i) p.dense[i][2] = rows.dense[order[i]][2];
        perm.push_back(fisher_ratios(make_feature_set(FeatureKind::scalars, p)).ratio[2]);
    }
    std::sort(perm.begin(), perm.end());
    CHECK(fr.ratio[2] >= perm[1]);
    CHECK(fr.ratio[2] <= perm[198]);
    double m = 0;
    for (double v : perm) m += v;
    m /= perm.size();
    // between ~ (19/20)(1/5), within ~ 4/5 for 20 authors of 5 books
    CHECK(std::abs(m - 0.2375) < 0.05);

    FeatureRows tiny;
    add_book(tiny, 0, 0);
    add_book(tiny, 0, 1);
    tiny.dense = {{1.0}, {2.0}};
    CHECK_THROWS_AS(fisher_ratios(make_feature_set(FeatureKind::scalars, tiny)), InputError);
}

TEST_CASE("summary and exports") {
    std::vector<AuthorFingerprint> rows(2);
    rows[0].author_id = "x";
    rows[0].effect = 1.0;
    rows[0].p_value = 0.01;
    rows[0].significant = true;
    rows[1].author_id = "y";
    rows[1].effect = 3.0;
    const auto s = summarize(rows);
    CHECK(s.n_authors == 2);
    CHECK(s.pct_significant == 50.0);
    CHECK(s.mean_effect == 2.0);
    CHECK(fingerprints_csv(rows).find("\ny,") != std::string::npos);
    CHECK(to_json(rows[0]).at("p_value").get<double>() == 0.01);
}
