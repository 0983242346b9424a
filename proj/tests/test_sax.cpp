#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "novfp/error.hpp"
#include "novfp/rng.hpp"
#include "novfp/sax.hpp"

using namespace novfp;

namespace {
#include "oracles/breakpoints_table.inc"
#include "oracles/frozen_values.inc"

std::vector<double> random_series(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

// Direct segment means, used when w divides the length.
std::vector<double> block_means(const std::vector<double>& v, std::size_t w) {
    const std::size_t step = v.size() / w;
    std::vector<double> out(w);
    for (std::size_t j = 0; j < w; ++j)
        out[j] = std::accumulate(v.begin() + j * step, v.begin() + (j + 1) * step, 0.0) / step;
    return out;
}
}  // namespace

TEST_CASE("paa examples") {
    CHECK(paa(std::vector<double>{1, 2, 3, 4}, 2) == std::vector<double>{1.5, 3.5});
    CHECK(paa(std::vector<double>{1, 2, 3}, 3) == std::vector<double>{1, 2, 3});
    const auto frac = paa(std::vector<double>{1, 2, 3}, 2);
    CHECK(frac[0] == doctest::Approx(4.0 / 3));
    CHECK(frac[1] == doctest::Approx(8.0 / 3));
    CHECK_THROWS_AS(paa(std::vector<double>{}, 2), InputError);
    CHECK_THROWS_AS(paa(std::vector<double>{1.0}, 0), ConfigError);
}

TEST_CASE("paa matches frozen fractional oracle") {
    const auto a = paa(std::vector<double>{1, 2, 3, 4, 5, 6, 7}, 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(kPaa7by3[i]).epsilon(1e-12));
    const auto b = paa(std::vector<double>{1, 2, 3}, 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(b[i] == doctest::Approx(kPaa3by5[i]).epsilon(1e-12));
}

TEST_CASE("paa is mean-preserving and equals block means when w divides the length") {
    Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(200);
        const std::size_t w = 1 + rng.below(70);
        const auto v = random_series(rng, n);
        const auto p = paa(v, w);
        REQUIRE(p.size() == w);
        const double mean_v = std::accumulate(v.begin(), v.end(), 0.0) / n;
        const double mean_p = std::accumulate(p.begin(), p.end(), 0.0) / w;
        CHECK(mean_p == doctest::Approx(mean_v).epsilon(1e-9).scale(1.0));
    }
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t w = 1 + rng.below(20);
        const std::size_t n = w * (1 + rng.below(10));
        const auto v = random_series(rng, n);
        const auto p = paa(v, w);
        const auto q = block_means(v, w);
        for (std::size_t j = 0; j < w; ++j) CHECK(p[j] == doctest::Approx(q[j]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("znorm") {
    const auto z = znorm(std::vector<double>{1, 2, 3});
    CHECK_FALSE(z.degenerate);
    CHECK(z.values[0] == doctest::Approx(-1.22474).epsilon(1e-5));
    CHECK(z.values[1] == doctest::Approx(0.0));
    CHECK(z.values[2] == doctest::Approx(1.22474).epsilon(1e-5));

    const auto flat = znorm(std::vector<double>{5, 5, 5});
    CHECK(flat.degenerate);
    CHECK(flat.values == std::vector<double>{0, 0, 0});

    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto v = random_series(rng, 2 + rng.below(50));
        const auto r = znorm(v);
        double m = 0, ss = 0;
        for (double x : r.values) m += x;
        m /= r.values.size();
        for (double x : r.values) ss += (x - m) * (x - m);
        CHECK(std::abs(m) < 1e-9);
        CHECK(std::sqrt(ss / r.values.size()) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("breakpoints agree with the high-precision table") {
    for (int a = 2; a <= 20; ++a) {
        const auto b = breakpoints(a);
        const auto& ref = kBreakpointTable[static_cast<std::size_t>(a)];
        REQUIRE(b.size() == ref.size());
        for (std::size_t j = 0; j < b.size(); ++j) CHECK(std::abs(b[j] - ref[j]) < 1e-8);
        CHECK(std::is_sorted(b.begin(), b.end()));
    }
    const auto b5 = breakpoints(5);
    const double expected5[] = {-0.84, -0.25, 0.25, 0.84};
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(b5[j] - expected5[j]) < 0.005);
    CHECK(breakpoints(2) == std::vector<double>{0.0});
    const auto b4 = breakpoints(4);
    CHECK(b4[0] == doctest::Approx(-0.6745).epsilon(1e-4));
    CHECK(b4[1] == 0.0);
    CHECK(b4[2] == doctest::Approx(0.6745).epsilon(1e-4));
    CHECK_THROWS_AS(breakpoints(1), ConfigError);
    CHECK_THROWS_AS(breakpoints(21), ConfigError);
}

TEST_CASE("normal_quantile tails") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
    CHECK(normal_quantile(0.2) == doctest::Approx(-normal_quantile(0.8)).epsilon(1e-14));
}

TEST_CASE("discretize and the tie rule") {
    CHECK(discretize(std::vector<double>{-1.0, 0.0, 1.0}, 5) == std::vector<std::uint8_t>{0, 2, 4});
    CHECK(render_symbols(std::vector<std::uint8_t>{0, 2, 4}) == "ace");
    const auto b = breakpoints(5);
    CHECK(discretize(std::vector<double>{b[0]}, 5) == std::vector<std::uint8_t>{1});
    CHECK(discretize(std::vector<double>{std::nextafter(b[0], -1.0)}, 5) == std::vector<std::uint8_t>{0});
    CHECK(discretize(std::vector<double>{0, 0, 0}, 5) == std::vector<std::uint8_t>{2, 2, 2});
}

TEST_CASE("sax_string examples") {
    SaxConfig cfg;
    cfg.paa_segments = 4;
    cfg.alphabet = 5;
    cfg.motif_length = 2;
    const auto p = sax_string(std::vector<double>{0, 0, 0, 0, 10, 10, 10, 10}, cfg);
    CHECK(render_symbols(p.symbols) == "aaee");
    CHECK_FALSE(p.degenerate);

    const auto flat = sax_string(std::vector<double>(12, 0.4), cfg);
    CHECK(render_symbols(flat.symbols) == "cccc");
    CHECK(flat.degenerate);

    cfg.paa_segments = 16;
    cfg.motif_length = 4;
    std::vector<double> ramp(16);
    std::iota(ramp.begin(), ramp.end(), 1.0);
    const auto r = sax_string(ramp, cfg);
    CHECK(std::is_sorted(r.symbols.begin(), r.symbols.end()));
    CHECK(r.symbols.front() == 0);
    CHECK(r.symbols.back() == 4);
    CHECK(r.motifs.total == 13);
    CHECK_THROWS_AS(sax_string(std::vector<double>{1.0}, cfg), InputError);
}

TEST_CASE("sax properties") {
    Rng rng(99);
    SaxConfig cfg;
    cfg.paa_segments = 12;
    cfg.alphabet = 6;
    cfg.motif_length = 3;
    for (int trial = 0; trial < 200; ++trial) {
        const auto v = random_series(rng, 12 + rng.below(100));
        const auto base = sax_string(v, cfg);
        const double a = rng.uniform(0.01, 50.0);
        const double shift = rng.uniform(-10.0, 10.0);
        auto moved = v;
        for (double& x : moved) x = a * x + shift;
        const auto z1 = znorm(v);
        const auto z2 = znorm(moved);
        CHECK(discretize(z1.values, 6) == discretize(z2.values, 6));

        std::uint64_t sum = 0;
        for (const auto& [idx, count] : base.motifs.entries) {
            sum += count;
            CHECK(idx < cfg.motif_space());
        }
        CHECK(sum == base.motifs.total);
        CHECK(base.motifs.total == cfg.paa_segments - cfg.motif_length + 1);

        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        const auto mono = sax_string(sorted, cfg);
        CHECK(std::is_sorted(mono.symbols.begin(), mono.symbols.end()));

        CHECK(sax_string(v, cfg) == base);
    }
}

TEST_CASE("extract_motifs") {
    const auto one = extract_motifs(std::vector<std::uint8_t>{0, 1, 2, 3}, 4, 4);
    REQUIRE(one.entries.size() == 1);
    CHECK(one.entries[0].first == 0 * 64 + 1 * 16 + 2 * 4 + 3);
    CHECK(one.total == 1);
    const auto aa = extract_motifs(std::vector<std::uint8_t>{0, 0, 0, 0}, 5, 2);
    CHECK(aa.entries == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 3}});
    CHECK_THROWS_AS(extract_motifs(std::vector<std::uint8_t>{0, 1}, 5, 3), InputError);

    SaxConfig cfg;
    cfg.alphabet = 5;
    cfg.motif_length = 4;
    CHECK(cfg.motif_space() == 625);

    MotifCounts acc = aa;
    merge_counts(acc, extract_motifs(std::vector<std::uint8_t>{0, 0, 1}, 5, 2));
    CHECK(acc.entries == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 4}, {1, 1}});
    CHECK(acc.total == 5);
}

TEST_CASE("config validation") {
    SaxConfig cfg;
    cfg.motif_length = 17;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.alphabet = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.window = 21;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.stride = 7;
    CHECK_NOTHROW(cfg.validate());
    cfg = {};
    cfg.window = 20;
    CHECK(cfg.effective_stride() == 10);
}

TEST_CASE("window offsets") {
    CHECK(window_offsets(40, 20, 10) == std::vector<std::size_t>{0, 10, 20});
    CHECK(window_offsets(45, 20, 10) == std::vector<std::size_t>{0, 10, 20, 25});
    CHECK(window_offsets(20, 20, 10) == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(window_offsets(19, 20, 10), InputError);
}

TEST_CASE("sliding window profile") {
    SaxConfig cfg;
    cfg.paa_segments = 8;
    cfg.alphabet = 5;
    cfg.motif_length = 4;
    cfg.window = 20;
    Rng rng(5);
    auto curve = random_series(rng, 45);
    const auto p = sliding_window_profile(curve, cfg);
    CHECK(p.window_count == 4);
    CHECK(p.motifs.total == 4 * 5);
    CHECK(p.degenerate_windows == 0);
    CHECK_THROWS_AS(sliding_window_profile(std::vector<double>(10, 0.0), cfg), InputError);

    // a flat stretch yields one degenerate window
    std::fill(curve.begin(), curve.begin() + 20, 0.3);
    const auto kept = sliding_window_profile(curve, cfg);
    CHECK(kept.degenerate_windows == 1);
    CHECK(kept.motifs.total == 20);
    const auto dropped = sliding_window_profile(curve, cfg, true);
    CHECK(dropped.degenerate_windows == 1);
    CHECK(dropped.motifs.total == 15);

    const auto all_flat = sliding_window_profile(std::vector<double>(40, 0.1), cfg);
    CHECK(all_flat.degenerate);
    const std::uint64_t middle = 2 * 125 + 2 * 25 + 2 * 5 + 2;
    CHECK(all_flat.motifs.entries == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{middle, 15}});
}

TEST_CASE("window slopes") {
    std::vector<double> ramp(45);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.5 * static_cast<double>(i);
    const auto s = window_slopes(ramp, 20, 10);
    REQUIRE(s.size() == 4);
    for (double v : s) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("profile json round trip") {
    SaxConfig cfg;
    cfg.paa_segments = 8;
    cfg.motif_length = 3;
    Rng rng(2);
    auto p = sax_string(random_series(rng, 30), cfg);
    p.book_id = "a/b";
    const auto j = profile_to_json(p);
    CHECK(j.at("sax").get<std::string>().size() == 8);
    CHECK(profile_from_json(j) == p);

    cfg.window = 10;
    auto w = sliding_window_profile(random_series(rng, 37), cfg);
    w.book_id = "x";
    CHECK(profile_from_json(profile_to_json(w)) == w);
}
