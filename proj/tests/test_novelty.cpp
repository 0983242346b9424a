#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "novfp/error.hpp"
#include "novfp/novelty.hpp"
#include "novfp/rng.hpp"

using namespace novfp;

namespace {
#include "oracles/frozen_values.inc"

EmbeddingMatrix matrix(std::size_t dim, std::vector<float> data) { return {"b", dim, std::move(data)}; }

std::vector<double> random_curve(Rng& rng, std::size_t n) {
    std::vector<double> c(n);
    for (double& v : c) v = rng.uniform(0.0, 1.5);
    return c;
}
}  // namespace

TEST_CASE("novelty_curve on hand-computed rows") {
    CHECK(novelty_curve(matrix(2, {1, 0, 1, 0})).values == std::vector<double>{0.0});
    CHECK(novelty_curve(matrix(2, {1, 0, 0, 1})).values == std::vector<double>{1.0});
    const float r = static_cast<float>(1.0 / std::sqrt(2.0));
    CHECK(novelty_curve(matrix(2, {1, 0, r, r})).values[0] == doctest::Approx(1 - std::sqrt(2.0) / 2).epsilon(1e-7));
    CHECK(novelty_curve(matrix(2, {1, 0, -1, 0})).values == std::vector<double>{2.0});
}

TEST_CASE("novelty_curve matches the frozen oracle and is scale-free") {
    const auto c = novelty_curve(matrix(3, {1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, -1}));
    REQUIRE(c.values.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(c.values[i] == doctest::Approx(kNoveltyExpected[i]).epsilon(1e-7));

    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<float> rows(5 * 6);
        for (float& x : rows) x = static_cast<float>(rng.normal());
        auto scaled = rows;
        for (std::size_t r = 0; r < 5; ++r) {
            const float s = static_cast<float>(rng.uniform(0.1, 10.0));
            for (std::size_t d = 0; d < 6; ++d) scaled[r * 6 + d] *= s;
        }
        const auto a = novelty_curve(matrix(6, rows)).values;
        const auto b = novelty_curve(matrix(6, scaled)).values;
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-6));
            CHECK(a[i] >= 0.0);
            CHECK(a[i] <= 2.0);
        }
    }
    CHECK_THROWS_AS(novelty_curve(matrix(2, {1, 0, 0, 0})), InputError);
}

TEST_CASE("scalar dynamics on hand examples") {
    const std::vector<double> ramp{0.1, 0.2, 0.3};
    const auto s = scalar_dynamics(ramp);
    CHECK(s.mean_novelty == doctest::Approx(0.2));
    CHECK(*s.speed == doctest::Approx(0.1));
    CHECK(*s.volume == doctest::Approx(0.2));
    CHECK(*s.circuitousness == doctest::Approx(1.0));
    CHECK(*s.reversal_count == 0);
    CHECK(s.flags == 0);

    CHECK(*scalar_dynamics(std::vector<double>{0.1, 0.3, 0.2}).reversal_count == 1);

    const auto flat = scalar_dynamics(std::vector<double>{0.5, 0.5, 0.5});
    CHECK(*flat.speed == 0.0);
    CHECK(*flat.volume == 0.0);
    CHECK(flat.has(dynamics_flag::flat_net_displacement));
    CHECK(flat.has(dynamics_flag::constant_curve));
    CHECK(flat.novelty_std == 0.0);
    CHECK(*flat.trend_irregularity == 0.0);
}

TEST_CASE("scalar dynamics match the frozen oracle") {
    const auto s = scalar_dynamics(std::span<const double>(kScalarCurve));
    const auto a = s.as_array();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(kScalarExpected[i]).epsilon(1e-12));
}

TEST_CASE("circuitousness floor, cap and short curves") {
    // path returns to its start: net displacement 0
    const auto loop = scalar_dynamics(std::vector<double>{0.2, 0.7, 0.2});
    CHECK(loop.has(dynamics_flag::flat_net_displacement));
    CHECK(*loop.circuitousness == doctest::Approx(1.0 / kNetDisplacementFloor));
    const auto huge = scalar_dynamics(std::vector<double>{0.0, 2.0, 0.0, 2.0, 0.0});
    CHECK(*huge.circuitousness <= kCircuitousnessCap);

    const auto one = scalar_dynamics(std::vector<double>{0.4});
    CHECK_FALSE(one.speed.has_value());
    CHECK(one.has(dynamics_flag::too_short_for_speed));
    CHECK_THROWS_AS(one.as_array(), InputError);
    const auto two = scalar_dynamics(std::vector<double>{0.4, 0.6});
    CHECK(two.speed.has_value());
    CHECK_FALSE(two.reversal_count.has_value());
    CHECK(two.has(dynamics_flag::too_short_for_reversals));
}

TEST_CASE("odd-length trend split puts the middle element in the second half") {
    const auto s = scalar_dynamics(std::vector<double>{0.0, 1.0, 1.0});
    // halves (0) and (1, 1): |1 - 0| / std
    const double sd = std::sqrt(2.0 / 9.0);
    CHECK(*s.trend_irregularity == doctest::Approx(1.0 / sd));
}

TEST_CASE("scalar dynamics properties on random curves") {
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const auto c = random_curve(rng, 3 + rng.below(60));
        const auto s = scalar_dynamics(c);
        CHECK(*s.volume == doctest::Approx(*s.speed * static_cast<double>(c.size() - 1)).epsilon(1e-12));
        CHECK(*s.volume >= std::abs(c.back() - c.front()) - 1e-15);
        if (!s.has(dynamics_flag::flat_net_displacement)) CHECK(*s.circuitousness >= 1.0 - 1e-12);

        const double shift = rng.uniform(-0.3, 0.3);
        auto shifted = c;
        for (double& v : shifted) v += shift;
        const auto t = scalar_dynamics(shifted);
        CHECK(*t.speed == doctest::Approx(*s.speed).epsilon(1e-9));
        CHECK(*t.volume == doctest::Approx(*s.volume).epsilon(1e-9));
        CHECK(*t.reversal_count == *s.reversal_count);
        CHECK(t.novelty_std == doctest::Approx(s.novelty_std).epsilon(1e-9));
        CHECK(t.mean_novelty == doctest::Approx(s.mean_novelty + shift).epsilon(1e-9));

        auto rev = c;
        std::reverse(rev.begin(), rev.end());
        const auto r = scalar_dynamics(rev);
        CHECK(r.mean_novelty == doctest::Approx(s.mean_novelty).epsilon(1e-12));
        CHECK(*r.volume == doctest::Approx(*s.volume).epsilon(1e-12));
        CHECK(*r.reversal_count == *s.reversal_count);
        CHECK(r.novelty_std == doctest::Approx(s.novelty_std).epsilon(1e-12));
    }
}

TEST_CASE("scalar exports carry every column and flag") {
    const std::vector<std::string> ids{"a/1", "a/2"};
    const std::vector<ScalarDynamics> rows{scalar_dynamics(std::vector<double>{0.1, 0.2, 0.3}),
                                           scalar_dynamics(std::vector<double>{0.5, 0.5})};
    const auto csv = scalars_csv(ids, rows);
    CHECK(csv.rfind("book_id,mean_novelty,speed,volume,circuitousness,reversal_count,novelty_std,"
                    "trend_irregularity,flags\n",
                    0) == 0);
    CHECK(csv.find("too_short_for_reversals") != std::string::npos);
    const auto json = scalars_json(ids, rows);
    CHECK(json.find("\"a/2\"") != std::string::npos);
    CHECK(flag_names(dynamics_flag::constant_curve) == std::vector<std::string>{"constant_curve"});
}
