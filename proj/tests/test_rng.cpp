#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "novfp/parallel.hpp"
#include "novfp/rng.hpp"

using namespace novfp;

TEST_CASE("derive_seed is stable and key-sensitive") {
    const auto a = derive_seed(42, {"loo", "author-1"});
    CHECK(a == derive_seed(42, {"loo", "author-1"}));
    CHECK(a != derive_seed(43, {"loo", "author-1"}));
    CHECK(a != derive_seed(42, {"loo", "author-2"}));
    // Key boundaries matter: ("ab", "c") and ("a", "bc") differ.
    CHECK(derive_seed(1, {"ab", "c"}) != derive_seed(1, {"a", "bc"}));
}

TEST_CASE("fnv1a64 matches published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("Rng draws are reproducible and in range") {
    Rng a(7), b(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const auto k = a.below(13);
        CHECK(k == b.below(13));
        CHECK(k < 13);
    }
}

TEST_CASE("Rng normal has unit moments") {
    Rng r(11);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("Rng sample gives distinct indices") {
    Rng r(3);
    for (std::size_t k : {0, 1, 5, 50}) {
        const auto s = r.sample(50, k);
        CHECK(s.size() == k);
        CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == k);
        for (auto v : s) CHECK(v < 50);
    }
}

TEST_CASE("parallel_for fills every slot and rethrows the lowest failure") {
    std::vector<int> out(1000, 0);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i) * 2);

    try {
        parallel_for(100, 4, [](std::size_t i) {
            if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "17");
    }
}
