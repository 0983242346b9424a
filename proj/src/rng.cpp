#include "novfp/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace novfp {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> keys) noexcept {
    std::uint64_t h = mix64(master);
    for (auto key : keys) {
        // Length-prefix each key so ("ab","c") and ("a","bc") differ.
        h = mix64(h ^ key.size());
        h = mix64(h ^ fnv1a64(key));
    }
    return h;
}

double Rng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    // Rejection sampling on the top of the range removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> Rng::sample(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("Rng::sample: k exceeds population");
    // Sparse partial Fisher-Yates; O(k) memory regardless of n.
    std::unordered_map<std::size_t, std::size_t> swapped;
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + below(n - i);
        auto at = [&](std::size_t idx) {
            auto it = swapped.find(idx);
            return it == swapped.end() ? idx : it->second;
        };
        const std::size_t vj = at(j);
        const std::size_t vi = at(i);
        swapped[j] = vi;
        out.push_back(vj);
    }
    return out;
}

}  // namespace novfp
