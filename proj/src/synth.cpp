#include "novfp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>

#include "novfp/error.hpp"
#include "novfp/parallel.hpp"
#include "novfp/rng.hpp"

namespace novfp {

std::string to_string(Archetype a) {
    switch (a) {
        case Archetype::null_model: return "null";
        case Archetype::intensity: return "intensity";
        case Archetype::rhythm: return "rhythm";
        case Archetype::genre: return "genre";
        case Archetype::genre_author: return "genre_author";
    }
    return "unknown";
}

Archetype parse_archetype(std::string_view name) {
    for (auto a : {Archetype::null_model, Archetype::intensity, Archetype::rhythm, Archetype::genre,
                   Archetype::genre_author}) {
        if (to_string(a) == name) return a;
    }
    throw ConfigError("unknown archetype: " + std::string(name));
}

AuthorProfile background_profile(const SynthParams& params) {
    AuthorProfile p;
    p.base_level = params.base_level;
    p.level_sd = params.level_sd;
    p.ar_coefficient = params.ar_coefficient;
    p.template_stretch = params.template_stretch;
    p.template_gap = params.template_gap;
    return p;
}

namespace {

// Position in [0, 1) along one parameter axis: the midpoint of the author's
// stratum, or a plain uniform draw.
double axis_position(Rng& rng, std::uint64_t seed, Archetype arch, int axis, const std::optional<Stratum>& stratum) {
    const double u = rng.uniform();
    if (!stratum) return u;
    const std::size_t n = stratum->count;
    if (n == 0 || stratum->index >= n) throw ConfigError("stratum index out of range");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng prng(derive_seed(seed, {"strata", to_string(arch), std::to_string(axis), std::to_string(n)}));
    prng.shuffle(std::span<std::size_t>(perm));
    return (static_cast<double>(perm[stratum->index]) + 0.5) / static_cast<double>(n);
}

double lerp(double a, double b, double t) { return a + t * (b - a); }
double log_lerp(double a, double b, double t) { return std::exp(std::log(a) + t * (std::log(b) - std::log(a))); }

int group_of(std::string_view author_id, const std::optional<Stratum>& stratum, std::size_t groups) {
    if (groups == 0) throw ConfigError("genre archetype needs at least one group");
    const std::uint64_t key = stratum ? stratum->index : fnv1a64(author_id);
    return static_cast<int>(key % groups);
}

}  // namespace

AuthorProfile gen_profile(std::string_view author_id, Archetype archetype, double strength, std::uint64_t seed,
                          const SynthParams& params, std::optional<Stratum> stratum) {
    if (!(strength >= 0.0 && strength <= 1.0)) throw ConfigError("strength must be in [0, 1]");
    AuthorProfile p = background_profile(params);
    p.author_id = std::string(author_id);
    p.strength = strength;
    if (strength == 0.0 || archetype == Archetype::null_model) return p;

    Rng rng(derive_seed(seed, {"profile", to_string(archetype), author_id}));
    double level = params.base_level, sd = params.level_sd, ar = params.ar_coefficient;
    switch (archetype) {
        case Archetype::intensity:
            level = lerp(params.level_lo, params.level_hi, axis_position(rng, seed, archetype, 0, stratum));
            sd = log_lerp(params.sd_lo, params.sd_hi, axis_position(rng, seed, archetype, 1, stratum));
            ar = lerp(params.ar_lo, params.ar_hi, axis_position(rng, seed, archetype, 2, stratum));
            break;
        case Archetype::rhythm: {
            if (params.template_min < 1 || params.template_max < params.template_min)
                throw ConfigError("invalid template length range");
            const std::size_t len =
                params.template_min + rng.below(params.template_max - params.template_min + 1);
            std::vector<double> t(len);
            for (double& x : t) x = rng.normal();
            const double mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(len);
            double peak = 0.0;
            for (double& x : t) {
                x -= mean;
                peak = std::max(peak, std::abs(x));
            }
            for (double& x : t) x = peak > 0.0 ? x / peak * params.template_amplitude * strength : 0.0;
            p.rhythm_template = std::move(t);
            break;
        }
        case Archetype::genre:
        case Archetype::genre_author: {
            const std::size_t groups = params.groups;
            p.group = group_of(author_id, stratum, groups);
            const double g = (static_cast<double>(p.group) + 0.5) / static_cast<double>(groups);
            level = lerp(params.group_level_lo, params.group_level_hi, g);
            p.arc_amplitude = strength * params.group_arc * (p.group % 2 == 0 ? 1.0 : -1.0);
            if (archetype == Archetype::genre_author) {
                sd = log_lerp(params.author_sd_lo, params.author_sd_hi,
                              axis_position(rng, seed, archetype, 1, stratum));
                ar = lerp(params.author_ar_lo, params.author_ar_hi, axis_position(rng, seed, archetype, 2, stratum));
            }
            break;
        }
        case Archetype::null_model: break;
    }
    p.base_level = lerp(params.base_level, level, strength);
    p.level_sd = lerp(params.level_sd, sd, strength);
    p.ar_coefficient = lerp(params.ar_coefficient, ar, strength);
    return p;
}

std::vector<double> gen_curve(const AuthorProfile& profile, std::size_t length, std::uint64_t seed) {
    if (length < 2) throw ConfigError("curve length must be at least 2");
    if (!(std::abs(profile.ar_coefficient) < 1.0)) throw ConfigError("AR coefficient must be in (-1, 1)");
    if (profile.level_sd < 0.0) throw ConfigError("level_sd must be non-negative");
    Rng rng(seed);
    const double mu = profile.base_level, phi = profile.ar_coefficient, sd = profile.level_sd;
    std::vector<double> x(length);
    x[0] = mu + sd * rng.normal() / std::sqrt(1.0 - phi * phi);
    for (std::size_t t = 1; t < length; ++t) x[t] = mu + phi * (x[t - 1] - mu) + sd * rng.normal();

    if (profile.arc_amplitude != 0.0) {
        const double span = static_cast<double>(length - 1);
        for (std::size_t t = 0; t < length; ++t)
            x[t] += profile.arc_amplitude * std::sin(std::numbers::pi * static_cast<double>(t) / span);
    }

    const auto& tmpl = profile.rhythm_template;
    if (!tmpl.empty()) {
        const std::size_t stretch = std::max<std::size_t>(1, profile.template_stretch);
        const std::size_t span = tmpl.size() * stretch;
        const std::size_t period = span + profile.template_gap;
        std::size_t offset = rng.below(period);
        while (offset < length) {
            for (std::size_t i = 0; i < span && offset + i < length; ++i) x[offset + i] += tmpl[i / stretch];
            // jitter of -1, 0 or +1 around the period
            offset += period - 1 + rng.below(3);
        }
    }
    for (double& v : x) v = std::clamp(v, 0.0, 2.0);
    return x;
}

namespace {

std::string author_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "author-%03zu", i);
    return buf;
}

std::string book_name(const std::string& author, std::size_t b) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "/book-%02zu", b);
    return author + buf;
}

}  // namespace

SynthCorpus gen_corpus(const SynthSpec& spec, unsigned threads) {
    if (spec.n_authors == 0 || spec.books_per_author == 0) throw ConfigError("corpus needs authors and books");
    if (spec.min_length < 2 || spec.max_length < spec.min_length) throw ConfigError("invalid curve length range");

    SynthCorpus out;
    out.profiles.resize(spec.n_authors);
    for (std::size_t a = 0; a < spec.n_authors; ++a)
        out.profiles[a] = gen_profile(author_name(a), spec.archetype, spec.strength, spec.seed, spec.params,
                                      Stratum{a, spec.n_authors});

    const std::size_t n = spec.n_authors * spec.books_per_author;
    auto& corpus = out.corpus;
    corpus.books.resize(n);
    corpus.curves.resize(n);
    corpus.filters_applied = {1, spec.min_length + 1};
    parallel_for(n, threads, [&](std::size_t i) {
        const auto& profile = out.profiles[i / spec.books_per_author];
        const std::string id = book_name(profile.author_id, i % spec.books_per_author);
        Rng len_rng(derive_seed(spec.seed, {"length", id}));
        const std::size_t length = spec.min_length + len_rng.below(spec.max_length - spec.min_length + 1);
        corpus.curves[i] = gen_curve(profile, length, derive_seed(spec.seed, {"curve", id}));
        BookMeta& m = corpus.books[i];
        m.book_id = id;
        m.author_id = profile.author_id;
        m.title = id.substr(profile.author_id.size() + 1);
        m.paragraph_count = length + 1;
        m.synthetic = true;
    });
    return out;
}

void write_synthetic_texts(const std::filesystem::path& dir, const CurveCorpus& corpus, std::uint64_t seed) {
    static constexpr const char* kSyllables[] = {"ka", "lo", "mi", "ren", "sa", "tu", "vel", "no", "dra", "pi",
                                                 "shen", "ta", "or", "bel", "qui", "an"};
    for (const auto& book : corpus.books) {
        const auto path = dir / book.author_id / (book.title + ".txt");
        std::filesystem::create_directories(path.parent_path());
        std::ofstream os(path, std::ios::binary);
        if (!os) throw InputError("cannot write " + path.string());
        Rng rng(derive_seed(seed, {"text", book.book_id}));
        for (std::size_t p = 0; p < book.paragraph_count; ++p) {
            const std::size_t words = 8 + rng.below(13);
            for (std::size_t w = 0; w < words; ++w) {
                if (w > 0) os << ' ';
                const std::size_t syl = 1 + rng.below(3);
                for (std::size_t s = 0; s < syl; ++s) os << kSyllables[rng.below(std::size(kSyllables))];
            }
            os << ".\n\n";
        }
    }
}

}  // namespace novfp
