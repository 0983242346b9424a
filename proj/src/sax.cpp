#include "novfp/sax.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "novfp/error.hpp"

namespace novfp {

void SaxConfig::validate() const {
    if (paa_segments < 2) throw ConfigError("PAA segments must be at least 2");
    if (alphabet < 2 || alphabet > 20) throw ConfigError("alphabet size must be in [2, 20]");
    if (motif_length < 1 || motif_length > paa_segments)
        throw ConfigError("motif length k=" + std::to_string(motif_length) + " must be in [1, w=" +
                          std::to_string(paa_segments) + "]");
    double space = std::pow(static_cast<double>(alphabet), static_cast<double>(motif_length));
    if (space > 9.0e15) throw ConfigError("alphabet^k too large for a motif index");
    if (window) {
        if (*window < 2) throw ConfigError("window size must be at least 2");
        if (!stride && *window % 2 != 0) throw ConfigError("window size must be even when stride defaults to W/2");
        if (stride && *stride == 0) throw ConfigError("stride must be positive");
    }
}

std::size_t SaxConfig::effective_stride() const {
    if (!window) return 0;
    return stride ? *stride : *window / 2;
}

std::uint64_t SaxConfig::motif_space() const {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < motif_length; ++i) s *= static_cast<std::uint64_t>(alphabet);
    return s;
}

void to_json(nlohmann::json& j, const SaxConfig& c) {
    j = {{"paa_segments", c.paa_segments}, {"alphabet", c.alphabet}, {"motif_length", c.motif_length}};
    j["window"] = c.window ? nlohmann::json(*c.window) : nlohmann::json(nullptr);
    j["stride"] = c.stride ? nlohmann::json(*c.stride) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, SaxConfig& c) {
    c.paa_segments = j.at("paa_segments").get<std::size_t>();
    c.alphabet = j.at("alphabet").get<int>();
    c.motif_length = j.at("motif_length").get<std::size_t>();
    c.window.reset();
    c.stride.reset();
    if (j.contains("window") && !j["window"].is_null()) c.window = j["window"].get<std::size_t>();
    if (j.contains("stride") && !j["stride"].is_null()) c.stride = j["stride"].get<std::size_t>();
}

std::vector<double> paa(std::span<const double> series, std::size_t w) {
    const std::size_t n = series.size();
    if (n == 0) throw InputError("paa: empty series");
    if (w == 0) throw ConfigError("paa: w must be positive");
    // Work in units scaled by w: point i spans [i w, (i+1) w), segment j
    // spans [j n, (j+1) n). Overlaps are exact integers; each segment has
    // total weight n.
    std::vector<double> out(w);
    const auto W = static_cast<std::uint64_t>(w);
    const auto N = static_cast<std::uint64_t>(n);
    for (std::uint64_t j = 0; j < W; ++j) {
        const std::uint64_t lo = j * N, hi = (j + 1) * N;
        const std::uint64_t first = lo / W;
        const std::uint64_t last = (hi + W - 1) / W;  // exclusive
        double acc = 0.0;
        for (std::uint64_t i = first; i < last && i < N; ++i) {
            const std::uint64_t overlap = std::min(hi, (i + 1) * W) - std::max(lo, i * W);
            acc += static_cast<double>(overlap) * series[i];
        }
        out[j] = acc / static_cast<double>(N);
    }
    return out;
}

ZNormResult znorm(std::span<const double> v) {
    if (v.empty()) throw InputError("znorm: empty vector");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(v.size()));
    ZNormResult r;
    if (sd < 1e-12) {
        r.values.assign(v.size(), 0.0);
        r.degenerate = true;
        return r;
    }
    r.values.reserve(v.size());
    for (double x : v) r.values.push_back((x - mean) / sd);
    return r;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("normal_quantile: p must lie in (0, 1)");
    // Acklam's rational approximation (relative error ~1e-9) ...
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // ... polished with Halley steps against erfc.
    for (int it = 0; it < 2; ++it) {
        const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

std::vector<double> breakpoints(int alphabet) {
    if (alphabet < 2 || alphabet > 20) throw ConfigError("alphabet size must be in [2, 20]");
    std::vector<double> bp(static_cast<std::size_t>(alphabet - 1));
    for (int j = 1; j < alphabet; ++j) {
        // Exact symmetry: the median is 0 and b_j = -b_{alpha-j}.
        if (2 * j == alphabet)
            bp[j - 1] = 0.0;
        else if (2 * j < alphabet)
            bp[j - 1] = normal_quantile(static_cast<double>(j) / alphabet);
        else
            bp[j - 1] = -bp[alphabet - j - 1];
    }
    return bp;
}

namespace {

const std::vector<double>& cached_breakpoints(int alphabet) {
    static const auto table = [] {
        std::vector<std::vector<double>> t(21);
        for (int a = 2; a <= 20; ++a) t[a] = breakpoints(a);
        return t;
    }();
    if (alphabet < 2 || alphabet > 20) throw ConfigError("alphabet size must be in [2, 20]");
    return table[alphabet];
}

}  // namespace

std::vector<std::uint8_t> discretize(std::span<const double> z, int alphabet) {
    const auto& bp = cached_breakpoints(alphabet);
    std::vector<std::uint8_t> out;
    out.reserve(z.size());
    for (double v : z) {
        if (!std::isfinite(v)) throw InputError("discretize: non-finite value");
        out.push_back(static_cast<std::uint8_t>(std::upper_bound(bp.begin(), bp.end(), v) - bp.begin()));
    }
    return out;
}

std::string render_symbols(std::span<const std::uint8_t> symbols) {
    std::string s;
    s.reserve(symbols.size());
    for (auto c : symbols) s.push_back(static_cast<char>('a' + c));
    return s;
}

MotifCounts extract_motifs(std::span<const std::uint8_t> symbols, int alphabet, std::size_t k) {
    if (k == 0) throw ConfigError("motif length must be positive");
    if (symbols.size() < k)
        throw InputError("SAX string of length " + std::to_string(symbols.size()) + " is shorter than k=" +
                         std::to_string(k));
    const auto base = static_cast<std::uint64_t>(alphabet);
    std::vector<std::uint64_t> idx;
    idx.reserve(symbols.size() - k + 1);
    for (std::size_t i = 0; i + k <= symbols.size(); ++i) {
        std::uint64_t v = 0;
        for (std::size_t j = 0; j < k; ++j) v = v * base + symbols[i + j];
        idx.push_back(v);
    }
    std::sort(idx.begin(), idx.end());
    MotifCounts m;
    m.total = idx.size();
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && idx[j] == idx[i]) ++j;
        m.entries.emplace_back(idx[i], j - i);
        i = j;
    }
    return m;
}

void merge_counts(MotifCounts& into, const MotifCounts& other) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> merged;
    merged.reserve(into.entries.size() + other.entries.size());
    auto a = into.entries.cbegin();
    auto b = other.entries.cbegin();
    while (a != into.entries.cend() || b != other.entries.end()) {
        if (b == other.entries.end() || (a != into.entries.cend() && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == into.entries.cend() || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            merged.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    into.entries = std::move(merged);
    into.total += other.total;
}

SaxProfile sax_string(std::span<const double> series, const SaxConfig& config) {
    config.validate();
    if (series.size() < 2) throw InputError("sax_string: series needs at least 2 values");
    SaxProfile p;
    p.config = config;
    p.paa = paa(series, config.paa_segments);
    const auto z = znorm(p.paa);
    p.degenerate = z.degenerate;
    p.symbols = discretize(z.values, config.alphabet);
    p.motifs = extract_motifs(p.symbols, config.alphabet, config.motif_length);
    return p;
}

std::vector<std::size_t> window_offsets(std::size_t length, std::size_t window, std::size_t stride) {
    if (window == 0 || stride == 0) throw ConfigError("window and stride must be positive");
    if (length < window)
        throw InputError("curve of length " + std::to_string(length) + " is shorter than window " +
                         std::to_string(window));
    std::vector<std::size_t> offs;
    for (std::size_t o = 0; o + window <= length; o += stride) offs.push_back(o);
    if (offs.back() + window != length) offs.push_back(length - window);
    return offs;
}

SaxProfile sliding_window_profile(std::span<const double> curve, const SaxConfig& config, bool drop_degenerate) {
    config.validate();
    if (!config.window) throw ConfigError("sliding_window_profile requires a window size");
    const std::size_t w = *config.window;
    SaxConfig per_window = config;
    per_window.window.reset();
    per_window.stride.reset();

    SaxProfile p;
    p.config = config;
    for (std::size_t off : window_offsets(curve.size(), w, config.effective_stride())) {
        const auto wp = sax_string(curve.subspan(off, w), per_window);
        ++p.window_count;
        if (wp.degenerate) {
            ++p.degenerate_windows;
            if (drop_degenerate) continue;
        }
        merge_counts(p.motifs, wp.motifs);
    }
    p.degenerate = p.degenerate_windows == p.window_count;
    return p;
}

std::vector<double> window_slopes(std::span<const double> curve, std::size_t window, std::size_t stride) {
    if (window < 2) throw ConfigError("slope windows need at least 2 points");
    std::vector<double> out;
    const double mid = static_cast<double>(window - 1) / 2.0;
    double sxx = 0.0;
    for (std::size_t t = 0; t < window; ++t) sxx += (t - mid) * (t - mid);
    for (std::size_t off : window_offsets(curve.size(), window, stride)) {
        double sxy = 0.0;
        for (std::size_t t = 0; t < window; ++t) sxy += (t - mid) * curve[off + t];
        out.push_back(sxy / sxx);
    }
    return out;
}

nlohmann::json profile_to_json(const SaxProfile& p) {
    nlohmann::json motifs = nlohmann::json::object();
    for (const auto& [idx, count] : p.motifs.entries) motifs[std::to_string(idx)] = count;
    return {{"book_id", p.book_id},
            {"config", p.config},
            {"paa", p.paa},
            {"sax", render_symbols(p.symbols)},
            {"motifs", motifs},
            {"motif_total", p.motifs.total},
            {"degenerate", p.degenerate},
            {"window_count", p.window_count},
            {"degenerate_windows", p.degenerate_windows}};
}

SaxProfile profile_from_json(const nlohmann::json& j) {
    SaxProfile p;
    p.book_id = j.at("book_id").get<std::string>();
    p.config = j.at("config").get<SaxConfig>();
    p.paa = j.at("paa").get<std::vector<double>>();
    for (char c : j.at("sax").get<std::string>()) p.symbols.push_back(static_cast<std::uint8_t>(c - 'a'));
    for (const auto& [key, count] : j.at("motifs").items())
        p.motifs.entries.emplace_back(std::stoull(key), count.get<std::uint64_t>());
    std::sort(p.motifs.entries.begin(), p.motifs.entries.end());
    p.motifs.total = j.value("motif_total", std::uint64_t{0});
    p.degenerate = j.at("degenerate").get<bool>();
    p.window_count = j.value("window_count", std::size_t{0});
    p.degenerate_windows = j.value("degenerate_windows", std::size_t{0});
    return p;
}

}  // namespace novfp
