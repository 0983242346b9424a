#include "novfp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "novfp/error.hpp"
#include "novfp/novelty.hpp"
#include "novfp/parallel.hpp"

namespace novfp {

SaxConfig ExperimentConfig::window_sax() const {
    SaxConfig w = sax;
    w.paa_segments = window_paa;
    w.window = window;
    w.stride = stride;
    return w;
}

void ExperimentConfig::validate() const {
    if (kind == FeatureKind::window_motifs || kind == FeatureKind::window_slopes) {
        window_sax().validate();
    } else {
        sax.validate();
    }
    if (n_null == 0) throw ConfigError("n_null must be positive");
    if (n_repeats == 0) throw ConfigError("n_repeats must be positive");
    if (topk == 0) throw ConfigError("topk must be positive");
    if (!(combined_weight >= 0.0) || !std::isfinite(combined_weight))
        throw ConfigError("combined weight must be a non-negative number");
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["feature_kind"] = to_string(c.kind);
    j["sax"] = c.sax;
    j["window"] = c.window;
    j["stride"] = c.stride ? nlohmann::json(*c.stride) : nlohmann::json(nullptr);
    j["window_paa"] = c.window_paa;
    j["drop_degenerate_windows"] = c.drop_degenerate_windows;
    j["combined_weight"] = c.combined_weight;
    j["method"] = to_string(c.method);
    j["n_null"] = c.n_null;
    j["n_repeats"] = c.n_repeats;
    j["topk"] = c.topk;
    j["min_books"] = c.min_books;
    j["min_paragraphs"] = c.min_paragraphs;
    j["seed"] = c.seed;
    return j;
}

std::size_t required_curve_length(const ExperimentConfig& config) {
    switch (config.kind) {
        case FeatureKind::scalars: return 3;
        case FeatureKind::sax_motifs:
        case FeatureKind::paa_vector: return std::max<std::size_t>(config.sax.paa_segments, 2);
        case FeatureKind::combined: return std::max<std::size_t>(config.sax.paa_segments, 3);
        case FeatureKind::window_motifs:
        case FeatureKind::window_slopes: return config.window;
    }
    return 2;
}

FeatureSet build_features(const CurveCorpus& corpus, const ExperimentConfig& config, unsigned threads) {
    config.validate();
    const std::size_t n = corpus.size();
    const std::size_t need = required_curve_length(config);
    for (std::size_t i = 0; i < n; ++i)
        if (corpus.curves[i].size() < need)
            throw InputError("curve too short for " + to_string(config.kind) + ": " + corpus.books[i].book_id);

    FeatureRows rows;
    for (const auto& b : corpus.books) {
        rows.book_ids.push_back(b.book_id);
        rows.author_ids.push_back(b.author_id);
    }
    std::vector<std::string> labels;
    const FeatureKind kind = config.kind;
    const bool dense = !is_motif_kind(kind);
    const bool motifs = is_motif_kind(kind) || kind == FeatureKind::combined;
    if (dense) rows.dense.resize(n);
    if (motifs) rows.motifs.resize(n);
    const SaxConfig wsax = config.window_sax();
    const std::size_t stride = kind == FeatureKind::window_slopes ? wsax.effective_stride() : 0;

    parallel_for(n, threads, [&](std::size_t i) {
        const auto& curve = corpus.curves[i];
        switch (kind) {
            case FeatureKind::scalars: {
                auto a = scalar_dynamics(curve).as_array();
                rows.dense[i].assign(a.begin(), a.end());
                break;
            }
            case FeatureKind::paa_vector: rows.dense[i] = paa(curve, config.sax.paa_segments); break;
            case FeatureKind::sax_motifs: rows.motifs[i] = sax_string(curve, config.sax).motifs; break;
            case FeatureKind::window_motifs:
                rows.motifs[i] = sliding_window_profile(curve, wsax, config.drop_degenerate_windows).motifs;
                break;
            case FeatureKind::window_slopes: {
                const auto slopes = window_slopes(curve, config.window, stride);
                double m = 0.0;
                for (double s : slopes) m += s;
                m /= static_cast<double>(slopes.size());
                double v = 0.0;
                for (double s : slopes) v += (s - m) * (s - m);
                rows.dense[i] = {m, std::sqrt(v / static_cast<double>(slopes.size()))};
                break;
            }
            case FeatureKind::combined: {
                auto a = scalar_dynamics(curve).as_array();
                auto prof = sax_string(curve, config.sax);
                rows.dense[i].assign(a.begin(), a.end());
                rows.dense[i].insert(rows.dense[i].end(), prof.paa.begin(), prof.paa.end());
                rows.motifs[i] = std::move(prof.motifs);
                break;
            }
        }
    });

    auto paa_labels = [&] {
        for (std::size_t j = 0; j < config.sax.paa_segments; ++j) labels.push_back("paa" + std::to_string(j));
    };
    switch (kind) {
        case FeatureKind::scalars:
            for (auto c : kScalarColumns) labels.emplace_back(c);
            break;
        case FeatureKind::paa_vector: paa_labels(); break;
        case FeatureKind::window_slopes: labels = {"slope_mean", "slope_std"}; break;
        case FeatureKind::combined:
            for (auto c : kScalarColumns) labels.emplace_back(c);
            paa_labels();
            break;
        default: break;
    }
    const bool windowed = kind == FeatureKind::window_motifs;
    return make_feature_set(kind, std::move(rows), std::move(labels), config.sax.alphabet,
                            windowed ? wsax.motif_length : config.sax.motif_length, config.combined_weight);
}

double ExperimentResult::times_chance() const {
    if (!attribution || attribution->n_candidates == 0) return 0.0;
    return attribution->top_k(1) / attribution->chance(1);
}

nlohmann::json ExperimentResult::to_json() const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["label"] = label;
    j["config"] = novfp::to_json(config);
    j["skipped"] = skipped;
    if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
    j["corpus_summary"] = {{"n_books", n_books}, {"n_authors", n_authors}};
    nlohmann::json agg;
    agg["n_fingerprinted"] = summary.n_authors;
    agg["pct_significant"] = summary.pct_significant;
    agg["mean_effect"] = summary.mean_effect;
    if (attribution) {
        agg["top1"] = attribution->top_k(1);
        agg["top5"] = attribution->top_k(5);
        agg["topk"] = {{"k", config.topk}, {"accuracy", attribution->top_k(config.topk)}};
        agg["times_chance"] = times_chance();
        agg["n_candidates"] = attribution->n_candidates;
        agg["excluded_authors"] = attribution->excluded_authors;
    } else {
        agg["top1"] = nullptr;
        agg["top5"] = nullptr;
        agg["times_chance"] = nullptr;
    }
    j["aggregate"] = agg;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& a : authors) {
        rows.push_back({{"author_id", a.author_id},
                        {"n_books", a.n_books},
                        {"effect", a.effect},
                        {"p", a.p_value},
                        {"significant", a.significant},
                        {"intra_mean", a.intra_mean},
                        {"null_mean", a.null_mean},
                        {"null_std", a.null_std},
                        {"null_degenerate", a.null_degenerate}});
    }
    j["authors"] = rows;
    return j;
}

std::string ExperimentResult::csv() const { return fingerprints_csv(authors); }

ExperimentResult run_experiment(const CurveCorpus& corpus, const std::string& experiment, const std::string& label,
                                const ExperimentConfig& config, unsigned threads) {
    config.validate();
    ExperimentResult r;
    r.experiment = experiment;
    r.label = label;
    r.config = config;

    const std::size_t min_books =
        std::max<std::size_t>(config.min_books, config.method == FingerprintMethod::split_half ? 4 : 2);
    const std::size_t min_len =
        std::max(required_curve_length(config), config.min_paragraphs > 0 ? config.min_paragraphs - 1 : 0);
    const CurveCorpus filtered = filter_curves(corpus, min_books, min_len);
    std::set<std::string> authors;
    for (const auto& b : filtered.books) authors.insert(b.author_id);
    r.n_books = filtered.size();
    r.n_authors = authors.size();
    if (authors.size() < 2) {
        r.skipped = true;
        r.diagnostic = "fewer than 2 authors with " + std::to_string(min_books) + "+ books of curve length >= " +
                       std::to_string(min_len);
        return r;
    }

    const FeatureSet fs = build_features(filtered, config, threads);
    if (config.run_fingerprint) {
        FingerprintOptions opts;
        opts.n_null = config.n_null;
        opts.n_repeats = config.n_repeats;
        opts.seed = config.seed;
        opts.stream = experiment + "/" + label;
        r.authors = fingerprint_all(fs, config.method, opts, min_books, threads);
        r.summary = summarize(r.authors);
    }
    if (config.run_attribution) r.attribution = attribute_all(fs, threads);
    return r;
}

std::vector<ExperimentResult> run_baseline(const CurveCorpus& corpus, const ExperimentConfig& base, unsigned threads) {
    return {run_experiment(corpus, "baseline", to_string(base.kind), base, threads)};
}

std::vector<ExperimentResult> run_resolution_sweep(const CurveCorpus& corpus, const ExperimentConfig& base,
                                                   unsigned threads,
                                                   const std::vector<std::pair<std::size_t, std::size_t>>& grid) {
    std::size_t max_w = 0;
    for (const auto& [w, k] : grid) max_w = std::max(max_w, w);
    const CurveCorpus eligible = filter_curves(corpus, 1, max_w);
    std::vector<ExperimentResult> out;
    for (const auto& [w, k] : grid) {
        ExperimentConfig c = base;
        c.kind = FeatureKind::sax_motifs;
        c.sax.paa_segments = w;
        c.sax.motif_length = k;
        out.push_back(run_experiment(eligible, "resolution",
                                     "w" + std::to_string(w) + "_k" + std::to_string(k), c, threads));
    }
    return out;
}

std::vector<ExperimentResult> run_multifeature(const CurveCorpus& corpus, const ExperimentConfig& base,
                                               unsigned threads) {
    std::vector<ExperimentResult> out;
    for (auto kind : {FeatureKind::sax_motifs, FeatureKind::scalars, FeatureKind::paa_vector, FeatureKind::combined}) {
        ExperimentConfig c = base;
        c.kind = kind;
        out.push_back(run_experiment(corpus, "multifeature", to_string(kind), c, threads));
    }
    return out;
}

std::vector<ExperimentResult> run_windows(const CurveCorpus& corpus, const ExperimentConfig& base, unsigned threads,
                                          const std::vector<std::size_t>& windows) {
    std::size_t max_w = 0;
    for (std::size_t w : windows) max_w = std::max(max_w, w);
    const CurveCorpus eligible = filter_curves(corpus, 1, max_w);
    std::vector<ExperimentResult> out;
    for (std::size_t w : windows) {
        ExperimentConfig c = base;
        c.kind = FeatureKind::window_motifs;
        c.method = FingerprintMethod::split_half;
        c.window = w;
        out.push_back(run_experiment(eligible, "windows", "W" + std::to_string(w), c, threads));

        ExperimentConfig s = c;
        s.kind = FeatureKind::window_slopes;
        s.run_fingerprint = false;
        out.push_back(run_experiment(eligible, "windows", "W" + std::to_string(w) + "_slopes", s, threads));
    }
    return out;
}

}  // namespace novfp
