// novfp command-line interface.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "novfp/cluster.hpp"
#include "novfp/corpus.hpp"
#include "novfp/curve_corpus.hpp"
#include "novfp/embed.hpp"
#include "novfp/error.hpp"
#include "novfp/experiments.hpp"
#include "novfp/features.hpp"
#include "novfp/fingerprint.hpp"
#include "novfp/novelty.hpp"
#include "novfp/parallel.hpp"
#include "novfp/rng.hpp"
#include "novfp/sax.hpp"
#include "novfp/store.hpp"
#include "novfp/svg.hpp"
#include "novfp/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace novfp;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::string corpus;
    std::string out = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 0;

    std::size_t paa = 16;
    int alphabet = 5;
    std::size_t kgram = 4;
    std::vector<std::size_t> windows;
    std::optional<std::size_t> stride;
    std::size_t window_paa = 8;
    bool drop_degenerate = false;

    std::size_t n_null = 200;
    std::size_t n_repeats = 50;
    std::size_t topk = 5;
    std::optional<std::size_t> min_books;
    std::size_t min_paragraphs = 2;
    std::string feature_kind = "sax";
    std::string method = "loo";
    std::string experiment = "baseline";
    double combined_weight = 1.0;

    // ingest / embed
    std::size_t min_chars = 20;
    std::string backend = "pseudo";
    std::size_t dim = 64;
    std::size_t batch = 64;
    std::string endpoint;

    // cluster
    std::size_t k_min = 2, k_max = 10;

    // synth
    std::string archetype = "null";
    std::size_t authors = 200;
    std::size_t books = 6;
    std::size_t min_length = 150;
    std::size_t max_length = 400;
    double strength = 1.0;
    std::size_t template_stretch = 1;
    std::size_t template_min = 0, template_max = 0;
    bool emit_text = false;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw InputError("cannot write " + p.string());
    os << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

fs::path require_dir(const std::string& corpus) {
    if (corpus.empty()) throw ConfigError("--corpus is required");
    fs::path p(corpus);
    if (!fs::is_directory(p)) throw InputError("corpus directory not found: " + corpus);
    return p;
}

/// Records inputs and timing; writes run-<name>.json next to the outputs.
class RunManifest {
public:
    RunManifest(std::string subcommand, const Options& o) : subcommand_(std::move(subcommand)), opts_(o) {
        start_ = std::chrono::steady_clock::now();
        if (!o.seed_given) std::cerr << "novfp: using default seed " << o.seed << "\n";
    }

    void input(const fs::path& p) {
        if (fs::exists(p)) inputs_[p.string()] = hex64(fnv1a64(read_file(p)));
    }
    void output(const fs::path& p) { outputs_.push_back(p.string()); }
    void config(json c) { config_ = std::move(c); }

    void write(const fs::path& dir) const {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json j;
        j["tool"] = "novfp";
        j["version"] = kVersion;
        j["subcommand"] = subcommand_;
        j["seed"] = opts_.seed;
        j["threads"] = resolve_threads(opts_.threads);
        j["corpus"] = opts_.corpus;
        j["out"] = opts_.out;
        j["config"] = config_;
        j["inputs"] = inputs_;
        j["outputs"] = outputs_;
        j["duration_s"] = secs;
        write_json(dir / ("run-" + subcommand_ + ".json"), j);
    }

private:
    std::string subcommand_;
    const Options& opts_;
    std::chrono::steady_clock::time_point start_;
    std::map<std::string, std::string> inputs_;
    std::vector<std::string> outputs_;
    json config_ = json::object();
};

ExperimentConfig experiment_config(const Options& o, std::size_t default_min_books) {
    ExperimentConfig c;
    c.kind = parse_feature_kind(o.feature_kind);
    c.sax.paa_segments = o.paa;
    c.sax.alphabet = o.alphabet;
    c.sax.motif_length = o.kgram;
    c.window = o.windows.empty() ? 20 : o.windows.front();
    c.stride = o.stride;
    c.window_paa = o.window_paa;
    c.drop_degenerate_windows = o.drop_degenerate;
    c.combined_weight = o.combined_weight;
    c.method = parse_fingerprint_method(o.method);
    c.n_null = o.n_null;
    c.n_repeats = o.n_repeats;
    c.topk = o.topk;
    c.min_books = o.min_books.value_or(default_min_books);
    c.min_paragraphs = o.min_paragraphs;
    c.seed = o.seed;
    if (c.n_null < 100) std::cerr << "novfp: warning: n_null below 100 gives coarse p-values\n";
    c.validate();
    return c;
}

std::string result_stem(const ExperimentResult& r) { return r.experiment + "-" + r.label; }

void write_results(const fs::path& out, const std::vector<ExperimentResult>& results, RunManifest& run) {
    for (const auto& r : results) {
        const auto stem = out / result_stem(r);
        write_json(stem.string() + ".json", r.to_json());
        write_text(stem.string() + ".csv", r.csv());
        run.output(stem.string() + ".json");
        if (r.skipped) std::cerr << "novfp: skipped " << result_stem(r) << ": " << r.diagnostic << "\n";
    }
}

// ---------------------------------------------------------------- subcommands

void cmd_ingest(const Options& o) {
    const fs::path root = require_dir(o.corpus);
    const fs::path out(o.out);
    RunManifest run("ingest", o);
    run.config({{"min_chars", o.min_chars},
                {"min_books", o.min_books.value_or(1)},
                {"min_paragraphs", o.min_paragraphs}});
    auto result = ingest_directory(root, SegmentOptions{o.min_chars}, o.threads);
    for (const auto& d : result.diagnostics) std::cerr << "novfp: " << d << "\n";
    const auto filtered = filter_corpus(result.manifest, o.min_books.value_or(1), o.min_paragraphs);
    fs::create_directories(out);
    write_manifest(manifest_path(out), filtered);
    run.output(manifest_path(out));
    run.write(out);
    std::cout << "ingested " << filtered.books.size() << " of " << result.manifest.books.size() << " books\n";
}

void cmd_embed(const Options& o) {
    const fs::path in = require_dir(o.corpus);
    const fs::path out(o.out);
    RunManifest run("embed", o);
    run.input(manifest_path(in));
    const auto manifest = read_manifest(manifest_path(in));

    std::unique_ptr<EmbeddingBackend> backend;
    EmbedOptions eo;
    eo.batch = o.batch;
    eo.dim = o.dim;
    if (o.backend == "pseudo") {
        backend = std::make_unique<PseudoBackend>(o.dim, o.seed);
    } else if (o.backend == "http") {
        auto hc = HttpConfig::from_env();
        if (!o.endpoint.empty()) hc.endpoint = o.endpoint;
        if (hc.endpoint.empty()) throw ConfigError("http backend needs --endpoint or EMBED_ENDPOINT");
        eo.batch = hc.batch;
        eo.dim = hc.dim;
        backend = std::make_unique<HttpBackend>(hc);
    } else {
        throw ConfigError("unknown backend: " + o.backend);
    }
    run.config({{"backend", o.backend}, {"dim", eo.dim}, {"batch", eo.batch}, {"min_chars", o.min_chars}});

    const fs::path emb_dir = out / "embeddings";
    fs::create_directories(emb_dir);
    std::vector<std::string> names(manifest.books.size());
    parallel_for(manifest.books.size(), o.threads, [&](std::size_t i) {
        const auto& meta = manifest.books[i];
        const auto book = load_book(meta.source_path, meta.author_id, meta.book_id, SegmentOptions{o.min_chars});
        if (book.paragraph_count() != meta.paragraph_count)
            throw InputError("paragraph count changed since ingest: " + meta.book_id);
        const auto m = embed_book(book, *backend, eo);
        names[i] = store::safe_name(meta.book_id) + ".bin";
        write_embeddings(emb_dir / names[i], m);
    });
    std::map<std::string, std::string> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[manifest.books[i].book_id] = names[i];
    store::write_index(emb_dir / "index.json", index);
    write_manifest(manifest_path(out), manifest);
    run.output(emb_dir / "index.json");
    run.write(out);
    std::cout << "embedded " << manifest.books.size() << " books\n";
}

void cmd_novelty(const Options& o) {
    const fs::path in = require_dir(o.corpus);
    const fs::path out(o.out);
    RunManifest run("novelty", o);
    run.input(manifest_path(in));
    run.input(in / "embeddings" / "index.json");
    const auto manifest = read_manifest(manifest_path(in));
    const auto index = store::read_index(in / "embeddings" / "index.json");

    CurveCorpus corpus;
    corpus.books = manifest.books;
    corpus.filters_applied = manifest.filters_applied;
    corpus.curves.resize(manifest.books.size());
    std::vector<ScalarDynamics> scalars(manifest.books.size());
    parallel_for(manifest.books.size(), o.threads, [&](std::size_t i) {
        const auto& id = manifest.books[i].book_id;
        auto it = index.find(id);
        if (it == index.end()) throw InputError("no embeddings for book: " + id);
        const auto m = read_embeddings(in / "embeddings" / it->second, id);
        corpus.curves[i] = novelty_curve(m).values;
        scalars[i] = scalar_dynamics(corpus.curves[i]);
    });
    save_curve_corpus(out, corpus);
    std::vector<std::string> ids;
    for (const auto& b : corpus.books) ids.push_back(b.book_id);
    write_text(out / "scalars.csv", scalars_csv(ids, scalars));
    write_text(out / "scalars.json", scalars_json(ids, scalars));
    run.output(curve_index_path(out));
    run.output(out / "scalars.csv");
    run.write(out);
    std::cout << "computed " << corpus.size() << " novelty curves\n";
}

void cmd_features(const Options& o) {
    const fs::path in = require_dir(o.corpus);
    const fs::path out(o.out);
    RunManifest run("features", o);
    run.input(manifest_path(in));
    run.input(curve_index_path(in));
    const auto cfg = experiment_config(o, 1);
    run.config(to_json(cfg));
    const auto corpus = filter_curves(load_curve_corpus(in), 1, required_curve_length(cfg));
    const std::string kind = to_string(cfg.kind);

    json books = json::array();
    if (cfg.kind == FeatureKind::sax_motifs || cfg.kind == FeatureKind::window_motifs) {
        std::vector<json> rows(corpus.size());
        const SaxConfig sc = cfg.kind == FeatureKind::sax_motifs ? cfg.sax : cfg.window_sax();
        parallel_for(corpus.size(), o.threads, [&](std::size_t i) {
            auto p = cfg.kind == FeatureKind::sax_motifs
                         ? sax_string(corpus.curves[i], sc)
                         : sliding_window_profile(corpus.curves[i], sc, cfg.drop_degenerate_windows);
            p.book_id = corpus.books[i].book_id;
            rows[i] = profile_to_json(p);
            rows[i]["author_id"] = corpus.books[i].author_id;
        });
        for (auto& r : rows) books.push_back(std::move(r));
    } else {
        const auto fset = build_features(corpus, cfg, o.threads);
        for (std::size_t i = 0; i < fset.size(); ++i) {
            std::vector<double> raw(fset.dense_dim);
            for (std::size_t d = 0; d < fset.dense_dim; ++d)
                raw[d] = fset.row(i)[d] * fset.scale[d] + fset.center[d];
            books.push_back({{"book_id", fset.book_ids[i]}, {"author_id", fset.author_ids[i]}, {"values", raw}});
        }
        json labels = fset.dense_labels;
        write_json(out / ("features-" + kind + "-columns.json"), labels);
    }
    json doc{{"feature_kind", kind}, {"config", to_json(cfg)}, {"books", books}};
    write_json(out / ("features-" + kind + ".json"), doc);
    run.output(out / ("features-" + kind + ".json"));

    // Per-dimension author discrimination, when the corpus supports it.
    try {
        const auto fset = build_features(corpus, cfg, o.threads);
        const auto fr = fisher_ratios(fset);
        json rows = json::array();
        for (std::size_t d = 0; d < fr.labels.size(); ++d)
            rows.push_back({{"dimension", fr.labels[d]},
                            {"ratio", fr.infinite[d] ? json(nullptr) : json(fr.ratio[d])},
                            {"zero_within_variance", fr.infinite[d]}});
        write_json(out / ("fisher-" + kind + ".json"), rows);
        run.output(out / ("fisher-" + kind + ".json"));
    } catch (const InputError& e) {
        std::cerr << "novfp: fisher ratios skipped: " << e.what() << "\n";
    }
    run.write(out);
    std::cout << "extracted " << kind << " features for " << corpus.size() << " books\n";
}

void cmd_fingerprint(const Options& o) {
    const fs::path in = require_dir(o.corpus);
    const fs::path out(o.out);
    RunManifest run("fingerprint", o);
    run.input(manifest_path(in));
    run.input(curve_index_path(in));
    const auto cfg = experiment_config(o, 5);
    run.config({{"experiment", o.experiment}, {"base", to_json(cfg)}});
    const auto corpus = load_curve_corpus(in);
    std::vector<ExperimentResult> results;
    if (o.experiment == "baseline")
        results = run_baseline(corpus, cfg, o.threads);
    else if (o.experiment == "resolution")
        results = run_resolution_sweep(corpus, cfg, o.threads);
    else if (o.experiment == "multifeature")
        results = run_multifeature(corpus, cfg, o.threads);
    else
        throw ConfigError("unknown experiment: " + o.experiment);
    write_results(out, results, run);
    run.write(out);
    for (const auto& r : results)
        if (!r.skipped)
            std::cout << result_stem(r) << ": " << r.summary.pct_significant << "% significant, top1 " << r.top1()
                      << " (" << r.times_chance() << "x chance)\n";
}

void cmd_attribute(const Options& o) {
    const fs::path in = require_dir(o.corpus);
    const fs::path out(o.out);
    RunManifest run("attribute", o);
    run.input(manifest_path(in));
    run.input(curve_index_path(in));
    auto cfg = experiment_config(o, 2);
    cfg.run_fingerprint = false;
    run.config(to_json(cfg));
    const auto corpus = load_curve_corpus(in);
    const auto r = run_experiment(corpus, "attribution", to_string(cfg.kind), cfg, o.threads);
    json j = r.to_json();
    if (r.attribution) {
        const auto& a = *r.attribution;
        json curve = json::array();
        for (std::size_t k = 1; k <= a.n_candidates; ++k) curve.push_back(a.top_k(k));
        j["topk_curve"] = curve;
        json books = json::array();
        for (std::size_t i = 0; i < a.ranks.size(); ++i)
            books.push_back({{"book_id", a.book_ids[i]}, {"author_id", a.author_ids[i]}, {"rank", a.ranks[i]}});
        j["books"] = books;
        std::cout << "top1 " << a.top_k(1) << ", top" << cfg.topk << " " << a.top_k(cfg.topk) << " ("
                  << r.times_chance() << "x chance)\n";
    } else {
        std::cerr << "novfp: skipped: " << r.diagnostic << "\n";
    }
    write_json(out / ("attribution-" + to_string(cfg.kind) + ".json"), j);
    run.output(out / ("attribution-" + to_string(cfg.kind) + ".json"));
    run.write(out);
}

void cmd_windows(const Options& o) {
    const fs::path in = require_dir(o.corpus);
    const fs::path out(o.out);
    RunManifest run("windows", o);
    run.input(manifest_path(in));
    run.input(curve_index_path(in));
    Options wo = o;
    wo.feature_kind = "windows";
    const auto grid = o.windows.empty() ? kWindowGrid : o.windows;
    for (std::size_t w : grid) {
        wo.windows = {w};
        experiment_config(wo, 5);  // validates every grid point up front
    }
    wo.windows = grid;
    const auto cfg = experiment_config(wo, 5);
    run.config({{"windows", grid}, {"base", to_json(cfg)}});
    const auto results = run_windows(load_curve_corpus(in), cfg, o.threads, grid);
    write_results(out, results, run);
    run.write(out);
    for (const auto& r : results)
        if (!r.skipped)
            std::cout << result_stem(r) << ": top1 " << r.top1() << " (" << r.times_chance() << "x chance)\n";
}

void cmd_cluster(const Options& o) {
    const fs::path in = require_dir(o.corpus);
    const fs::path out(o.out);
    RunManifest run("cluster", o);
    run.input(manifest_path(in));
    run.input(curve_index_path(in));
    const auto cfg = experiment_config(o, 3);
    run.config({{"k_min", o.k_min}, {"k_max", o.k_max}, {"cluster_paa", o.paa}, {"fingerprint", to_json(cfg)}});
    const auto corpus = filter_curves(load_curve_corpus(in), 1, std::max(o.paa, required_curve_length(cfg)));
    auto model = select_k(paa_profiles(corpus, o.paa, o.threads), o.k_min, o.k_max, o.seed, {}, o.threads);
    for (const auto& b : corpus.books) model.book_ids.push_back(b.book_id);
    const auto report = within_cluster_fingerprints(model, corpus, cfg, cfg.min_books, o.threads);
    json j = report.to_json();
    json assign = json::object();
    for (std::size_t i = 0; i < model.book_ids.size(); ++i) assign[model.book_ids[i]] = model.assignments[i];
    j["assignments"] = assign;
    write_json(out / "cluster-report.json", j);
    run.output(out / "cluster-report.json");
    run.write(out);
    std::cout << "k = " << report.k << ", silhouette " << report.silhouette << ", within-cluster "
              << report.pooled_pct_significant() << "% significant\n";
}

void cmd_synth(const Options& o) {
    const fs::path out(o.out);
    RunManifest run("synth", o);
    SynthSpec spec;
    spec.n_authors = o.authors;
    spec.books_per_author = o.books;
    spec.min_length = o.min_length;
    spec.max_length = o.max_length;
    spec.archetype = parse_archetype(o.archetype);
    spec.strength = o.strength;
    spec.seed = o.seed;
    spec.params.template_stretch = o.template_stretch;
    if (o.template_min > 0) spec.params.template_min = o.template_min;
    if (o.template_max > 0) spec.params.template_max = o.template_max;
    run.config({{"archetype", o.archetype},
                {"authors", o.authors},
                {"books", o.books},
                {"min_length", o.min_length},
                {"max_length", o.max_length},
                {"strength", o.strength},
                {"template_stretch", spec.params.template_stretch},
                {"template_min", spec.params.template_min},
                {"template_max", spec.params.template_max},
                {"emit_text", o.emit_text}});
    const auto synth = gen_corpus(spec, o.threads);
    save_curve_corpus(out, synth.corpus);
    json profiles = json::array();
    for (const auto& p : synth.profiles)
        profiles.push_back({{"author_id", p.author_id},
                            {"base_level", p.base_level},
                            {"level_sd", p.level_sd},
                            {"ar_coefficient", p.ar_coefficient},
                            {"rhythm_template", p.rhythm_template},
                            {"template_stretch", p.template_stretch},
                            {"arc_amplitude", p.arc_amplitude},
                            {"strength", p.strength},
                            {"group", p.group}});
    write_json(out / "profiles.json", profiles);
    if (o.emit_text) write_synthetic_texts(out / "texts", synth.corpus, o.seed);
    run.output(curve_index_path(out));
    run.write(out);
    std::cout << "generated " << synth.corpus.size() << " books by " << o.authors << " authors\n";
}

void cmd_report(const Options& o) {
    const fs::path in = require_dir(o.corpus);
    const fs::path out(o.out);
    RunManifest run("report", o);
    std::vector<json> results;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(in))
        if (e.path().extension() == ".json" && e.path().filename().string().rfind("run-", 0) != 0)
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        json j;
        try {
            j = json::parse(read_file(f));
        } catch (const json::parse_error&) {
            continue;
        }
        if (j.is_object() && j.contains("experiment") && j.contains("aggregate")) {
            run.input(f);
            results.push_back(std::move(j));
        }
    }
    if (results.empty()) throw InputError("no results JSON found in " + in.string());

    auto value = [](const json& j) { return j.is_number() ? j.get<double>() : 0.0; };
    std::ostringstream table;
    table << "experiment,label,n_books,n_authors,pct_significant,mean_effect,top1,top5,times_chance\n";
    for (const auto& r : results) {
        const auto& a = r["aggregate"];
        table << r["experiment"].get<std::string>() << ',' << r.value("label", "") << ','
              << r["corpus_summary"]["n_books"] << ',' << r["corpus_summary"]["n_authors"] << ','
              << value(a["pct_significant"]) << ',' << value(a["mean_effect"]) << ',' << value(a["top1"]) << ','
              << value(a["top5"]) << ',' << value(a["times_chance"]) << "\n";
    }
    write_text(out / "summary.csv", table.str());
    run.output(out / "summary.csv");

    std::vector<double> effects;
    for (const auto& r : results)
        if (r["experiment"] == "baseline")
            for (const auto& a : r["authors"]) effects.push_back(value(a["effect"]));
    if (!effects.empty()) {
        write_text(out / "effect_histogram.svg",
                   svg::histogram(effects, 30, "Per-author fingerprint effect size", "effect size"));
        run.output(out / "effect_histogram.svg");
    }

    std::map<std::size_t, svg::Series> by_k;
    for (const auto& r : results) {
        if (r["experiment"] != "resolution" || r.value("skipped", false)) continue;
        const auto& sax = r["config"]["sax"];
        const std::size_t k = sax["motif_length"].get<std::size_t>();
        auto& s = by_k[k];
        s.name = "k = " + std::to_string(k);
        s.x.push_back(sax["paa_segments"].get<double>());
        s.y.push_back(value(r["aggregate"]["pct_significant"]));
    }
    if (!by_k.empty()) {
        std::vector<svg::Series> series;
        for (auto& [k, s] : by_k) series.push_back(s);
        write_text(out / "resolution.svg",
                   svg::line_chart(series, "Significance vs SAX resolution", "PAA segments", "% significant"));
        run.output(out / "resolution.svg");
    }

    std::vector<svg::Bar> bars;
    for (const auto& r : results) {
        if ((r["experiment"] != "windows" && r["experiment"] != "multifeature") || r.value("skipped", false))
            continue;
        bars.push_back({r.value("label", ""), value(r["aggregate"]["times_chance"])});
    }
    if (!bars.empty()) {
        write_text(out / "multiscale.svg", svg::bar_chart(bars, "Attribution by feature scale", "x chance"));
        run.output(out / "multiscale.svg");
    }
    run.write(out);
    std::cout << "summarized " << results.size() << " result files\n";
}

void add_common(CLI::App* app, Options& o, bool needs_corpus) {
    if (needs_corpus) app->add_option("--corpus", o.corpus, "Input directory")->required();
    app->add_option("--out", o.out, "Output directory");
    app->add_option("--seed", o.seed, "Master seed")->each([&o](const std::string&) { o.seed_given = true; });
    app->add_option("--threads", o.threads, "Worker threads (0 = all)");
}

void add_sax(CLI::App* app, Options& o) {
    app->add_option("--paa", o.paa, "PAA segments");
    app->add_option("--alphabet", o.alphabet, "SAX alphabet size");
    app->add_option("--kgram", o.kgram, "Motif length");
    app->add_option("--window", o.windows, "Window length(s)");
    app->add_option("--stride", o.stride, "Window stride (default window/2)");
    app->add_option("--window-paa", o.window_paa, "PAA segments per window");
    app->add_flag("--drop-degenerate-windows", o.drop_degenerate, "Skip constant windows");
}

void add_fingerprint(CLI::App* app, Options& o) {
    app->add_option("--n-null", o.n_null, "Null draws per author");
    app->add_option("--n-repeats", o.n_repeats, "Split-half partitions");
    app->add_option("--topk", o.topk, "k for top-k attribution");
    app->add_option("--min-books", o.min_books, "Minimum books per author");
    app->add_option("--min-paragraphs", o.min_paragraphs, "Minimum paragraphs per book");
    app->add_option("--feature-kind", o.feature_kind, "sax|scalars|paa|windows|window_slopes|combined");
    app->add_option("--method", o.method, "loo|split_half");
    app->add_option("--combined-weight", o.combined_weight, "Weight of the motif block in combined features");
}

int exit_code_for(const std::exception& e, std::string& kind) {
    if (dynamic_cast<const ConfigError*>(&e)) return kind = "config", 2;
    if (dynamic_cast<const BackendError*>(&e)) return kind = "backend", 4;
    if (dynamic_cast<const InputError*>(&e)) return kind = "input", 3;
    if (dynamic_cast<const fs::filesystem_error*>(&e)) return kind = "input", 3;
    return kind = "internal", 1;
}

void report_error(const std::string& kind, std::string msg) {
    for (char& c : msg)
        if (c == '\n' || c == '\r') c = ' ';
    std::cerr << "novfp: error[" << kind << "]: " << msg << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Novelty-curve fingerprints for book corpora"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options o;

    auto* ingest = app.add_subcommand("ingest", "Segment <corpus>/<author>/<title>.txt into a manifest");
    add_common(ingest, o, true);
    ingest->add_option("--min-books", o.min_books, "Minimum books per author");
    ingest->add_option("--min-paragraphs", o.min_paragraphs, "Minimum paragraphs per book");
    ingest->add_option("--min-chars", o.min_chars, "Shorter blocks merge into the next paragraph");

    auto* embed = app.add_subcommand("embed", "Embed every paragraph of an ingested corpus");
    add_common(embed, o, true);
    embed->add_option("--backend", o.backend, "pseudo|http");
    embed->add_option("--dim", o.dim, "Embedding dimension (pseudo backend)");
    embed->add_option("--batch", o.batch, "Paragraphs per request");
    embed->add_option("--endpoint", o.endpoint, "Embedding service URL (http backend)");
    embed->add_option("--min-chars", o.min_chars, "Must match the ingest setting");

    auto* novelty = app.add_subcommand("novelty", "Novelty curves and scalar dynamics from embeddings");
    add_common(novelty, o, true);

    auto* features = app.add_subcommand("features", "Extract per-book features of one kind");
    add_common(features, o, true);
    add_sax(features, o);
    add_fingerprint(features, o);

    auto* fingerprint = app.add_subcommand("fingerprint", "Fingerprint and attribution experiments");
    add_common(fingerprint, o, true);
    add_sax(fingerprint, o);
    add_fingerprint(fingerprint, o);
    fingerprint->add_option("--experiment", o.experiment, "baseline|resolution|multifeature");

    auto* attribute = app.add_subcommand("attribute", "Nearest-centroid attribution only");
    add_common(attribute, o, true);
    add_sax(attribute, o);
    add_fingerprint(attribute, o);

    auto* windows = app.add_subcommand("windows", "Sliding-window motif experiments");
    add_common(windows, o, true);
    add_sax(windows, o);
    add_fingerprint(windows, o);

    auto* cluster = app.add_subcommand("cluster", "k-means on PAA profiles and within-cluster fingerprints");
    add_common(cluster, o, true);
    add_sax(cluster, o);
    add_fingerprint(cluster, o);
    cluster->add_option("--k-min", o.k_min, "Smallest k scanned");
    cluster->add_option("--k-max", o.k_max, "Largest k scanned");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic curve corpus");
    add_common(synth, o, false);
    synth->add_option("--archetype", o.archetype, "null|intensity|rhythm|genre|genre_author");
    synth->add_option("--authors", o.authors, "Number of authors");
    synth->add_option("--books", o.books, "Books per author");
    synth->add_option("--min-length", o.min_length, "Shortest curve");
    synth->add_option("--max-length", o.max_length, "Longest curve");
    synth->add_option("--strength", o.strength, "Author signal strength in [0, 1]");
    synth->add_option("--template-stretch", o.template_stretch, "Repeat each rhythm template value");
    synth->add_option("--template-min", o.template_min, "Shortest rhythm template");
    synth->add_option("--template-max", o.template_max, "Longest rhythm template");
    synth->add_flag("--emit-text", o.emit_text, "Also write filler paragraph texts");

    auto* report = app.add_subcommand("report", "Summary tables and SVG plots from results JSON");
    add_common(report, o, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        report_error("config", e.what());
        return 2;
    }

    try {
        if (*ingest) cmd_ingest(o);
        else if (*embed) cmd_embed(o);
        else if (*novelty) cmd_novelty(o);
        else if (*features) cmd_features(o);
        else if (*fingerprint) cmd_fingerprint(o);
        else if (*attribute) cmd_attribute(o);
        else if (*windows) cmd_windows(o);
        else if (*cluster) cmd_cluster(o);
        else if (*synth) cmd_synth(o);
        else if (*report) cmd_report(o);
    } catch (const std::exception& e) {
        std::string kind;
        const int code = exit_code_for(e, kind);
        report_error(kind, e.what());
        return code;
    }
    return 0;
}
