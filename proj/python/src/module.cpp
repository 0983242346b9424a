#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "novfp/error.hpp"
#include "novfp/experiments.hpp"
#include "novfp/features.hpp"
#include "novfp/novelty.hpp"
#include "novfp/sax.hpp"
#include "novfp/synth.hpp"

namespace py = pybind11;
using namespace novfp;

namespace {

py::dict scalars_dict(const ScalarDynamics& s) {
    py::dict d;
    d["mean_novelty"] = s.mean_novelty;
    d["speed"] = s.speed;
    d["volume"] = s.volume;
    d["circuitousness"] = s.circuitousness;
    d["reversal_count"] = s.reversal_count;
    d["novelty_std"] = s.novelty_std;
    d["trend_irregularity"] = s.trend_irregularity;
    d["flags"] = flag_names(s.flags);
    return d;
}

std::vector<double> novelty_from_rows(const std::vector<std::vector<double>>& rows) {
    EmbeddingMatrix m;
    m.dim = rows.empty() ? 0 : rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != m.dim) throw InputError("embedding rows differ in length");
        m.data.insert(m.data.end(), r.begin(), r.end());
    }
    return novelty_curve(m).values;
}

py::dict sax_dict(const std::vector<double>& series, std::size_t w, int alphabet, std::size_t k) {
    SaxConfig cfg;
    cfg.paa_segments = w;
    cfg.alphabet = alphabet;
    cfg.motif_length = k;
    cfg.validate();
    const auto p = sax_string(series, cfg);
    py::dict d;
    d["paa"] = p.paa;
    d["symbols"] = std::vector<int>(p.symbols.begin(), p.symbols.end());
    d["string"] = render_symbols(p.symbols);
    d["motifs"] = p.motifs.entries;
    d["degenerate"] = p.degenerate;
    return d;
}

py::dict corpus_dict(const std::string& archetype, std::size_t authors, std::size_t books, std::size_t min_length,
                     std::size_t max_length, double strength, std::uint64_t seed) {
    SynthSpec spec;
    spec.archetype = parse_archetype(archetype);
    spec.n_authors = authors;
    spec.books_per_author = books;
    spec.min_length = min_length;
    spec.max_length = max_length;
    spec.strength = strength;
    spec.seed = seed;
    const auto sc = gen_corpus(spec);
    py::list ids, author_ids;
    for (const auto& b : sc.corpus.books) {
        ids.append(b.book_id);
        author_ids.append(b.author_id);
    }
    py::dict d;
    d["book_ids"] = ids;
    d["author_ids"] = author_ids;
    d["curves"] = sc.corpus.curves;
    return d;
}

py::dict experiment_summary(const std::string& archetype, const std::string& kind, std::size_t authors,
                            std::size_t books, std::size_t n_null, std::uint64_t seed, unsigned threads) {
    SynthSpec spec;
    spec.archetype = parse_archetype(archetype);
    spec.n_authors = authors;
    spec.books_per_author = books;
    spec.seed = seed;
    ExperimentConfig cfg;
    cfg.kind = parse_feature_kind(kind);
    cfg.n_null = n_null;
    cfg.seed = seed;
    cfg.min_books = std::min<std::size_t>(cfg.min_books, books);
    cfg.validate();
    ExperimentResult r;
    {
        py::gil_scoped_release release;
        r = run_experiment(gen_corpus(spec, threads).corpus, "python", kind, cfg, threads);
    }
    py::dict d;
    d["skipped"] = r.skipped;
    d["diagnostic"] = r.diagnostic;
    d["n_authors"] = r.n_authors;
    d["pct_significant"] = r.summary.pct_significant;
    d["mean_effect"] = r.summary.mean_effect;
    d["top1"] = r.top1();
    d["times_chance"] = r.times_chance();
    d["json"] = r.to_json().dump();
    return d;
}

}  // namespace

PYBIND11_MODULE(novfp, m) {
    m.doc() = "Novelty-curve fingerprints: SAX, divergences and synthetic corpora";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    m.def("paa", [](const std::vector<double>& s, std::size_t w) { return paa(s, w); }, py::arg("series"),
          py::arg("segments"));
    m.def(
        "znorm",
        [](const std::vector<double>& v) {
            auto r = znorm(v);
            return py::make_tuple(r.values, r.degenerate);
        },
        py::arg("values"), "Returns (values, degenerate).");
    m.def("breakpoints", &breakpoints, py::arg("alphabet"));
    m.def(
        "jsd", [](const std::vector<double>& p, const std::vector<double>& q) { return jsd(p, q); }, py::arg("p"),
        py::arg("q"));
    m.def("sax", &sax_dict, py::arg("series"), py::arg("segments") = 16, py::arg("alphabet") = 5,
          py::arg("motif_length") = 4);
    m.def(
        "scalar_dynamics", [](const std::vector<double>& c) { return scalars_dict(scalar_dynamics(c)); },
        py::arg("curve"));
    m.def("novelty_curve", &novelty_from_rows, py::arg("embeddings"));
    m.def("gen_corpus", &corpus_dict, py::arg("archetype") = "null", py::arg("authors") = 20, py::arg("books") = 5,
          py::arg("min_length") = 150, py::arg("max_length") = 400, py::arg("strength") = 1.0, py::arg("seed") = 0);
    m.def("experiment_summary", &experiment_summary, py::arg("archetype"), py::arg("kind") = "sax",
          py::arg("authors") = 30, py::arg("books") = 5, py::arg("n_null") = 200, py::arg("seed") = 0,
          py::arg("threads") = 1);
}
