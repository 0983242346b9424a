#include "novfp/curve_corpus.hpp"

#include <map>

#include "novfp/error.hpp"
#include "novfp/store.hpp"

namespace novfp {

namespace fs = std::filesystem;

CurveCorpus filter_curves(const CurveCorpus& corpus, std::size_t min_books, std::size_t min_curve_length) {
    std::vector<bool> keep(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) keep[i] = corpus.curves[i].size() >= min_curve_length;
    for (bool changed = true; changed;) {
        changed = false;
        std::map<std::string, std::size_t> counts;
        for (std::size_t i = 0; i < corpus.size(); ++i)
            if (keep[i]) ++counts[corpus.books[i].author_id];
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (keep[i] && counts[corpus.books[i].author_id] < min_books) {
                keep[i] = false;
                changed = true;
            }
        }
    }
    CurveCorpus out;
    out.filters_applied = {std::max(min_books, corpus.filters_applied.min_books),
                           std::max(min_curve_length + 1, corpus.filters_applied.min_paragraphs)};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!keep[i]) continue;
        out.books.push_back(corpus.books[i]);
        out.curves.push_back(corpus.curves[i]);
    }
    return out;
}

void save_curve_corpus(const fs::path& dir, const CurveCorpus& corpus) {
    if (corpus.books.size() != corpus.curves.size()) throw InputError("curve count differs from book count");
    check_unique_ids(corpus.manifest());
    fs::create_directories(dir / "curves");
    std::map<std::string, std::string> index;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const std::string rel = store::safe_name(corpus.books[i].book_id) + ".bin";
        store::write_series(dir / "curves" / rel, corpus.curves[i]);
        index[corpus.books[i].book_id] = rel;
    }
    store::write_index(curve_index_path(dir), index);
    write_manifest(manifest_path(dir), corpus.manifest());
}

CurveCorpus load_curve_corpus(const fs::path& dir) {
    if (!fs::exists(manifest_path(dir))) throw InputError("missing manifest: " + manifest_path(dir).string());
    if (!fs::exists(curve_index_path(dir))) throw InputError("missing curve index: " + curve_index_path(dir).string());
    const CorpusManifest manifest = read_manifest(manifest_path(dir));
    const auto index = store::read_index(curve_index_path(dir));
    CurveCorpus out;
    out.filters_applied = manifest.filters_applied;
    for (const auto& book : manifest.books) {
        auto it = index.find(book.book_id);
        if (it == index.end()) throw InputError("no curve for book: " + book.book_id);
        out.books.push_back(book);
        out.curves.push_back(store::read_series(curve_index_path(dir).parent_path() / it->second));
    }
    return out;
}

}  // namespace novfp
