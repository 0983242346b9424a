#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "novfp/corpus.hpp"

namespace novfp {

/// Books with their novelty curves, parallel arrays in manifest order.
struct CurveCorpus {
    std::vector<BookMeta> books;
    std::vector<std::vector<double>> curves;
    FilterSpec filters_applied;

    std::size_t size() const noexcept { return books.size(); }
    CorpusManifest manifest() const { return {books, filters_applied}; }
    bool operator==(const CurveCorpus&) const = default;
};

/// Keep books whose curves have at least min_curve_length points and whose
/// authors keep at least min_books such books.
CurveCorpus filter_curves(const CurveCorpus& corpus, std::size_t min_books, std::size_t min_curve_length);

/// Layout under `dir`: manifest.jsonl (+ sidecar), curves/index.json and one
/// curves/<name>.bin per book.
void save_curve_corpus(const std::filesystem::path& dir, const CurveCorpus& corpus);
CurveCorpus load_curve_corpus(const std::filesystem::path& dir);

inline std::filesystem::path manifest_path(const std::filesystem::path& dir) { return dir / "manifest.jsonl"; }
inline std::filesystem::path curve_index_path(const std::filesystem::path& dir) {
    return dir / "curves" / "index.json";
}

}  // namespace novfp
