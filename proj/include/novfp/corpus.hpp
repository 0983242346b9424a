#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace novfp {

struct SegmentOptions {
    /// Blocks with fewer code points than this are merged into the next block.
    std::size_t min_chars = 20;
};

/// Split plain text into paragraphs on runs of blank lines.
///
/// Lines holding only whitespace count as blank. Each block is trimmed;
/// short blocks (headings, scene-break markers) are merged forward, and a
/// trailing short block joins the previous paragraph. Throws InputError when
/// the text is not valid UTF-8 or yields no paragraphs.
std::vector<std::string> segment_paragraphs(std::string_view raw_text, const SegmentOptions& opts = {});

/// Number of UTF-8 code points; assumes valid UTF-8.
std::size_t utf8_length(std::string_view s) noexcept;

bool is_valid_utf8(std::string_view s) noexcept;

/// One book with its text.
struct BookRecord {
    std::string book_id;
    std::string author_id;
    std::string title;
    std::vector<std::string> paragraphs;
    std::string source_path;

    std::size_t paragraph_count() const noexcept { return paragraphs.size(); }
};

/// Book metadata as stored in the manifest (no text).
struct BookMeta {
    std::string book_id;
    std::string author_id;
    std::string title;
    std::size_t paragraph_count = 0;
    std::string source_path;
    bool synthetic = false;

    bool operator==(const BookMeta&) const = default;
};

struct FilterSpec {
    std::size_t min_books = 1;
    std::size_t min_paragraphs = 2;

    bool operator==(const FilterSpec&) const = default;
};

struct CorpusManifest {
    std::vector<BookMeta> books;
    FilterSpec filters_applied;

    bool operator==(const CorpusManifest&) const = default;
};

/// Keep books with at least min_paragraphs paragraphs whose authors retain
/// at least min_books such books. Iterates to a fixed point, so applying it
/// twice changes nothing. Book order is preserved.
CorpusManifest filter_corpus(const CorpusManifest& manifest, std::size_t min_books, std::size_t min_paragraphs);

/// Throws InputError on duplicate book ids.
void check_unique_ids(const CorpusManifest& manifest);

BookMeta meta_of(const BookRecord& book);

/// Read and segment one text file.
BookRecord load_book(const std::filesystem::path& path, std::string author_id, std::string book_id,
                     const SegmentOptions& opts = {});

struct IngestResult {
    CorpusManifest manifest;
    /// One line per rejected file.
    std::vector<std::string> diagnostics;
};

/// Ingest `root/<author>/<title>.txt` files. Files are segmented in
/// parallel; the manifest is assembled in sorted path order.
IngestResult ingest_directory(const std::filesystem::path& root, const SegmentOptions& opts, unsigned threads);

/// JSON Lines manifest plus a `<path>.meta.json` sidecar holding the filters.
void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest);
CorpusManifest read_manifest(const std::filesystem::path& path);

}  // namespace novfp
