#include "novfp/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "novfp/error.hpp"
#include "novfp/parallel.hpp"

namespace novfp {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

bool is_valid_utf8(std::string_view s) noexcept {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len;
        std::uint32_t cp;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c >> 5) == 0x6) {
            len = 2;
            cp = c & 0x1f;
        } else if ((c >> 4) == 0xe) {
            len = 3;
            cp = c & 0x0f;
        } else if ((c >> 3) == 0x1e) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > s.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc >> 6) != 0x2) return false;
            cp = (cp << 6) | (cc & 0x3f);
        }
        // Reject overlong forms, surrogates and out-of-range code points.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xd800 && cp <= 0xdfff) || cp > 0x10ffff)
            return false;
        i += len;
    }
    return true;
}

std::size_t utf8_length(std::string_view s) noexcept {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xc0) != 0x80) ++n;
    return n;
}

std::vector<std::string> segment_paragraphs(std::string_view raw_text, const SegmentOptions& opts) {
    if (!is_valid_utf8(raw_text)) throw InputError("text is not valid UTF-8");

    // Collect blocks separated by blank lines; CRLF is treated as LF.
    std::vector<std::string> blocks;
    std::string current;
    std::size_t pos = 0;
    auto flush = [&] {
        auto t = trim(current);
        if (!t.empty()) blocks.emplace_back(t);
        current.clear();
    };
    while (pos <= raw_text.size()) {
        std::size_t nl = raw_text.find('\n', pos);
        if (nl == std::string_view::npos) nl = raw_text.size();
        std::string_view line = raw_text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) {
            flush();
        } else {
            if (!current.empty()) current.push_back('\n');
            current.append(line);
        }
        pos = nl + 1;
    }
    flush();

    std::vector<std::string> paragraphs;
    std::string pending;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        std::string block = pending.empty() ? std::move(blocks[i]) : pending + "\n" + blocks[i];
        pending.clear();
        const bool last = i + 1 == blocks.size();
        if (utf8_length(block) < opts.min_chars && !last) {
            pending = std::move(block);
            continue;
        }
        if (utf8_length(block) < opts.min_chars && last && !paragraphs.empty()) {
            paragraphs.back() += "\n" + block;
            continue;
        }
        paragraphs.push_back(std::move(block));
    }
    if (paragraphs.empty()) throw InputError("text contains no paragraphs");
    return paragraphs;
}

CorpusManifest filter_corpus(const CorpusManifest& manifest, std::size_t min_books, std::size_t min_paragraphs) {
    std::vector<bool> keep(manifest.books.size(), true);
    for (;;) {
        std::map<std::string, std::size_t> per_author;
        for (std::size_t i = 0; i < manifest.books.size(); ++i) {
            if (keep[i] && manifest.books[i].paragraph_count < min_paragraphs) keep[i] = false;
            if (keep[i]) ++per_author[manifest.books[i].author_id];
        }
        bool changed = false;
        for (std::size_t i = 0; i < manifest.books.size(); ++i) {
            if (keep[i] && per_author[manifest.books[i].author_id] < min_books) {
                keep[i] = false;
                changed = true;
            }
        }
        if (!changed) break;
    }
    CorpusManifest out;
    out.filters_applied = {min_books, min_paragraphs};
    for (std::size_t i = 0; i < manifest.books.size(); ++i)
        if (keep[i]) out.books.push_back(manifest.books[i]);
    return out;
}

void check_unique_ids(const CorpusManifest& manifest) {
    std::set<std::string_view> seen;
    for (const auto& b : manifest.books)
        if (!seen.insert(b.book_id).second) throw InputError("duplicate book_id: " + b.book_id);
}

BookMeta meta_of(const BookRecord& book) {
    return {book.book_id, book.author_id, book.title, book.paragraph_count(), book.source_path, false};
}

BookRecord load_book(const fs::path& path, std::string author_id, std::string book_id, const SegmentOptions& opts) {
    BookRecord book;
    book.book_id = std::move(book_id);
    book.author_id = std::move(author_id);
    book.title = path.stem().string();
    book.source_path = path.string();
    try {
        book.paragraphs = segment_paragraphs(read_file(path), opts);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return book;
}

IngestResult ingest_directory(const fs::path& root, const SegmentOptions& opts, unsigned threads) {
    if (!fs::is_directory(root)) throw InputError("corpus directory not found: " + root.string());
    std::vector<fs::path> files;
    for (const auto& author_dir : fs::directory_iterator(root)) {
        if (!author_dir.is_directory()) continue;
        for (const auto& f : fs::directory_iterator(author_dir.path()))
            if (f.is_regular_file() && f.path().extension() == ".txt") files.push_back(f.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<BookMeta> metas(files.size());
    std::vector<std::string> errors(files.size());
    parallel_for(files.size(), threads, [&](std::size_t i) {
        const auto& f = files[i];
        const std::string author = f.parent_path().filename().string();
        const std::string id = author + "/" + f.stem().string();
        try {
            metas[i] = meta_of(load_book(f, author, id, opts));
        } catch (const InputError& e) {
            errors[i] = e.what();
        }
    });

    IngestResult result;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (errors[i].empty())
            result.manifest.books.push_back(std::move(metas[i]));
        else
            result.diagnostics.push_back("rejected: " + errors[i]);
    }
    check_unique_ids(result.manifest);
    return result;
}

void write_manifest(const fs::path& path, const CorpusManifest& manifest) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    for (const auto& b : manifest.books) {
        json j = {{"book_id", b.book_id},
                  {"author_id", b.author_id},
                  {"title", b.title},
                  {"paragraph_count", b.paragraph_count},
                  {"source_path", b.source_path}};
        if (b.synthetic) j["synthetic"] = true;
        out << j.dump() << '\n';
    }
    std::ofstream meta(path.string() + ".meta.json", std::ios::binary);
    meta << json{{"filters_applied",
                  {{"min_books", manifest.filters_applied.min_books},
                   {"min_paragraphs", manifest.filters_applied.min_paragraphs}}}}
                .dump(2)
         << '\n';
}

CorpusManifest read_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("manifest not found: " + path.string());
    CorpusManifest m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            const json j = json::parse(line);
            BookMeta b;
            b.book_id = j.at("book_id").get<std::string>();
            b.author_id = j.at("author_id").get<std::string>();
            b.title = j.value("title", "");
            b.paragraph_count = j.at("paragraph_count").get<std::size_t>();
            b.source_path = j.value("source_path", "");
            b.synthetic = j.value("synthetic", false);
            m.books.push_back(std::move(b));
        } catch (const json::exception& e) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    std::ifstream meta(path.string() + ".meta.json");
    if (meta) {
        const json j = json::parse(meta, nullptr, false);
        if (!j.is_discarded() && j.contains("filters_applied")) {
            m.filters_applied.min_books = j["filters_applied"].value("min_books", std::size_t{1});
            m.filters_applied.min_paragraphs = j["filters_applied"].value("min_paragraphs", std::size_t{2});
        }
    }
    check_unique_ids(m);
    return m;
}

}  // namespace novfp
