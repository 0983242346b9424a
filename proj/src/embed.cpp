#include "novfp/embed.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "novfp/error.hpp"
#include "novfp/rng.hpp"
#include "novfp/store.hpp"

namespace novfp {

std::vector<double> pseudo_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
    if (dim < 2) throw ConfigError("pseudo_embed: dim must be at least 2");
    const std::uint64_t key = mix64(fnv1a64(text) ^ mix64(seed));
    auto unit = [key](std::uint64_t counter) {
        return static_cast<double>(mix64(key + counter * 0x9e3779b97f4a7c15ULL) >> 11) * 0x1.0p-53;
    };
    std::vector<double> v(dim);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim; i += 2) {
        const double r = std::sqrt(-2.0 * std::log(1.0 - unit(i)));
        const double theta = 2.0 * std::numbers::pi * unit(i + 1);
        v[i] = r * std::cos(theta);
        if (i + 1 < dim) v[i + 1] = r * std::sin(theta);
    }
    for (double x : v) norm2 += x * x;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
}

std::vector<std::vector<float>> PseudoBackend::embed_batch(std::span<const std::string> texts) {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        const auto v = pseudo_embed(t, dim_, seed_);
        out.emplace_back(v.begin(), v.end());
    }
    return out;
}

EmbeddingMatrix embed_book(const BookRecord& book, EmbeddingBackend& backend, const EmbedOptions& opts) {
    if (book.paragraphs.size() < 2) throw InputError(book.book_id + ": need at least 2 paragraphs to embed");
    if (opts.batch == 0) throw ConfigError("embedding batch size must be positive");
    for (std::size_t i = 0; i < book.paragraphs.size(); ++i)
        if (book.paragraphs[i].size() > opts.long_paragraph_chars)
            std::cerr << "warning: " << book.book_id << " paragraph " << i << " has " << book.paragraphs[i].size()
                      << " bytes; passed through untruncated\n";

    EmbeddingMatrix m;
    m.book_id = book.book_id;
    m.dim = opts.dim;
    m.data.reserve(book.paragraphs.size() * opts.dim);
    for (std::size_t start = 0; start < book.paragraphs.size(); start += opts.batch) {
        const std::size_t n = std::min(opts.batch, book.paragraphs.size() - start);
        const auto rows = backend.embed_batch(std::span(book.paragraphs).subspan(start, n));
        if (rows.size() != n)
            throw BackendError(book.book_id + ": backend returned " + std::to_string(rows.size()) + " rows for " +
                               std::to_string(n) + " texts");
        for (const auto& row : rows) {
            if (row.size() != opts.dim)
                throw BackendError(book.book_id + ": dimension mismatch (got " + std::to_string(row.size()) +
                                   ", configured " + std::to_string(opts.dim) + ")");
            double norm2 = 0.0;
            for (float x : row) {
                if (!std::isfinite(x)) throw BackendError(book.book_id + ": non-finite value in embedding");
                norm2 += static_cast<double>(x) * x;
            }
            if (norm2 <= 0.0) throw BackendError(book.book_id + ": zero-norm embedding");
            const double inv = 1.0 / std::sqrt(norm2);
            for (float x : row) m.data.push_back(static_cast<float>(x * inv));
        }
    }
    return m;
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m) {
    store::write_f32(path, {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.dim), m.data});
}

EmbeddingMatrix read_embeddings(const std::filesystem::path& path, std::string book_id) {
    auto raw = store::read_f32(path);
    EmbeddingMatrix m{std::move(book_id), raw.dim, std::move(raw.data)};
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double norm2 = 0.0;
        for (float x : m.row(i)) norm2 += static_cast<double>(x) * x;
        if (!(std::fabs(std::sqrt(norm2) - 1.0) <= 1e-5))
            throw InputError(path.string() + ": row " + std::to_string(i) + " is not unit-norm");
    }
    return m;
}

}  // namespace novfp
