#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "novfp/corpus.hpp"

namespace novfp {

/// Paragraph embeddings for one book, row-major float32, unit-norm rows.
struct EmbeddingMatrix {
    std::string book_id;
    std::size_t dim = 0;
    std::vector<float> data;

    std::size_t rows() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
    std::span<const float> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
};

/// A source of paragraph embeddings. Implementations must tolerate
/// concurrent calls from different books.
class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    /// One vector per input text, in input order.
    virtual std::vector<std::vector<float>> embed_batch(std::span<const std::string> texts) = 0;
    virtual std::string name() const = 0;
};

/// Deterministic unit vector for a text: a counter-based generator keyed by
/// the text digest and seed yields `dim` standard normals, then normalized.
std::vector<double> pseudo_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

class PseudoBackend final : public EmbeddingBackend {
public:
    PseudoBackend(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {}
    std::vector<std::vector<float>> embed_batch(std::span<const std::string> texts) override;
    std::string name() const override { return "pseudo"; }

private:
    std::size_t dim_;
    std::uint64_t seed_;
};

struct HttpConfig {
    std::string endpoint;  // e.g. http://localhost:8080/embed
    std::size_t batch = 64;
    int timeout_ms = 30000;
    std::size_t dim = 768;
    int max_retries = 5;
    std::chrono::milliseconds backoff_base{100};

    /// EMBED_ENDPOINT, EMBED_BATCH, EMBED_TIMEOUT_MS, EMBED_DIM.
    static HttpConfig from_env();
};

/// POSTs {"texts": [...]} and expects {"embeddings": [[...], ...]}.
/// Non-200 responses and connection failures are retried with delays of
/// backoff_base * 2^n for n = 0 .. max_retries-1.
class HttpBackend final : public EmbeddingBackend {
public:
    explicit HttpBackend(HttpConfig config);
    std::vector<std::vector<float>> embed_batch(std::span<const std::string> texts) override;
    std::string name() const override { return "http"; }

    /// Number of HTTP attempts made so far (all threads).
    std::size_t attempts() const noexcept;

private:
    HttpConfig config_;
    std::string base_;  // scheme://host:port
    std::string path_;
    struct Counter;
    std::shared_ptr<Counter> counter_;
};

struct EmbedOptions {
    std::size_t batch = 64;
    std::size_t dim = 768;
    /// Paragraphs longer than this are reported (not truncated).
    std::size_t long_paragraph_chars = 8192;
};

/// Embed every paragraph of a book, in order, in sequential batches.
/// Rows are re-normalized to unit length. Throws BackendError on a
/// dimension mismatch, non-finite output or zero vectors.
EmbeddingMatrix embed_book(const BookRecord& book, EmbeddingBackend& backend, const EmbedOptions& opts = {});

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m);
/// Verifies the unit-norm invariant on every row.
EmbeddingMatrix read_embeddings(const std::filesystem::path& path, std::string book_id = {});

}  // namespace novfp
