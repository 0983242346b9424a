#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "novfp/embed.hpp"
#include "novfp/error.hpp"

namespace novfp {

struct HttpBackend::Counter {
    std::atomic<std::size_t> attempts{0};
};

namespace {

std::size_t env_size(const char* name, std::size_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    try {
        return static_cast<std::size_t>(std::stoull(v));
    } catch (const std::exception&) {
        throw ConfigError(std::string(name) + " is not a number: " + v);
    }
}

}  // namespace

HttpConfig HttpConfig::from_env() {
    HttpConfig c;
    if (const char* e = std::getenv("EMBED_ENDPOINT")) c.endpoint = e;
    c.batch = env_size("EMBED_BATCH", c.batch);
    c.timeout_ms = static_cast<int>(env_size("EMBED_TIMEOUT_MS", static_cast<std::size_t>(c.timeout_ms)));
    c.dim = env_size("EMBED_DIM", c.dim);
    return c;
}

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)), counter_(std::make_shared<Counter>()) {
    const auto& url = config_.endpoint;
    const auto scheme = url.find("://");
    if (url.empty() || scheme == std::string::npos) throw ConfigError("invalid embedding endpoint: '" + url + "'");
    const auto slash = url.find('/', scheme + 3);
    base_ = url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : url.substr(slash);
}

std::size_t HttpBackend::attempts() const noexcept { return counter_->attempts.load(); }

std::vector<std::vector<float>> HttpBackend::embed_batch(std::span<const std::string> texts) {
    const std::string body = nlohmann::json{{"texts", texts}}.dump();
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(config_.backoff_base * (1 << (attempt - 1)));
        counter_->attempts.fetch_add(1);

        // A client per call keeps the backend safe for concurrent books.
        httplib::Client client(base_);
        const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        auto res = client.Post(path_, body, "application/json");
        if (!res) {
            last_error = "request failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("embeddings") || !reply["embeddings"].is_array())
            throw BackendError("malformed embedding response from " + config_.endpoint);
        std::vector<std::vector<float>> out;
        out.reserve(reply["embeddings"].size());
        for (const auto& row : reply["embeddings"]) {
            if (!row.is_array()) throw BackendError("malformed embedding row from " + config_.endpoint);
            std::vector<float>& v = out.emplace_back();
            v.reserve(row.size());
            for (const auto& x : row) {
                // null (e.g. a serialized NaN) is reported as non-finite.
                v.push_back(x.is_number() ? x.get<float>() : std::numeric_limits<float>::quiet_NaN());
            }
        }
        return out;
    }
    throw BackendError("embedding backend unreachable after " + std::to_string(config_.max_retries + 1) +
                       " attempts: " + last_error);
}

}  // namespace novfp
