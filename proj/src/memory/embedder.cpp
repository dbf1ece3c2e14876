#include "memory/embedder.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>

#include <httplib.h>
#include <json.hpp>

#include "core/errors.hpp"

namespace ltmfair {

namespace {

uint64_t fnv1a(const char* data, size_t n) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace

Embedding HashingEmbedder::embed(const std::string& text) const {
    Embedding v(static_cast<size_t>(dim_), 0.0f);
    std::string token;
    bool any = false;
    auto flush = [&] {
        if (token.empty()) return;
        const uint64_t h = fnv1a(token.data(), token.size());
        const size_t bucket = h % static_cast<uint64_t>(dim_);
        const float sign = ((h >> 32) & 1ULL) ? 1.0f : -1.0f;
        v[bucket] += sign;
        any = true;
        token.clear();
    };
    for (unsigned char c : text) {
        if (std::isalnum(c))
            token.push_back(static_cast<char>(std::tolower(c)));
        else
            flush();
    }
    flush();

    if (!any) {
        v[0] = 1.0f;
        return v;
    }
    double norm2 = 0.0;
    for (float x : v) norm2 += static_cast<double>(x) * x;
    if (norm2 == 0.0) { // all signed counts cancelled; fall back to basis
        v.assign(static_cast<size_t>(dim_), 0.0f);
        v[0] = 1.0f;
        return v;
    }
    const float inv = static_cast<float>(1.0 / std::sqrt(norm2));
    for (float& x : v) x *= inv;
    return v;
}

HttpEmbedder::HttpEmbedder(std::string base_url, std::string api_key,
                           std::string model, int dim)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)),
      model_(std::move(model)), dim_(dim) {}

Embedding HttpEmbedder::embed(const std::string& text) const {
    httplib::Client client(base_url_);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    httplib::Headers headers;
    if (!api_key_.empty())
        headers.emplace("Authorization", "Bearer " + api_key_);
    nlohmann::json body{{"model", model_}, {"input", text}};
    auto res = client.Post("/v1/embeddings", headers, body.dump(),
                           "application/json");
    if (!res)
        throw error(errc::embed_backend_error,
                    "embeddings endpoint unreachable: " + base_url_);
    if (res->status != 200)
        throw error(errc::embed_backend_error,
                    "embeddings endpoint returned status " +
                        std::to_string(res->status));
    auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("data") || j["data"].empty() ||
        !j["data"][0].contains("embedding"))
        throw error(errc::embed_backend_error, "malformed embeddings payload");
    Embedding raw = j["data"][0]["embedding"].get<Embedding>();
    if (static_cast<int>(raw.size()) != dim_)
        throw error(errc::embed_backend_error,
                    "embedding dimension mismatch: got " +
                        std::to_string(raw.size()));
    double norm2 = 0.0;
    for (float x : raw) norm2 += static_cast<double>(x) * x;
    if (norm2 <= 0.0)
        throw error(errc::embed_backend_error, "zero-norm embedding returned");
    const float inv = static_cast<float>(1.0 / std::sqrt(norm2));
    for (float& x : raw) x *= inv;
    return raw;
}

double cosine(const Embedding& a, const Embedding& b) {
    double dot = 0.0;
    const size_t n = a.size() < b.size() ? a.size() : b.size();
    for (size_t i = 0; i < n; ++i)
        dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return dot; // inputs are unit-norm, so the dot product is the cosine
}

} // namespace ltmfair
