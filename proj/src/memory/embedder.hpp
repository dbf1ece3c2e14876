#pragma once

#include <memory>
#include <string>
#include <vector>

namespace ltmfair {

inline constexpr int kEmbedDim = 256;

using Embedding = std::vector<float>;

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual Embedding embed(const std::string& text) const = 0;
    virtual int dim() const = 0;
};

// Deterministic feature-hashing bag of tokens. Tokens are maximal
// alphanumeric runs, lowercased; each token adds +/-1 (signed FNV-1a hash)
// to one of D buckets; the result is L2-normalized. Empty input maps to the
// first unit basis vector so every embedding has norm 1.
class HashingEmbedder : public Embedder {
public:
    explicit HashingEmbedder(int dim = kEmbedDim) : dim_(dim) {}
    Embedding embed(const std::string& text) const override;
    int dim() const override { return dim_; }

private:
    int dim_;
};

// Delegates to an OpenAI-style /v1/embeddings endpoint. Failures surface as
// errc::embed_backend_error; the hashing embedder never fails.
class HttpEmbedder : public Embedder {
public:
    HttpEmbedder(std::string base_url, std::string api_key, std::string model,
                 int dim = kEmbedDim);
    Embedding embed(const std::string& text) const override;
    int dim() const override { return dim_; }

private:
    std::string base_url_;
    std::string api_key_;
    std::string model_;
    int dim_;
};

double cosine(const Embedding& a, const Embedding& b);

} // namespace ltmfair
