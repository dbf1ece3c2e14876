#pragma once

#include <deque>

#include "memory/store.hpp"

namespace ltmfair {

// Flat top-k cosine scan.
class VectorStore : public MemoryStore {
public:
    explicit VectorStore(std::shared_ptr<Embedder> embedder)
        : MemoryStore(std::move(embedder)) {}
    MemoryKind kind() const override { return MemoryKind::vector; }

protected:
    void on_insert(size_t) override {}
    std::vector<size_t> select(const Embedding& query, int k) const override;
    ordered_json params_json() const override;
};

// Online clustering: a new entry joins the nearest centroid when its cosine
// reaches the threshold, otherwise it seeds a new cluster. Centroids are the
// renormalized mean of member embeddings. Retrieval walks clusters in
// centroid-similarity order and drains each cluster best-first until k
// entries are collected.
class ClusterStore : public MemoryStore {
public:
    ClusterStore(std::shared_ptr<Embedder> embedder, double threshold)
        : MemoryStore(std::move(embedder)), threshold_(threshold) {}
    MemoryKind kind() const override { return MemoryKind::cluster; }

    struct Cluster {
        std::vector<double> sum;     // running component sum of members
        std::vector<size_t> members; // indices into entries_
        Embedding centroid;          // renormalized mean
    };

    std::vector<Cluster> clusters() const;
    double threshold() const { return threshold_; }

protected:
    void on_insert(size_t idx) override;
    std::vector<size_t> select(const Embedding& query, int k) const override;
    ordered_json params_json() const override;

private:
    double threshold_;
    std::vector<Cluster> clusters_;
};

// Fixed-size FIFO main window backed by an archive. Evicted entries move to
// the archive, nothing is lost. The window is always in context; the archive
// tops the result up to k by cosine.
class PagedStore : public MemoryStore {
public:
    PagedStore(std::shared_ptr<Embedder> embedder, int window)
        : MemoryStore(std::move(embedder)), window_limit_(window) {}
    MemoryKind kind() const override { return MemoryKind::paged; }

    std::vector<int64_t> window_ids() const;
    std::vector<int64_t> archive_ids() const;
    int window_limit() const { return window_limit_; }

protected:
    void on_insert(size_t idx) override;
    std::vector<size_t> select(const Embedding& query, int k) const override;
    ordered_json params_json() const override;

private:
    int window_limit_;
    std::deque<size_t> window_;
    std::vector<size_t> archive_;
};

} // namespace ltmfair
