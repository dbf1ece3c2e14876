#include "memory/engines.hpp"

#include <algorithm>
#include <cmath>

namespace ltmfair {

namespace {

Embedding renormalize(const std::vector<double>& sum, size_t count) {
    double norm2 = 0.0;
    for (double v : sum) norm2 += (v / count) * (v / count);
    Embedding c(sum.size(), 0.0f);
    if (norm2 <= 0.0) { // degenerate mean; keep a deterministic unit vector
        c[0] = 1.0f;
        return c;
    }
    const double inv = 1.0 / (std::sqrt(norm2) * count);
    for (size_t i = 0; i < sum.size(); ++i)
        c[i] = static_cast<float>(sum[i] * inv);
    return c;
}

} // namespace

void ClusterStore::on_insert(size_t idx) {
    const Embedding& e = entries_[idx].embedding;
    int best = -1;
    double best_cos = -2.0;
    for (size_t c = 0; c < clusters_.size(); ++c) {
        const double cs = cosine(e, clusters_[c].centroid);
        if (cs > best_cos) { // strict: earlier cluster wins centroid ties
            best_cos = cs;
            best = static_cast<int>(c);
        }
    }
    if (best < 0 || best_cos < threshold_) {
        Cluster fresh;
        fresh.sum.assign(e.size(), 0.0);
        for (size_t i = 0; i < e.size(); ++i) fresh.sum[i] = e[i];
        fresh.members = {idx};
        fresh.centroid = renormalize(fresh.sum, 1);
        clusters_.push_back(std::move(fresh));
        return;
    }
    Cluster& c = clusters_[static_cast<size_t>(best)];
    for (size_t i = 0; i < e.size(); ++i) c.sum[i] += e[i];
    c.members.push_back(idx);
    c.centroid = renormalize(c.sum, c.members.size());
}

std::vector<size_t> ClusterStore::select(const Embedding& query, int k) const {
    std::vector<std::pair<double, size_t>> ranked; // (centroid cosine, cluster id)
    ranked.reserve(clusters_.size());
    for (size_t c = 0; c < clusters_.size(); ++c)
        ranked.emplace_back(cosine(query, clusters_[c].centroid), c);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    std::vector<size_t> picked;
    const size_t want = static_cast<size_t>(std::max(k, 0));
    for (const auto& [ccos, cid] : ranked) {
        if (picked.size() >= want) break;
        std::vector<std::pair<double, size_t>> members;
        for (size_t idx : clusters_[cid].members)
            members.emplace_back(cosine(query, entries_[idx].embedding), idx);
        std::sort(members.begin(), members.end(),
                  [this](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return entries_[a.second].entry_id > entries_[b.second].entry_id;
                  });
        for (const auto& [score, idx] : members) {
            if (picked.size() >= want) break;
            picked.push_back(idx);
        }
    }
    return picked;
}

std::vector<ClusterStore::Cluster> ClusterStore::clusters() const {
    std::shared_lock lock(mutex_);
    return clusters_;
}

ordered_json ClusterStore::params_json() const {
    ordered_json j;
    j["threshold"] = threshold_;
    return j;
}

} // namespace ltmfair
