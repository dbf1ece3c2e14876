#include "memory/engines.hpp"

#include <algorithm>

namespace ltmfair {

std::vector<size_t> VectorStore::select(const Embedding& query, int k) const {
    std::vector<std::pair<double, size_t>> scored;
    scored.reserve(entries_.size());
    for (size_t i = 0; i < entries_.size(); ++i)
        scored.emplace_back(cosine(query, entries_[i].embedding), i);
    std::sort(scored.begin(), scored.end(), [this](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return entries_[a.second].entry_id > entries_[b.second].entry_id;
    });
    const size_t n = std::min(scored.size(), static_cast<size_t>(std::max(k, 0)));
    std::vector<size_t> picked;
    picked.reserve(n);
    for (size_t i = 0; i < n; ++i) picked.push_back(scored[i].second);
    return picked;
}

ordered_json VectorStore::params_json() const {
    return ordered_json::object();
}

} // namespace ltmfair
