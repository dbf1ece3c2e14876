#include "memory/engines.hpp"

#include <algorithm>

namespace ltmfair {

void PagedStore::on_insert(size_t idx) {
    window_.push_back(idx);
    if (window_.size() > static_cast<size_t>(window_limit_)) {
        archive_.push_back(window_.front());
        window_.pop_front();
    }
}

std::vector<size_t> PagedStore::select(const Embedding& query, int k) const {
    // Residency semantics: the whole main window is always in context, even
    // when it exceeds k. The archive only tops the result up to k.
    std::vector<size_t> picked(window_.begin(), window_.end());
    const size_t want = static_cast<size_t>(std::max(k, 0));
    if (picked.size() < want && !archive_.empty()) {
        std::vector<std::pair<double, size_t>> scored;
        scored.reserve(archive_.size());
        for (size_t idx : archive_)
            scored.emplace_back(cosine(query, entries_[idx].embedding), idx);
        std::sort(scored.begin(), scored.end(),
                  [this](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return entries_[a.second].entry_id > entries_[b.second].entry_id;
                  });
        for (const auto& [score, idx] : scored) {
            if (picked.size() >= want) break;
            picked.push_back(idx);
        }
    }
    return picked;
}

std::vector<int64_t> PagedStore::window_ids() const {
    std::shared_lock lock(mutex_);
    std::vector<int64_t> ids;
    for (size_t idx : window_) ids.push_back(entries_[idx].entry_id);
    return ids;
}

std::vector<int64_t> PagedStore::archive_ids() const {
    std::shared_lock lock(mutex_);
    std::vector<int64_t> ids;
    for (size_t idx : archive_) ids.push_back(entries_[idx].entry_id);
    return ids;
}

ordered_json PagedStore::params_json() const {
    ordered_json j;
    j["window"] = window_limit_;
    return j;
}

} // namespace ltmfair
