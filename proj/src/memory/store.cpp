#include "memory/store.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <mutex>

#include <openssl/evp.h>

#include "core/errors.hpp"
#include "core/tag_json.hpp"
#include "memory/engines.hpp"

namespace ltmfair {

const char kEmptyStoreDigest[] =
    "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";

std::string entry_text(const InteractionRecord& r) {
    return "Q: " + r.query + "\nA: " + r.response;
}

namespace {

std::string canonical_tag_bytes(const std::vector<AuditTag>& tags) {
    ordered_json arr = ordered_json::array();
    for (const auto& t : tags) {
        ordered_json j = tag_to_json(t);
        j["confidence"] = format_fixed(t.suspicion, 6); // fixed text, not float
        arr.push_back(j);
    }
    return arr.dump();
}

std::string embedding_to_text(float v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
    return buf;
}

} // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int md_len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &md_len, EVP_sha256(), nullptr);
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(md_len * 2);
    for (unsigned int i = 0; i < md_len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

int64_t MemoryStore::write(const InteractionRecord& record,
                           std::vector<AuditTag> tags) {
    std::unique_lock lock(mutex_);
    if (frozen_)
        throw error(errc::read_only_violation,
                    "store is frozen for auditing; writes are not allowed");
    MemoryEntry e;
    e.entry_id = static_cast<int64_t>(entries_.size());
    e.turn = record.turn;
    e.text = entry_text(record);
    e.embedding = embedder_->embed(e.text);
    e.tags = std::move(tags);
    entries_.push_back(std::move(e));
    on_insert(entries_.size() - 1);
    return entries_.back().entry_id;
}

RetrievedContext MemoryStore::retrieve(const std::string& query, int k) const {
    const Embedding q = embedder_->embed(query);
    std::shared_lock lock(mutex_);
    std::vector<size_t> picked = select(q, k);
    std::vector<std::pair<double, size_t>> scored;
    scored.reserve(picked.size());
    for (size_t idx : picked)
        scored.emplace_back(cosine(q, entries_[idx].embedding), idx);
    // Presentation order is uniform across engines: best first, newer entry
    // wins ties. Engine-specific rules decide only which entries are picked.
    std::sort(scored.begin(), scored.end(), [this](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return entries_[a.second].entry_id > entries_[b.second].entry_id;
    });
    RetrievedContext ctx;
    ctx.entries.reserve(scored.size());
    ctx.scores.reserve(scored.size());
    for (const auto& [score, idx] : scored) {
        ctx.entries.push_back(entries_[idx]);
        ctx.scores.push_back(score);
    }
    return ctx;
}

size_t MemoryStore::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::vector<MemoryEntry> MemoryStore::entries() const {
    std::shared_lock lock(mutex_);
    return entries_;
}

std::string MemoryStore::digest() const {
    std::shared_lock lock(mutex_);
    std::string bytes;
    for (const auto& e : entries_) {
        bytes += std::to_string(e.entry_id);
        bytes.push_back('\x1f');
        bytes += std::to_string(e.turn);
        bytes.push_back('\x1f');
        bytes += e.text;
        bytes.push_back('\x1f');
        bytes += canonical_tag_bytes(e.tags);
        bytes.push_back('\x1e');
    }
    return sha256_hex(bytes);
}

void MemoryStore::freeze() {
    std::unique_lock lock(mutex_);
    frozen_ = true;
}

void MemoryStore::unfreeze() {
    std::unique_lock lock(mutex_);
    frozen_ = false;
}

bool MemoryStore::frozen() const {
    std::shared_lock lock(mutex_);
    return frozen_;
}

std::string MemoryStore::serialize() const {
    std::shared_lock lock(mutex_);
    ordered_json header;
    header["kind"] = memory_kind_name(kind());
    header["dim"] = embedder_->dim();
    header["params"] = params_json();
    header["entries"] = entries_.size();
    std::string out = header.dump() + "\n";
    for (const auto& e : entries_) {
        ordered_json j;
        j["entry_id"] = e.entry_id;
        j["turn"] = e.turn;
        j["text"] = e.text;
        ordered_json emb = ordered_json::array();
        for (float v : e.embedding) emb.push_back(embedding_to_text(v));
        j["embedding"] = emb;
        ordered_json tags = ordered_json::array();
        for (const auto& t : e.tags) tags.push_back(tag_to_json(t));
        j["tags"] = tags;
        out += j.dump() + "\n";
    }
    return out;
}

std::unique_ptr<MemoryStore> make_store(MemoryKind kind, StoreParams params,
                                        std::shared_ptr<Embedder> embedder) {
    switch (kind) {
        case MemoryKind::vector:
            return std::make_unique<VectorStore>(std::move(embedder));
        case MemoryKind::cluster:
            return std::make_unique<ClusterStore>(std::move(embedder),
                                                  params.cluster_threshold);
        case MemoryKind::paged:
            return std::make_unique<PagedStore>(std::move(embedder),
                                                params.paged_window);
    }
    throw error(errc::invalid_argument, "unknown memory kind");
}

std::unique_ptr<MemoryStore> deserialize_store(const std::string& snapshot,
                                               std::shared_ptr<Embedder> embedder) {
    const auto lines = split_lines(snapshot);
    if (lines.empty())
        throw error(errc::corrupt_snapshot, "snapshot is empty");
    ordered_json header = ordered_json::parse(lines[0], nullptr, false);
    if (header.is_discarded() || !header.contains("kind"))
        throw error(errc::corrupt_snapshot, "snapshot header is not valid JSON");
    const auto kind = parse_memory_kind(header["kind"].get<std::string>());
    if (!kind)
        throw error(errc::corrupt_snapshot, "snapshot header names unknown kind");

    StoreParams params;
    const auto& pj = header["params"];
    if (pj.contains("window")) params.paged_window = pj["window"].get<int>();
    if (pj.contains("threshold"))
        params.cluster_threshold = pj["threshold"].get<double>();

    auto store = make_store(*kind, params, std::move(embedder));
    const size_t expected = header.value("entries", size_t{0});

    size_t seen = 0;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        ordered_json j = ordered_json::parse(lines[i], nullptr, false);
        if (j.is_discarded())
            throw error(errc::corrupt_snapshot,
                        "snapshot entry line " + std::to_string(i) +
                            " is not valid JSON");
        MemoryEntry e;
        try {
            e.entry_id = j.at("entry_id").get<int64_t>();
            e.turn = j.at("turn").get<int>();
            e.text = j.at("text").get<std::string>();
            for (const auto& comp : j.at("embedding"))
                e.embedding.push_back(
                    std::strtof(comp.get<std::string>().c_str(), nullptr));
            for (const auto& tj : j.at("tags")) e.tags.push_back(tag_from_json(tj));
        } catch (const ordered_json::exception& ex) {
            throw error(errc::corrupt_snapshot,
                        "snapshot entry line " + std::to_string(i) + ": " +
                            ex.what());
        }
        if (e.entry_id != static_cast<int64_t>(seen))
            throw error(errc::corrupt_snapshot,
                        "snapshot entry ids are not contiguous from 0");
        store->restore_entry(std::move(e));
        ++seen;
    }
    if (seen != expected)
        throw error(errc::corrupt_snapshot,
                    "snapshot header promises " + std::to_string(expected) +
                        " entries, found " + std::to_string(seen));
    return store;
}

void MemoryStore::restore_entry(MemoryEntry entry) {
    std::unique_lock lock(mutex_);
    if (frozen_)
        throw error(errc::read_only_violation, "store is frozen");
    entries_.push_back(std::move(entry));
    on_insert(entries_.size() - 1);
}

} // namespace ltmfair
