#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/manifest.hpp"
#include "memory/embedder.hpp"

namespace ltmfair {

struct MemoryEntry {
    int64_t entry_id = 0; // monotone from 0, never reused
    int turn = 0;
    std::string text;     // "Q: {query}\nA: {response}"
    Embedding embedding;  // unit norm
    std::vector<AuditTag> tags;
};

// Retrieval result. Scores are cosine similarities against the query and are
// presented non-increasing; ties are broken toward the newer entry.
struct RetrievedContext {
    std::vector<MemoryEntry> entries;
    std::vector<double> scores;
};

// SHA-256 of the empty store's canonical byte stream (zero bytes).
extern const char kEmptyStoreDigest[];

// Canonical stored form of an interaction; write-time auditors must see the
// same bytes the store will persist.
std::string entry_text(const InteractionRecord& r);

struct StoreParams {
    int paged_window = 8;
    double cluster_threshold = 0.55;
};

// Common contract for the three engines. Writes append; audits freeze the
// store so any write attempt during evaluation surfaces as a bug instead of
// silently contaminating memory. Thread safety: writes exclusive, reads
// shared.
class MemoryStore {
public:
    virtual ~MemoryStore() = default;

    // Embeds "Q: {query}\nA: {response}" and appends. Returns the entry id.
    // Tags supplied here come from write-time auditing.
    int64_t write(const InteractionRecord& record,
                  std::vector<AuditTag> tags = {});

    RetrievedContext retrieve(const std::string& query, int k) const;

    size_t size() const;
    std::vector<MemoryEntry> entries() const; // entry_id order

    // 64-hex SHA-256 over (entry_id, turn, text, tags) in entry_id order.
    // Embeddings are derived data and deliberately excluded.
    std::string digest() const;

    void freeze();
    void unfreeze();
    bool frozen() const;

    const Embedder& embedder() const { return *embedder_; }
    virtual MemoryKind kind() const = 0;

    // Snapshot: one JSON header line, then one JSON line per entry.
    std::string serialize() const;

    // Re-inserts a fully formed entry (snapshot restore path). Entry ids must
    // arrive contiguous from 0 so engine state replays identically.
    void restore_entry(MemoryEntry entry);

protected:
    explicit MemoryStore(std::shared_ptr<Embedder> embedder)
        : embedder_(std::move(embedder)) {}

    // Engine hook, called under the write lock with the entry already stored
    // at entries_[idx].
    virtual void on_insert(size_t idx) = 0;
    // Engine hook, called under a shared lock. Returns indices into entries_
    // of the selected entries. Selection rules are engine specific; the base
    // class handles final presentation ordering.
    virtual std::vector<size_t> select(const Embedding& query, int k) const = 0;

    virtual ordered_json params_json() const = 0;

    std::vector<MemoryEntry> entries_;
    mutable std::shared_mutex mutex_;

private:
    std::shared_ptr<Embedder> embedder_;
    bool frozen_ = false;
};

std::unique_ptr<MemoryStore> make_store(MemoryKind kind, StoreParams params,
                                        std::shared_ptr<Embedder> embedder);

// Rebuilds a store from its serialized snapshot. Embeddings are restored
// from the stored 9-significant-digit decimals, which round-trip float32
// exactly. Throws errc::corrupt_snapshot on any structural problem.
std::unique_ptr<MemoryStore> deserialize_store(const std::string& snapshot,
                                               std::shared_ptr<Embedder> embedder);

std::string sha256_hex(const std::string& bytes);

} // namespace ltmfair
