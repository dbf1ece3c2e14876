#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core/manifest.hpp"
#include "dib/dataset.hpp"
#include "gateway/backend.hpp"
#include "inject/daily_pool.hpp"
#include "sim/snapshot.hpp"

namespace ltmfair {

struct RunOptions {
    std::string out_dir;
    std::shared_ptr<Backend> backend;    // decision model; required
    std::shared_ptr<Backend> generator;  // bias rewriter; null = offline narratives
    std::shared_ptr<Backend> auditor;    // DMT auditor; null = scripted matcher
    std::vector<DibSample> dib;          // required non-empty
    std::vector<DailyQuery> daily_pool;  // empty = bundled pool
    bool resume = false;                 // continue from out_dir's checkpoint
    int stop_after_turn = -1;            // pause after this turn (testing aid)
    std::function<void(const AuditSnapshot&)> on_audit;  // progress hook
};

// Executes the longitudinal protocol: an audit at t=0, then total_turns daily
// turns (inject -> retrieve -> respond -> memory write) with further audits at
// every multiple of audit_interval. Writes manifest.json, runlog.jsonl,
// audit_t<N>.json and checkpoint/ under out_dir; returns the snapshots in
// schedule order. A backend failure aborts at the turn boundary with the last
// completed turn checkpointed; resume picks up from there.
std::vector<AuditSnapshot> run(const RunManifest& manifest, RunOptions options);

// Last completed turn recorded in out_dir's checkpoint.
// Throws error(errc::corrupt_checkpoint) when absent or damaged.
int checkpoint_turn(const std::string& out_dir);

}  // namespace ltmfair
