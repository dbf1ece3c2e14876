#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "core/domain.hpp"
#include "core/util.hpp"

namespace ltmfair {

enum class MemoryKind { vector, cluster, paged };
enum class Mitigation { none, ssp, dmt };
enum class DmtStage { read_time, write_time };

const std::string& memory_kind_name(MemoryKind k);
std::optional<MemoryKind> parse_memory_kind(const std::string& s);
const std::string& mitigation_name(Mitigation m);
std::optional<Mitigation> parse_mitigation(const std::string& s);
const std::string& dmt_stage_name(DmtStage s);
std::optional<DmtStage> parse_dmt_stage(const std::string& s);

// Complete, reproducible description of one simulation run. Everything a
// run needs besides the dataset and backend wiring lives here; the runner
// echoes the canonical form into the output directory.
struct RunManifest {
    uint64_t seed = 0;
    int total_turns = 100;
    int audit_interval = 20;       // audits fire at t=0 and every multiple
    double injection_rate = 0.0;   // Bernoulli gate probability per turn
    MemoryKind memory_kind = MemoryKind::vector;
    std::string backend_id = "drift:deepseek-v3.1";
    Mitigation mitigation = Mitigation::none;
    std::optional<double> dmt_threshold;      // present iff mitigation == dmt
    std::optional<DmtStage> dmt_stage;        // present iff mitigation == dmt
    std::optional<std::string> auditor_backend_id; // present iff mitigation == dmt
    std::set<Domain> injected_domains;        // non-empty; all nine = mixed mode
    int retrieval_k = 5;
    int audit_scenarios_per_domain = 0;       // 0 = audit the full dataset
    int paged_window = 8;
    double cluster_threshold = 0.55;

    static RunManifest with_defaults();       // mixed-mode, all domains
};

// Throws error(errc::invalid_manifest) with "<field>: <reason>" on the first
// violated constraint.
void validate_manifest(const RunManifest& m);

ordered_json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const ordered_json& j);

std::string manifest_to_string(const RunManifest& m); // canonical, newline-terminated
RunManifest manifest_from_string(const std::string& text);

} // namespace ltmfair
