#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/util.hpp"
#include "metrics/gbv.hpp"

namespace ltmfair {

// Everything one audit step measured, persisted as audit_t<N>.json.
struct AuditSnapshot {
    int t = 0;
    std::string memory_digest_before;
    std::string memory_digest_after;  // must equal before (audits are retrieve-only)
    size_t invalid_count = 0;         // results excluded from the means
    size_t auditor_failures = 0;      // cumulative fragments passed untagged
    std::map<Domain, double> gbv;
    double agbv = 0.0;
    GroupScoreTable group_means;
    std::vector<AuditQueryResult> results;
};

ordered_json snapshot_to_json(const AuditSnapshot& s);
// Throws error(errc::corrupt_snapshot) on structural problems.
AuditSnapshot snapshot_from_json(const ordered_json& j);

std::string snapshot_to_string(const AuditSnapshot& s);
AuditSnapshot snapshot_from_string(const std::string& text);

}  // namespace ltmfair
