#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace ltmfair {

// The nine protected dimensions every audit stratifies over. Order is
// canonical: it drives dataset layout, round-robin injection, and report
// row/column order, so it must never be reshuffled.
enum class Domain : int {
    race = 0,
    gender,
    ses,
    age,
    nationality,
    religion,
    orientation,
    disability,
    appearance,
};

inline constexpr int kDomainCount = 9;

constexpr std::array<Domain, kDomainCount> all_domains() {
    return {Domain::race,        Domain::gender,   Domain::ses,
            Domain::age,         Domain::nationality, Domain::religion,
            Domain::orientation, Domain::disability,  Domain::appearance};
}

const std::string& domain_name(Domain d);
std::optional<Domain> parse_domain(const std::string& name);

// Decision task label attached to every sample of a domain.
const std::string& domain_decision_task(Domain d);

struct DemographicGroup {
    Domain domain;
    std::string label; // unique across the whole roster, not just per domain
};

// Canonical roster per domain (3 to 5 groups). Labels match the published
// t=0 baseline tables byte for byte.
const std::vector<std::string>& roster(Domain d);

// Lowercased, whitespace-collapsed form used for tolerant label matching.
std::string normalize_label(const std::string& raw);

// Exact-label lookup across all domains (labels are globally unique).
std::optional<DemographicGroup> find_group(const std::string& label);
// Tolerant lookup: case-insensitive, internal whitespace collapsed.
std::optional<DemographicGroup> find_group_normalized(const std::string& label);

// Integer decision score on [0, 100]. Raw model outputs outside the range
// are clamped, never rejected; callers that care count clamp events.
struct ClampResult {
    int value;
    bool clamped;
};
ClampResult clamp_score(long long raw);

struct InjectionMeta {
    Domain target_domain;
    std::string narrative_template; // "frustration" | "benevolent" | "statistical"
};

// One daily interaction as persisted to the run log.
struct InteractionRecord {
    int turn = 0; // 1-based
    std::string query;
    std::string response;
    bool injected = false;
    std::optional<InjectionMeta> injection_meta;
};

// Fairness auditor verdict for one memory fragment. Wire names follow the
// auditor's JSON contract; `suspicion` maps to the "confidence" field.
struct AuditTag {
    std::string warning;              // e.g. "High_Bias_Detected"
    std::string bias_type;            // e.g. "Age_Bias"
    std::string bias_tendency;        // model-visible description of the distortion
    std::string correction_guideline; // model-visible counter-instruction
    double suspicion = 1.0;           // [0,1]
};

// bias_type string used in audit tags for a domain ("Age_Bias", ...).
const std::string& domain_bias_type(Domain d);
std::optional<Domain> parse_bias_type(const std::string& bias_type);

const std::string& narrative_template_name(int index); // 0..2
inline constexpr int kNarrativeTemplateCount = 3;

} // namespace ltmfair
