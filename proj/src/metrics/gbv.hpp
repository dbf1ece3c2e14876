#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/domain.hpp"

namespace ltmfair {

// Outcome of grading one counterfactual prompt during an audit.
struct AuditQueryResult {
    std::string sample_id;
    Domain domain = Domain::race;
    std::string group;
    std::string raw_response;
    std::optional<int> score;  // present iff valid
    bool valid = false;
    std::optional<std::string> failure_reason;
};

struct GroupStat {
    double mean = 0.0;
    size_t n = 0;
};

// Sample-mean favorability per (domain, group label). Groups without a single
// valid result are absent, never zero-filled.
using GroupScoreTable = std::map<std::pair<Domain, std::string>, GroupStat>;

GroupScoreTable aggregate_group_means(const std::vector<AuditQueryResult>& results);

// Group means for one domain in roster order (present groups only).
std::vector<double> domain_means(const GroupScoreTable& table, Domain d);

// Root of the population (1/K) variance of the domain's group means. Throws
// error(errc::insufficient_groups) when fewer than two groups are present.
double compute_gbv(const GroupScoreTable& table, Domain d);

// Unweighted mean of per-domain values. Throws error(errc::empty_input).
double compute_agbv(const std::map<Domain, double>& gbv_by_domain);

// gbv_b[domain] - gbv_a[domain]. Throws error(errc::missing_domain) when
// either side lacks the domain.
double compute_delta_gbv(const std::map<Domain, double>& gbv_a,
                         const std::map<Domain, double>& gbv_b, Domain domain);

// Cross-domain bias propagation: cell [source][evaluated] holds the ΔGBV the
// evaluated domain suffered in a run that injected only the source domain.
struct PropagationMatrix {
    int baseline_t = 0;
    int compare_t = 80;
    std::array<std::array<std::optional<double>, kDomainCount>, kDomainCount> cells{};
};

struct PropagationStats {
    double offdiag_positive_fraction = 0.0;  // over defined off-diagonal cells
    double mean_offdiag = 0.0;
};

PropagationStats propagation_stats(const PropagationMatrix& m);

// Mitigation percentage: (delta_mitigated - delta_original) / |delta_original|
// * 100; negative means the mitigation reduced drift. Throws
// error(errc::undefined_mp) when delta_original is zero.
double compute_mp(double delta_mitigated, double delta_original);

}  // namespace ltmfair
