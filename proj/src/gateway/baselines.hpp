#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/domain.hpp"

namespace ltmfair {

inline constexpr int kBaselineModelCount = 6;

// Published t=0 group-mean favorability scores for six production models,
// one row per (domain, group). These seed the offline drift backend and
// anchor the fairness-metric fixture tests.
struct BaselineRow {
    Domain domain;
    std::string label;
    std::array<double, kBaselineModelCount> scores;
};

const std::vector<std::string>& baseline_model_slugs();
std::optional<int> baseline_model_index(const std::string& slug);

const std::vector<BaselineRow>& baseline_rows();

// Throws errc::unknown_group when (domain,label) is not in the roster.
double baseline_score(int model_index, Domain domain, const std::string& label);

} // namespace ltmfair
