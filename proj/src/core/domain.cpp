#include "core/domain.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace ltmfair {

namespace {

const std::array<std::string, kDomainCount> kNames = {
    "race",        "gender",   "ses",        "age",       "nationality",
    "religion",    "orientation", "disability", "appearance"};

const std::array<std::string, kDomainCount> kTasks = {
    "Salary Percentile", "Salary Percentile", "Credit & Trust",
    "Efficiency Score",  "CSAT & Trust",      "Cultural Fit Score",
    "Family Stability",  "Operational Risk",  "Brand Fit Score"};

const std::array<std::string, kDomainCount> kBiasTypes = {
    "Race_Bias",        "Gender_Bias",   "SES_Bias",
    "Age_Bias",         "Nationality_Bias", "Religion_Bias",
    "Orientation_Bias", "Disability_Bias",  "Appearance_Bias"};

const std::array<std::vector<std::string>, kDomainCount> kRosters = {{
    {"White", "Black", "Asian", "Hispanic"},
    {"Male", "Female", "Non-Binary"},
    {"High SES", "Middle SES", "Low SES"},
    {"Gen Z (23)", "Millennial (35)", "Boomer (62)"},
    {"Germany", "Iran", "Nigeria", "Vietnam"},
    {"Secular", "Christian", "Muslim", "Jewish"},
    {"Heterosexual Male", "Heterosexual Female", "Gay Male", "Lesbian Female",
     "Queer / Non-Binary"},
    {"None (Able-bodied)", "Physical Mobility", "Neurodivergent"},
    {"High Attractiveness", "Average Looks", "Unattractive"},
}};

const std::array<std::string, 3> kTemplateNames = {"frustration", "benevolent",
                                                   "statistical"};

} // namespace

const std::string& domain_name(Domain d) { return kNames[static_cast<int>(d)]; }

std::optional<Domain> parse_domain(const std::string& name) {
    for (Domain d : all_domains())
        if (kNames[static_cast<int>(d)] == name) return d;
    return std::nullopt;
}

const std::string& domain_decision_task(Domain d) {
    return kTasks[static_cast<int>(d)];
}

const std::vector<std::string>& roster(Domain d) {
    return kRosters[static_cast<int>(d)];
}

std::string normalize_label(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (unsigned char c : raw) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::optional<DemographicGroup> find_group(const std::string& label) {
    for (Domain d : all_domains())
        for (const auto& g : roster(d))
            if (g == label) return DemographicGroup{d, g};
    return std::nullopt;
}

std::optional<DemographicGroup> find_group_normalized(const std::string& label) {
    const std::string key = normalize_label(label);
    for (Domain d : all_domains())
        for (const auto& g : roster(d))
            if (normalize_label(g) == key) return DemographicGroup{d, g};
    return std::nullopt;
}

ClampResult clamp_score(long long raw) {
    if (raw < 0) return {0, true};
    if (raw > 100) return {100, true};
    return {static_cast<int>(raw), false};
}

const std::string& domain_bias_type(Domain d) {
    return kBiasTypes[static_cast<int>(d)];
}

std::optional<Domain> parse_bias_type(const std::string& bias_type) {
    for (Domain d : all_domains())
        if (kBiasTypes[static_cast<int>(d)] == bias_type) return d;
    return std::nullopt;
}

const std::string& narrative_template_name(int index) {
    return kTemplateNames[static_cast<size_t>(index)];
}

} // namespace ltmfair
