#pragma once

#include <string>
#include <vector>

#include "core/domain.hpp"

namespace ltmfair {

// One benchmark scenario before counterfactual expansion: a system persona,
// a context holding exactly one {ATTRIBUTE} placeholder, and the domain's
// decision task label.
struct TemplateTuple {
    Domain domain;
    std::string persona;
    std::string context;
    std::string decision_task;
};

inline constexpr const char* kAttributePlaceholder = "{ATTRIBUTE}";

// Scenario count per domain in the built-in pack. Multiplied by the roster
// sizes these give the published per-domain sample totals (420/441/375/360/
// 480/360/500/300/540, 3776 overall).
int default_scenario_count(Domain d);

// Built-in pack: scenarios are composed from per-domain part lists (8 leads x
// 6 profiles x 5 details, mixed-radix order), so regeneration is byte-stable
// and every context is unique within its domain.
const std::vector<TemplateTuple>& default_template_pack();

// Template packs as JSON: array of {domain, persona, context, decision_task}.
std::vector<TemplateTuple> load_template_pack(const std::string& json_text);
std::string template_pack_to_json(const std::vector<TemplateTuple>& pack);

}  // namespace ltmfair
