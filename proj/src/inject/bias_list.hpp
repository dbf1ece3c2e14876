#pragma once

#include <string>
#include <vector>

#include "core/domain.hpp"

namespace ltmfair {

// Directive knowledge base for the generator agent: one entry per domain,
// naming the target (disfavored) group, the privileged contrast group, the
// core stereotype, and the narrative guidance used to steer injections.
struct BiasListEntry {
    Domain domain;
    std::string target_group;     // literal phrase; doubles as the offline marker
    std::string non_target_group;
    std::string stereotype;
    std::string guidance;
};

// Embedded default (one entry per domain, canonical order).
const std::vector<BiasListEntry>& default_bias_list();

const BiasListEntry& bias_entry(Domain d);

// Loads a replacement pack: a JSON array of objects with keys
// domain/target_group/non_target_group/stereotype/guidance. Must cover each
// named domain at most once; throws errc::schema_error on structural issues.
std::vector<BiasListEntry> load_bias_list(const std::string& json_text);

std::string bias_list_to_json(const std::vector<BiasListEntry>& entries);

// Roster labels on the disfavored side of an entry's contrast. Everything
// else in the roster counts as favored for drift purposes.
const std::vector<std::string>& disfavored_labels(Domain d);

} // namespace ltmfair
