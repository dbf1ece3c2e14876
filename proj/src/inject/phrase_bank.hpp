#pragma once

#include <optional>
#include <string>

#include "core/domain.hpp"

namespace ltmfair {

// Curated 2-3 sentence biased narratives used by the offline injector, one
// per (domain, narrative template). Every narrative for a domain contains
// that domain's target-group phrase verbatim; the phrase is the detection
// marker shared by the scripted auditor and the offline drift backend.
const std::string& narrative(Domain d, int template_index);

// Scans text for any domain's target-group phrase. Returns the domain of the
// first phrase found (at the lowest byte offset), or nullopt for clean text.
std::optional<Domain> find_marker(const std::string& text);

// True when text contains the target-group phrase of this specific domain.
bool has_marker(const std::string& text, Domain d);

} // namespace ltmfair
