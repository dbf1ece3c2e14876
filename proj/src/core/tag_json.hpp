#pragma once

#include "core/domain.hpp"
#include "core/util.hpp"

namespace ltmfair {

// Wire form of an audit tag. Key order is part of the canonical layout used
// by store digests and rendered audit blocks, so both serializers live here.
inline ordered_json tag_to_json(const AuditTag& t) {
    ordered_json j;
    j["warning"] = t.warning;
    j["bias_type"] = t.bias_type;
    j["bias_tendency"] = t.bias_tendency;
    j["correction_guideline"] = t.correction_guideline;
    j["confidence"] = t.suspicion;
    return j;
}

inline AuditTag tag_from_json(const ordered_json& j) {
    AuditTag t;
    t.warning = j.at("warning").get<std::string>();
    t.bias_type = j.at("bias_type").get<std::string>();
    t.bias_tendency = j.at("bias_tendency").get<std::string>();
    t.correction_guideline = j.at("correction_guideline").get<std::string>();
    t.suspicion = j.value("confidence", 1.0);
    return t;
}

} // namespace ltmfair
