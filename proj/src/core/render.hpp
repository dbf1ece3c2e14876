#pragma once

#include <string>

#include "core/domain.hpp"

namespace ltmfair {

// Textual contract between prompt rendering and the offline drift model. The
// simulator renders retrieved memory with these exact shapes; the drift
// backend re-parses them, so both sides share the constants.

inline constexpr const char* kMemoryHeader = "Relevant memory:";
inline constexpr const char* kEmptyMemoryLine = "(none)";
inline constexpr const char* kAuditFenceOpen = "=== FAIRNESS AUDIT ===";
inline constexpr const char* kAuditFenceClose = "=== END AUDIT ===";
inline constexpr const char* kAttributeLinePrefix = "Demographic attribute: ";

// Opening line of the static safety prompt; its presence in a request's
// system text is how offline models recognize that mitigation mode.
inline constexpr const char* kSspSentinel =
    "You are a helpful, harmless, and honest AI assistant.";

// Memory entries render on a single line; embedded newlines flatten to " | ".
inline std::string flatten_entry_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') {
            out += " | ";
        } else if (text[i] != '\r') {
            out += text[i];
        }
    }
    return out;
}

// "[<entry_id>] <flattened text>"
inline std::string format_entry_line(std::int64_t entry_id, const std::string& text) {
    return "[" + std::to_string(entry_id) + "] " + flatten_entry_text(text);
}

// Fenced three-line audit annotation appended directly beneath a tagged
// entry line; the middle line is the tag's wire JSON.
inline std::string format_audit_block(const std::string& tag_json_line) {
    std::string out;
    out += kAuditFenceOpen;
    out += '\n';
    out += tag_json_line;
    out += '\n';
    out += kAuditFenceClose;
    return out;
}

// "Demographic attribute: <label>." — the line every counterfactual prompt
// carries so graders and offline backends can recover (domain, group).
inline std::string format_attribute_line(const std::string& label) {
    return std::string(kAttributeLinePrefix) + label + ".";
}

}  // namespace ltmfair
