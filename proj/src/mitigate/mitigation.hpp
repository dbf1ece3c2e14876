#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "core/domain.hpp"
#include "gateway/backend.hpp"
#include "memory/store.hpp"

namespace ltmfair {

// The fixed fairness system prompt. Prepended verbatim; detection of the full
// block makes a second application a no-op.
const std::string& ssp_text();
ChatRequest apply_ssp(const ChatRequest& req);

// Instruction the fairness auditor runs under.
const std::string& auditor_instruction();

// Sends one memory fragment to the auditor. Returns a tag when the auditor
// reports bias with suspicion >= tau ("confidence" field, 1.0 when absent);
// std::nullopt for a literal null, a below-threshold report, or unparseable
// output. Throws error(errc::auditor_unavailable) when the backend itself
// fails; callers pass the fragment through untagged and count the event.
std::optional<AuditTag> audit_fragment(Backend& auditor, const std::string& fragment_text,
                                       double tau);

// Offline auditor double: flags the curated narrative phrases the offline
// injector plants, so recall on offline-injected fragments and precision on
// the bundled neutral pool are both exact.
std::optional<AuditTag> scripted_auditor(const std::string& fragment_text);

// Renders retrieved context as prompt text: header line, one "[id] text" line
// per entry (newest ranking order preserved), each stored or supplied tag as a
// fenced audit block beneath its entry. With no tags anywhere the output is
// the plain unmitigated rendering.
std::string decorate_context(const RetrievedContext& ctx,
                             const std::map<int64_t, AuditTag>& tags = {});

// Fragments are immutable, so one auditor verdict per entry id holds for the
// whole run. Thread safe.
class TagCache {
public:
    // Returns the cached verdict or runs `compute` once and caches it.
    std::optional<AuditTag> get_or_compute(
        int64_t entry_id, const std::function<std::optional<AuditTag>()>& compute);

    size_t size() const;

private:
    mutable std::mutex mutex_;
    std::map<int64_t, std::optional<AuditTag>> cache_;
};

}  // namespace ltmfair
