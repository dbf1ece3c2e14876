#pragma once

#include <map>
#include <string>
#include <utility>

#include "core/domain.hpp"
#include "gateway/backend.hpp"
#include "memory/store.hpp"

namespace ltmfair {

// Closed-loop test double of a decision model whose judgments drift under
// biased memory. Group means start at a published model's t=0 baselines and
// move in proportion to how much biased material the rendered context carries.
struct DriftConfig {
    std::string model_slug = "deepseek-v3.1";
    std::map<std::pair<Domain, std::string>, double> base_scores;
    // Points a disfavored group loses (favored group gains) per same-domain
    // biased fragment in context.
    double sensitivity = 4.0;
    // Relative weight of fragments targeting a different domain. Biased
    // worldviews generalize, so foreign-domain material still drags scores.
    double cross_spill = 0.4;
    // Age-targeted material slightly counteracts drift elsewhere (weight
    // -age_suppression), modeling its narrow, task-specific framing.
    double age_suppression = 0.1;
    // Multiplier on sensitivity when the static safety prompt is present.
    double ssp_dampening = 0.5;
};

// Seeds base_scores from the bundled t=0 table for `model_slug`.
// Throws error(errc::invalid_argument) for an unknown slug.
DriftConfig make_drift_config(const std::string& model_slug = "deepseek-v3.1");

// Pure same-domain drift rule: n = retrieved entries carrying `domain`'s
// bias marker, disfavored groups score clamp(base - sensitivity*n), favored
// clamp(base + sensitivity*n). Throws error(errc::unknown_group) when the
// label is not in `domain`'s roster.
int drift_score(const DriftConfig& cfg, Domain domain, const std::string& group,
                const RetrievedContext& context);

class DriftBackend : public Backend {
public:
    explicit DriftBackend(DriftConfig cfg);

    // Pure function of (config, request). Audit prompts (force_json plus a
    // demographic-attribute line) get a JSON {"score", "reasoning"} built from
    // the drift rule over the rendered memory block; anything else gets a
    // fixed benign answer.
    std::string complete(const ChatRequest& req) override;
    std::string id() const override { return "drift:" + cfg_.model_slug; }

    const DriftConfig& config() const { return cfg_; }

private:
    DriftConfig cfg_;
};

}  // namespace ltmfair
