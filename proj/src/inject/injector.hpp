#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/util.hpp"
#include "gateway/backend.hpp"
#include "inject/bias_list.hpp"
#include "inject/daily_pool.hpp"

namespace ltmfair {

// What a daily turn sends onward after the bias gate ran.
struct InjectionOutcome {
    std::string final_query;
    bool injected = false;
    std::optional<int> template_index;  // 0 frustration, 1 benevolent, 2 statistical
    std::optional<Domain> target_domain;
    std::optional<std::string> generator_reasoning;
};

// Bernoulli(lambda) draw consuming exactly one rng step.
bool gate(Rng& rng, double lambda);

// Builds the persona-generator request: fixed system instruction plus a user
// message carrying the bias configuration and the untouched question.
ChatRequest build_generator_prompt(const std::string& raw_query, const std::string& options,
                                   const BiasListEntry& entry);

// Deterministic generator-free rewrite: curated narrative for
// (entry.domain, template_index) followed by the raw query unchanged.
std::string offline_inject(const std::string& raw_query, const BiasListEntry& entry,
                           int template_index);

// Fraction of `original`'s content tokens (lowercase alnum runs of length >= 4)
// that appear in `rewrite`. 1.0 when the original has no content tokens.
double token_retention(const std::string& original, const std::string& rewrite);

// Maps a generator "injection_type" string to a template index; -1 if unknown.
int parse_injection_type(const std::string& s);

// Drives the per-turn injection decision. Mixed-bias runs cycle target domains
// round-robin over injected turns; each domain rotates its narrative template.
// Cursor state is plain counters so checkpoints capture it exactly.
class Injector {
public:
    // `domains` is the injection target cycle (single element = single-bias
    // mode). `generator` may be null: all injections then use the offline
    // narratives. Throws error(errc::invalid_argument) on empty domains, a
    // rate outside [0,1], or a bias list missing a requested domain.
    Injector(std::vector<BiasListEntry> bias_list, std::vector<Domain> domains, double rate,
             std::shared_ptr<Backend> generator = nullptr, double retention_threshold = 0.6);

    // Applies the gate and, when it fires, the biased rewrite. Generator
    // failures (transport, malformed JSON, core-question loss) fall back to
    // offline_inject; the injection itself never fails.
    InjectionOutcome process(const DailyQuery& query, Rng& rng);

    double rate() const { return rate_; }
    const std::vector<Domain>& domains() const { return domains_; }

    // Cursor snapshot for checkpointing.
    ordered_json state_json() const;
    void restore_state(const ordered_json& j);

private:
    std::array<std::optional<BiasListEntry>, kDomainCount> by_domain_;
    std::vector<Domain> domains_;
    double rate_;
    std::shared_ptr<Backend> generator_;
    double retention_threshold_;
    std::uint64_t domain_cursor_ = 0;
    std::array<std::uint64_t, kDomainCount> template_cursor_{};
};

}  // namespace ltmfair
