#include "gateway/drift_backend.hpp"

#include <cctype>
#include <cmath>
#include <set>

#include <json.hpp>

#include "core/render.hpp"
#include "core/util.hpp"
#include "gateway/baselines.hpp"
#include "inject/bias_list.hpp"
#include "inject/phrase_bank.hpp"

namespace ltmfair {

namespace {

bool is_disfavored(Domain d, const std::string& label) {
    for (const auto& l : disfavored_labels(d))
        if (l == label) return true;
    return false;
}

double base_or_throw(const DriftConfig& cfg, Domain d, const std::string& label) {
    auto it = cfg.base_scores.find({d, label});
    if (it == cfg.base_scores.end())
        throw error(errc::unknown_group,
                    "no baseline for " + domain_name(d) + " group '" + label + "'");
    return it->second;
}

// "[<digits>] <text>" -> text, or nullopt.
std::optional<std::string> parse_entry_line(const std::string& line) {
    if (line.size() < 4 || line[0] != '[') return std::nullopt;
    size_t i = 1;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == 1 || i + 1 >= line.size() || line[i] != ']' || line[i + 1] != ' ')
        return std::nullopt;
    return line.substr(i + 2);
}

struct AttributeTarget {
    Domain domain;
    std::string label;
};

std::optional<AttributeTarget> parse_attribute_line(const std::string& text) {
    const std::string prefix = kAttributeLinePrefix;
    size_t pos = 0;
    while ((pos = text.find(prefix, pos)) != std::string::npos) {
        size_t start = pos + prefix.size();
        size_t dot = text.find('.', start);
        if (dot != std::string::npos) {
            std::string label = text.substr(start, dot - start);
            auto g = find_group(label);
            if (!g) g = find_group_normalized(label);
            if (g) return AttributeTarget{g->domain, g->label};
        }
        pos += prefix.size();
    }
    return std::nullopt;
}

// Weighted count of biased fragments as seen through the rendered memory
// block. Fragments annotated with a matching fairness-audit tag are inert for
// that domain: the model is assumed to heed the warning.
double weighted_bias_mass(const std::string& rendered, Domain audited,
                          const DriftConfig& cfg) {
    auto lines = split_lines(rendered);
    double mass = 0.0;
    for (size_t i = 0; i < lines.size(); ++i) {
        auto text = parse_entry_line(lines[i]);
        if (!text) continue;
        std::set<std::string> tagged_types;
        size_t j = i + 1;
        while (j < lines.size() && lines[j] == kAuditFenceOpen) {
            ++j;
            if (j < lines.size() && nlohmann::json::accept(lines[j])) {
                auto tag = nlohmann::json::parse(lines[j]);
                if (tag.is_object() && tag.contains("bias_type") && tag["bias_type"].is_string())
                    tagged_types.insert(tag["bias_type"].get<std::string>());
            }
            while (j < lines.size() && lines[j] != kAuditFenceClose) ++j;
            if (j < lines.size()) ++j;  // past the close fence
        }
        for (Domain dm : all_domains()) {
            if (!has_marker(*text, dm)) continue;
            if (tagged_types.count(domain_bias_type(dm))) continue;
            if (dm == audited) {
                mass += 1.0;
            } else if (dm == Domain::age) {
                mass -= cfg.age_suppression;
            } else {
                mass += cfg.cross_spill;
            }
        }
    }
    return mass;
}

}  // namespace

DriftConfig make_drift_config(const std::string& model_slug) {
    auto idx = baseline_model_index(model_slug);
    if (!idx)
        throw error(errc::invalid_argument, "unknown baseline model slug '" + model_slug + "'");
    DriftConfig cfg;
    cfg.model_slug = model_slug;
    for (const auto& row : baseline_rows())
        cfg.base_scores[{row.domain, row.label}] = row.scores[static_cast<size_t>(*idx)];
    return cfg;
}

int drift_score(const DriftConfig& cfg, Domain domain, const std::string& group,
                const RetrievedContext& context) {
    double base = base_or_throw(cfg, domain, group);
    int n = 0;
    for (const auto& e : context.entries)
        if (has_marker(e.text, domain)) ++n;
    double shift = cfg.sensitivity * n;
    double value = is_disfavored(domain, group) ? base - shift : base + shift;
    return clamp_score(std::llround(value)).value;
}

DriftBackend::DriftBackend(DriftConfig cfg) : cfg_(std::move(cfg)) {}

std::string DriftBackend::complete(const ChatRequest& req) {
    if (req.messages.empty())
        throw error(errc::invalid_argument, "request carries no messages");
    const std::string& user = req.messages.back().content;

    std::optional<AttributeTarget> target;
    if (req.force_json) target = parse_attribute_line(user);
    if (!target) {
        if (req.force_json)
            return R"json({"answer": "(A)", "reasoning": "no demographic context"})json";
        return "The best supported choice is (A).";
    }

    double mass = weighted_bias_mass(user, target->domain, cfg_);
    double delta = cfg_.sensitivity;
    if (req.system.find(kSspSentinel) != std::string::npos) delta *= cfg_.ssp_dampening;
    double base = base_or_throw(cfg_, target->domain, target->label);
    double value = is_disfavored(target->domain, target->label) ? base - delta * mass
                                                                : base + delta * mass;
    ClampResult score = clamp_score(std::llround(value));

    ordered_json j;
    j["score"] = score.value;
    j["reasoning"] = "Assessed " + target->label + " on " +
                     domain_decision_task(target->domain) + ".";
    return j.dump();
}

}  // namespace ltmfair
