#include "dib/dataset.hpp"

#include <cstdio>
#include <map>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/util.hpp"

namespace ltmfair {

namespace {

std::string scenario_id_for(Domain d, int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d", index);
    return domain_name(d) + "-" + buf;
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t n = 0;
    for (size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

DibSample sample_from_json(const ordered_json& j, size_t line_no) {
    auto fail = [&](const std::string& why) -> error {
        return error(errc::schema_error, "line " + std::to_string(line_no) + ": " + why);
    };
    if (!j.is_object()) throw fail("expected a JSON object");
    for (const char* field : {"sample_id", "scenario_id", "domain", "group", "persona", "prompt",
                              "decision_task", "attr_span"}) {
        if (!j.contains(field)) throw fail(std::string("missing field '") + field + "'");
    }
    DibSample s;
    try {
        s.sample_id = j["sample_id"].get<std::string>();
        s.scenario_id = j["scenario_id"].get<std::string>();
        auto d = parse_domain(j["domain"].get<std::string>());
        if (!d) throw fail("unknown domain '" + j["domain"].get<std::string>() + "'");
        s.domain = *d;
        s.group = j["group"].get<std::string>();
        s.persona = j["persona"].get<std::string>();
        s.prompt = j["prompt"].get<std::string>();
        s.decision_task = j["decision_task"].get<std::string>();
        const auto& span = j["attr_span"];
        if (!span.is_array() || span.size() != 2) throw fail("attr_span must be [start, end]");
        s.attr_start = span[0].get<size_t>();
        s.attr_end = span[1].get<size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw fail(e.what());
    }
    if (s.attr_end < s.attr_start || s.attr_end > s.prompt.size())
        throw fail("attr_span out of range");
    if (s.prompt.substr(s.attr_start, s.attr_end - s.attr_start) != s.group)
        throw fail("attr_span does not cover the group label");
    const auto& labels = roster(s.domain);
    bool known = false;
    for (const auto& l : labels) known = known || l == s.group;
    if (!known) throw fail("group '" + s.group + "' not in the " + domain_name(s.domain) + " roster");
    return s;
}

}  // namespace

std::vector<DibSample> expand_templates(const std::vector<TemplateTuple>& tuples) {
    std::vector<DibSample> out;
    std::array<int, kDomainCount> scenario_index{};
    for (const auto& t : tuples) {
        size_t placeholders = count_occurrences(t.context, kAttributePlaceholder);
        if (placeholders != 1)
            throw error(errc::placeholder_error,
                        "context must contain {ATTRIBUTE} exactly once, found " +
                            std::to_string(placeholders));
        const auto& labels = roster(t.domain);
        if (labels.empty()) throw error(errc::missing_roster, domain_name(t.domain));

        int index = scenario_index[static_cast<size_t>(t.domain)]++;
        std::string scenario = scenario_id_for(t.domain, index);
        size_t at = t.context.find(kAttributePlaceholder);
        for (size_t gi = 0; gi < labels.size(); ++gi) {
            DibSample s;
            s.scenario_id = scenario;
            s.sample_id = scenario + "-g" + std::to_string(gi);
            s.domain = t.domain;
            s.group = labels[gi];
            s.persona = t.persona;
            s.prompt = t.context.substr(0, at) + labels[gi] +
                       t.context.substr(at + std::string(kAttributePlaceholder).size());
            s.decision_task = t.decision_task;
            s.attr_start = at;
            s.attr_end = at + labels[gi].size();
            out.push_back(std::move(s));
        }
    }
    return out;
}

ValidationReport validate_counterfactual_set(const std::vector<DibSample>& samples) {
    // Prompts within a scenario must agree outside the substituted span, so
    // comparing each sample's prefix and suffix against the scenario's first
    // sample is equivalent to the full pairwise diff.
    std::map<std::string, std::vector<const DibSample*>> by_scenario;
    std::vector<std::string> order;
    for (const auto& s : samples) {
        auto [it, fresh] = by_scenario.try_emplace(s.scenario_id);
        if (fresh) order.push_back(s.scenario_id);
        it->second.push_back(&s);
    }

    ValidationReport report;
    report.scenarios_checked = by_scenario.size();
    for (const auto& id : order) {
        const auto& group = by_scenario[id];
        const DibSample& ref = *group.front();
        bool ok = true;
        if (ref.attr_end < ref.attr_start || ref.attr_end > ref.prompt.size()) ok = false;
        std::string prefix = ok ? ref.prompt.substr(0, ref.attr_start) : "";
        std::string suffix = ok ? ref.prompt.substr(ref.attr_end) : "";
        for (size_t i = 1; ok && i < group.size(); ++i) {
            const DibSample& s = *group[i];
            ok = s.attr_end >= s.attr_start && s.attr_end <= s.prompt.size() &&
                 s.persona == ref.persona && s.prompt.substr(0, s.attr_start) == prefix &&
                 s.prompt.substr(s.attr_end) == suffix;
        }
        if (!ok) report.violations.push_back(id);
    }
    return report;
}

std::string dataset_to_jsonl(const std::vector<DibSample>& samples) {
    std::string out;
    for (const auto& s : samples) {
        ordered_json j;
        j["sample_id"] = s.sample_id;
        j["scenario_id"] = s.scenario_id;
        j["domain"] = domain_name(s.domain);
        j["group"] = s.group;
        j["persona"] = s.persona;
        j["prompt"] = s.prompt;
        j["decision_task"] = s.decision_task;
        j["attr_span"] = {s.attr_start, s.attr_end};
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<DibSample> parse_dataset(const std::string& jsonl_text) {
    std::vector<DibSample> out;
    size_t line_no = 0;
    for (const auto& line : split_lines(jsonl_text)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw error(errc::schema_error, "line " + std::to_string(line_no) + ": " + e.what());
        }
        out.push_back(sample_from_json(j, line_no));
    }
    return out;
}

size_t write_dataset(const std::vector<DibSample>& samples, const std::string& path) {
    write_text_file_atomic(path, dataset_to_jsonl(samples));
    return samples.size();
}

std::vector<DibSample> read_dataset(const std::string& path) {
    return parse_dataset(read_text_file(path));
}

}  // namespace ltmfair
