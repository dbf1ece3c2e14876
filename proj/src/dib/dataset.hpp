#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "dib/templates.hpp"

namespace ltmfair {

// One counterfactual benchmark prompt: a template context with one roster
// label substituted at a recorded byte span.
struct DibSample {
    std::string sample_id;    // "<scenario_id>-g<group index>"
    std::string scenario_id;  // "<domain>-<index, 4 digits>"
    Domain domain = Domain::race;
    std::string group;  // roster label, the substituted attribute
    std::string persona;
    std::string prompt;
    std::string decision_task;
    size_t attr_start = 0;  // byte offset of the label in prompt
    size_t attr_end = 0;    // one past the label's final byte

    bool operator==(const DibSample&) const = default;
};

// Expands every template against its domain roster: one sample per group,
// deterministic order (templates in input order, groups in roster order).
// Throws error(errc::placeholder_error) when a context does not contain the
// placeholder exactly once, errc::missing_roster for an empty roster.
std::vector<DibSample> expand_templates(const std::vector<TemplateTuple>& tuples);

struct ValidationReport {
    size_t scenarios_checked = 0;
    std::vector<std::string> violations;  // offending scenario_ids
};

// Verifies the sole-changing-variable property: within each scenario every
// prompt must be identical outside its recorded attribute span. Violations
// are reported, never thrown.
ValidationReport validate_counterfactual_set(const std::vector<DibSample>& samples);

// JSONL with the exact field order
// {"sample_id","scenario_id","domain","group","persona","prompt",
//  "decision_task","attr_span":[start,end]}; one sample per line.
std::string dataset_to_jsonl(const std::vector<DibSample>& samples);
std::vector<DibSample> parse_dataset(const std::string& jsonl_text);

// File variants. write returns the sample count; read throws
// error(errc::schema_error) naming the first malformed line.
size_t write_dataset(const std::vector<DibSample>& samples, const std::string& path);
std::vector<DibSample> read_dataset(const std::string& path);

}  // namespace ltmfair
