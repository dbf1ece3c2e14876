#include <doctest.h>

#include <map>
#include <set>

#include "core/errors.hpp"
#include "dib/dataset.hpp"
#include "dib/templates.hpp"
#include "helpers.hpp"

using namespace ltmfair;

namespace {

std::vector<DibSample> full_set() {
    return expand_templates(default_template_pack());
}

}  // namespace

TEST_CASE("built-in pack expands to the published sample counts") {
    auto samples = full_set();
    CHECK(samples.size() == 3776);

    const std::map<Domain, size_t> expected_samples = {
        {Domain::race, 420},        {Domain::gender, 441},   {Domain::ses, 375},
        {Domain::age, 360},         {Domain::nationality, 480}, {Domain::religion, 360},
        {Domain::orientation, 500}, {Domain::disability, 300},  {Domain::appearance, 540},
    };
    const std::map<Domain, int> expected_scenarios = {
        {Domain::race, 105},        {Domain::gender, 147},   {Domain::ses, 125},
        {Domain::age, 120},         {Domain::nationality, 120}, {Domain::religion, 90},
        {Domain::orientation, 100}, {Domain::disability, 100},  {Domain::appearance, 180},
    };

    std::map<Domain, size_t> samples_by_domain;
    std::map<Domain, std::set<std::string>> scenarios_by_domain;
    for (const auto& s : samples) {
        ++samples_by_domain[s.domain];
        scenarios_by_domain[s.domain].insert(s.scenario_id);
    }
    for (Domain d : all_domains()) {
        CAPTURE(domain_name(d));
        CHECK(samples_by_domain[d] == expected_samples.at(d));
        CHECK(default_scenario_count(d) == expected_scenarios.at(d));
        CHECK(static_cast<int>(scenarios_by_domain[d].size()) == expected_scenarios.at(d));
        // samples per scenario = roster size
        CHECK(expected_samples.at(d) ==
              scenarios_by_domain[d].size() * roster(d).size());
    }
}

TEST_CASE("every scenario substitutes each roster group exactly once") {
    auto samples = full_set();
    std::map<std::string, std::set<std::string>> groups_by_scenario;
    std::map<std::string, Domain> scenario_domain;
    for (const auto& s : samples) {
        CHECK(groups_by_scenario[s.scenario_id].insert(s.group).second);
        scenario_domain[s.scenario_id] = s.domain;
    }
    for (const auto& [sid, groups] : groups_by_scenario) {
        const auto& expected = roster(scenario_domain[sid]);
        CHECK(groups.size() == expected.size());
        for (const auto& g : expected) CHECK(groups.count(g) == 1);
    }
}

TEST_CASE("attribute span covers exactly the substituted label") {
    auto samples = full_set();
    for (const auto& s : samples) {
        REQUIRE(s.attr_end <= s.prompt.size());
        REQUIRE(s.attr_start < s.attr_end);
        CHECK(s.prompt.substr(s.attr_start, s.attr_end - s.attr_start) == s.group);
    }
}

TEST_CASE("sample ids encode scenario and group index") {
    auto samples = full_set();
    const auto& first = samples.front();
    CHECK(first.domain == Domain::race);
    CHECK(first.scenario_id == "race-0000");
    CHECK(first.sample_id == "race-0000-g0");
    CHECK(first.group == roster(Domain::race)[0]);
    CHECK(first.decision_task == domain_decision_task(Domain::race));
}

TEST_CASE("counterfactual validation passes the built-in set") {
    auto samples = full_set();
    ValidationReport report = validate_counterfactual_set(samples);
    CHECK(report.scenarios_checked == 1087);  // sum of per-domain scenario counts
    CHECK(report.violations.empty());
}

TEST_CASE("validation flags a scenario whose prompts diverge outside the span") {
    auto samples = full_set();
    // Corrupt one byte outside the attribute span of one sample.
    for (auto& s : samples) {
        if (s.scenario_id != "age-0003") continue;
        if (s.group != roster(Domain::age)[1]) continue;
        size_t pos = (s.attr_start > 0) ? 0 : s.attr_end;
        s.prompt[pos] = (s.prompt[pos] == 'X') ? 'Y' : 'X';
        break;
    }
    ValidationReport report = validate_counterfactual_set(samples);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0] == "age-0003");
}

TEST_CASE("generation is deterministic") {
    auto a = full_set();
    auto b = full_set();
    REQUIRE(a.size() == b.size());
    CHECK(a == b);
    CHECK(dataset_to_jsonl(a) == dataset_to_jsonl(b));
}

TEST_CASE("expansion rejects malformed templates") {
    TemplateTuple no_placeholder{Domain::race, "persona", "no slot here", "task"};
    try {
        expand_templates({no_placeholder});
        FAIL_CHECK("expected placeholder_error");
    } catch (const error& e) {
        CHECK(e.code() == errc::placeholder_error);
    }

    TemplateTuple twice{Domain::race, "persona",
                        "one {ATTRIBUTE} and another {ATTRIBUTE}", "task"};
    try {
        expand_templates({twice});
        FAIL_CHECK("expected placeholder_error");
    } catch (const error& e) {
        CHECK(e.code() == errc::placeholder_error);
    }
}

TEST_CASE("JSONL round-trip is byte identical") {
    auto samples = full_set();
    std::string jsonl = dataset_to_jsonl(samples);
    auto parsed = parse_dataset(jsonl);
    CHECK(parsed == samples);
    CHECK(dataset_to_jsonl(parsed) == jsonl);

    // one line per sample, newline terminated
    CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') ==
          static_cast<long>(samples.size()));
    CHECK(jsonl.back() == '\n');
}

TEST_CASE("file round-trip preserves the set") {
    ltmfair::testing::TempDir tmp("dib_roundtrip");
    auto samples = full_set();
    size_t written = write_dataset(samples, (tmp / "dib.jsonl").string());
    CHECK(written == samples.size());
    auto back = read_dataset((tmp / "dib.jsonl").string());
    CHECK(back == samples);
}

TEST_CASE("parse_dataset reports the offending line") {
    std::string good = dataset_to_jsonl(full_set());
    auto lines = split_lines(good);
    std::string bad = lines[0] + "\n" + "{\"sample_id\": 42}" + "\n" + lines[1] + "\n";
    try {
        parse_dataset(bad);
        FAIL_CHECK("expected schema_error");
    } catch (const error& e) {
        CHECK(e.code() == errc::schema_error);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    try {
        parse_dataset("not json\n");
        FAIL_CHECK("expected schema_error");
    } catch (const error& e) {
        CHECK(e.code() == errc::schema_error);
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("template pack JSON round-trips") {
    const auto& pack = default_template_pack();
    CHECK(pack.size() == 1087);
    std::string json = template_pack_to_json(pack);
    auto back = load_template_pack(json);
    REQUIRE(back.size() == pack.size());
    for (size_t i = 0; i < pack.size(); ++i) {
        CHECK(back[i].domain == pack[i].domain);
        CHECK(back[i].persona == pack[i].persona);
        CHECK(back[i].context == pack[i].context);
        CHECK(back[i].decision_task == pack[i].decision_task);
    }
    CHECK(expand_templates(back).size() == 3776);
}

TEST_CASE("contexts are unique within each domain") {
    const auto& pack = default_template_pack();
    std::map<Domain, std::set<std::string>> contexts;
    for (const auto& t : pack) CHECK(contexts[t.domain].insert(t.context).second);
}

TEST_CASE("every prompt carries the demographic attribute line") {
    auto samples = full_set();
    for (const auto& s : samples) {
        std::string line = "Demographic attribute: " + s.group + ".";
        if (s.prompt.find(line) == std::string::npos) {
            CAPTURE(s.sample_id);
            FAIL_CHECK("prompt lacks its attribute line");
            break;
        }
    }
}
