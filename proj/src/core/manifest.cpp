#include "core/manifest.hpp"

#include <cmath>

namespace ltmfair {

namespace {

const std::string kMemoryNames[] = {"vector", "cluster", "paged"};
const std::string kMitigationNames[] = {"none", "ssp", "dmt"};
const std::string kStageNames[] = {"read_time", "write_time"};

[[noreturn]] void fail(const std::string& field, const std::string& reason) {
    throw error(errc::invalid_manifest, field + ": " + reason);
}

} // namespace

const std::string& memory_kind_name(MemoryKind k) {
    return kMemoryNames[static_cast<int>(k)];
}

std::optional<MemoryKind> parse_memory_kind(const std::string& s) {
    for (int i = 0; i < 3; ++i)
        if (kMemoryNames[i] == s) return static_cast<MemoryKind>(i);
    return std::nullopt;
}

const std::string& mitigation_name(Mitigation m) {
    return kMitigationNames[static_cast<int>(m)];
}

std::optional<Mitigation> parse_mitigation(const std::string& s) {
    for (int i = 0; i < 3; ++i)
        if (kMitigationNames[i] == s) return static_cast<Mitigation>(i);
    return std::nullopt;
}

const std::string& dmt_stage_name(DmtStage s) {
    return kStageNames[static_cast<int>(s)];
}

std::optional<DmtStage> parse_dmt_stage(const std::string& s) {
    for (int i = 0; i < 2; ++i)
        if (kStageNames[i] == s) return static_cast<DmtStage>(i);
    return std::nullopt;
}

RunManifest RunManifest::with_defaults() {
    RunManifest m;
    for (Domain d : all_domains()) m.injected_domains.insert(d);
    return m;
}

void validate_manifest(const RunManifest& m) {
    if (m.total_turns < 0) fail("total_turns", "must be >= 0");
    if (m.audit_interval < 1) fail("audit_interval", "must be >= 1");
    if (m.total_turns % m.audit_interval != 0)
        fail("audit_interval", "must divide total_turns");
    if (!(m.injection_rate >= 0.0 && m.injection_rate <= 1.0))
        fail("injection_rate", "must lie in [0,1]");
    if (m.backend_id.empty()) fail("backend_id", "must be non-empty");
    if (m.injected_domains.empty())
        fail("injected_domains", "must name at least one domain");
    if (m.mitigation == Mitigation::dmt) {
        if (!m.dmt_threshold) fail("dmt_threshold", "required when mitigation=dmt");
        if (!(*m.dmt_threshold >= 0.0 && *m.dmt_threshold <= 1.0))
            fail("dmt_threshold", "must lie in [0,1]");
        if (!m.dmt_stage) fail("dmt_stage", "required when mitigation=dmt");
        if (!m.auditor_backend_id || m.auditor_backend_id->empty())
            fail("auditor_backend_id", "required when mitigation=dmt");
    } else {
        if (m.dmt_threshold) fail("dmt_threshold", "only valid when mitigation=dmt");
        if (m.dmt_stage) fail("dmt_stage", "only valid when mitigation=dmt");
        if (m.auditor_backend_id)
            fail("auditor_backend_id", "only valid when mitigation=dmt");
    }
    if (m.retrieval_k < 1) fail("retrieval_k", "must be >= 1");
    if (m.audit_scenarios_per_domain < 0)
        fail("audit_scenarios_per_domain", "must be >= 0");
    if (m.paged_window < 1) fail("paged_window", "must be >= 1");
    if (!(m.cluster_threshold >= -1.0 && m.cluster_threshold <= 1.0))
        fail("cluster_threshold", "must lie in [-1,1]");
}

ordered_json manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["seed"] = m.seed;
    j["total_turns"] = m.total_turns;
    j["audit_interval"] = m.audit_interval;
    j["injection_rate"] = m.injection_rate;
    j["memory_kind"] = memory_kind_name(m.memory_kind);
    j["backend_id"] = m.backend_id;
    j["mitigation"] = mitigation_name(m.mitigation);
    if (m.mitigation == Mitigation::dmt) {
        j["dmt_threshold"] = *m.dmt_threshold;
        j["dmt_stage"] = dmt_stage_name(*m.dmt_stage);
        j["auditor_backend_id"] = *m.auditor_backend_id;
    }
    ordered_json domains = ordered_json::array();
    for (Domain d : all_domains())
        if (m.injected_domains.count(d)) domains.push_back(domain_name(d));
    j["injected_domains"] = domains;
    j["retrieval_k"] = m.retrieval_k;
    j["audit_scenarios_per_domain"] = m.audit_scenarios_per_domain;
    j["paged_window"] = m.paged_window;
    j["cluster_threshold"] = m.cluster_threshold;
    return j;
}

RunManifest manifest_from_json(const ordered_json& j) {
    RunManifest m;
    try {
        m.seed = j.at("seed").get<uint64_t>();
        m.total_turns = j.at("total_turns").get<int>();
        m.audit_interval = j.at("audit_interval").get<int>();
        m.injection_rate = j.at("injection_rate").get<double>();

        const auto kind = parse_memory_kind(j.at("memory_kind").get<std::string>());
        if (!kind) fail("memory_kind", "expected vector|cluster|paged");
        m.memory_kind = *kind;

        m.backend_id = j.at("backend_id").get<std::string>();

        const auto mit = parse_mitigation(j.at("mitigation").get<std::string>());
        if (!mit) fail("mitigation", "expected none|ssp|dmt");
        m.mitigation = *mit;

        if (j.contains("dmt_threshold"))
            m.dmt_threshold = j.at("dmt_threshold").get<double>();
        if (j.contains("dmt_stage")) {
            const auto st = parse_dmt_stage(j.at("dmt_stage").get<std::string>());
            if (!st) fail("dmt_stage", "expected read_time|write_time");
            m.dmt_stage = st;
        }
        if (j.contains("auditor_backend_id"))
            m.auditor_backend_id = j.at("auditor_backend_id").get<std::string>();

        for (const auto& name : j.at("injected_domains")) {
            const auto d = parse_domain(name.get<std::string>());
            if (!d) fail("injected_domains", "unknown domain " + name.get<std::string>());
            m.injected_domains.insert(*d);
        }

        if (j.contains("retrieval_k")) m.retrieval_k = j.at("retrieval_k").get<int>();
        if (j.contains("audit_scenarios_per_domain"))
            m.audit_scenarios_per_domain =
                j.at("audit_scenarios_per_domain").get<int>();
        if (j.contains("paged_window"))
            m.paged_window = j.at("paged_window").get<int>();
        if (j.contains("cluster_threshold"))
            m.cluster_threshold = j.at("cluster_threshold").get<double>();
    } catch (const ordered_json::exception& e) {
        fail("manifest", e.what());
    }
    validate_manifest(m);
    return m;
}

std::string manifest_to_string(const RunManifest& m) {
    return manifest_to_json(m).dump(2) + "\n";
}

RunManifest manifest_from_string(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw error(errc::invalid_manifest, "manifest: not valid JSON");
    return manifest_from_json(j);
}

} // namespace ltmfair
