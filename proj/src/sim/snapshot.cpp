#include "sim/snapshot.hpp"

#include <json.hpp>

#include "core/errors.hpp"

namespace ltmfair {

ordered_json snapshot_to_json(const AuditSnapshot& s) {
    ordered_json j;
    j["t"] = s.t;
    j["memory_digest_before"] = s.memory_digest_before;
    j["memory_digest_after"] = s.memory_digest_after;
    j["invalid_count"] = s.invalid_count;
    j["auditor_failures"] = s.auditor_failures;
    j["gbv"] = ordered_json::object();
    for (const auto& [d, v] : s.gbv) j["gbv"][domain_name(d)] = v;
    j["agbv"] = s.agbv;
    j["group_means"] = ordered_json::array();
    for (const auto& [key, stat] : s.group_means) {
        ordered_json g;
        g["domain"] = domain_name(key.first);
        g["group"] = key.second;
        g["mean"] = stat.mean;
        g["n"] = stat.n;
        j["group_means"].push_back(std::move(g));
    }
    j["results"] = ordered_json::array();
    for (const auto& r : s.results) {
        ordered_json q;
        q["sample_id"] = r.sample_id;
        q["domain"] = domain_name(r.domain);
        q["group"] = r.group;
        if (r.score)
            q["score"] = *r.score;
        else
            q["score"] = nullptr;
        q["valid"] = r.valid;
        if (r.failure_reason)
            q["failure_reason"] = *r.failure_reason;
        else
            q["failure_reason"] = nullptr;
        q["raw_response"] = r.raw_response;
        j["results"].push_back(std::move(q));
    }
    return j;
}

AuditSnapshot snapshot_from_json(const ordered_json& j) {
    auto fail = [](const std::string& why) -> error {
        return error(errc::corrupt_snapshot, "audit snapshot: " + why);
    };
    AuditSnapshot s;
    try {
        s.t = j.at("t").get<int>();
        s.memory_digest_before = j.at("memory_digest_before").get<std::string>();
        s.memory_digest_after = j.at("memory_digest_after").get<std::string>();
        s.invalid_count = j.at("invalid_count").get<size_t>();
        s.auditor_failures = j.value("auditor_failures", size_t{0});
        for (const auto& [name, v] : j.at("gbv").items()) {
            auto d = parse_domain(name);
            if (!d) throw fail("unknown domain '" + name + "'");
            s.gbv[*d] = v.get<double>();
        }
        s.agbv = j.at("agbv").get<double>();
        for (const auto& g : j.at("group_means")) {
            auto d = parse_domain(g.at("domain").get<std::string>());
            if (!d) throw fail("unknown domain in group_means");
            s.group_means[{*d, g.at("group").get<std::string>()}] = {
                g.at("mean").get<double>(), g.at("n").get<size_t>()};
        }
        for (const auto& q : j.at("results")) {
            AuditQueryResult r;
            r.sample_id = q.at("sample_id").get<std::string>();
            auto d = parse_domain(q.at("domain").get<std::string>());
            if (!d) throw fail("unknown domain in results");
            r.domain = *d;
            r.group = q.at("group").get<std::string>();
            if (!q.at("score").is_null()) r.score = q.at("score").get<int>();
            r.valid = q.at("valid").get<bool>();
            if (!q.at("failure_reason").is_null())
                r.failure_reason = q.at("failure_reason").get<std::string>();
            r.raw_response = q.at("raw_response").get<std::string>();
            s.results.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw fail(e.what());
    }
    return s;
}

std::string snapshot_to_string(const AuditSnapshot& s) { return snapshot_to_json(s).dump(2) + "\n"; }

AuditSnapshot snapshot_from_string(const std::string& text) {
    try {
        return snapshot_from_json(ordered_json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::corrupt_snapshot, std::string("audit snapshot: ") + e.what());
    }
}

}  // namespace ltmfair
