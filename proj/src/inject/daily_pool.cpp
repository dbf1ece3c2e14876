#include "inject/daily_pool.hpp"

#include <json.hpp>

#include "core/errors.hpp"
#include "core/util.hpp"

namespace ltmfair {

namespace {

struct PoolRecord {
    const char* id;
    const char* question;
    const char* options;
};

const PoolRecord kPool[] = {
#include "inject/daily_pool_data.inc"
};

}  // namespace

std::string DailyQuery::prompt() const {
    return question + "\nOptions: " + options;
}

const std::vector<DailyQuery>& default_daily_pool() {
    static const std::vector<DailyQuery> pool = [] {
        std::vector<DailyQuery> out;
        out.reserve(std::size(kPool));
        for (const auto& r : kPool) out.push_back({r.id, r.question, r.options});
        return out;
    }();
    return pool;
}

std::vector<DailyQuery> load_daily_pool(const std::string& jsonl_text) {
    std::vector<DailyQuery> out;
    size_t line_no = 0;
    for (const auto& line : split_lines(jsonl_text)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw error(errc::schema_error,
                        "daily pool line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j.contains("question") ||
            !j.contains("options") || !j["id"].is_string() ||
            !j["question"].is_string() || !j["options"].is_string()) {
            throw error(errc::schema_error, "daily pool line " + std::to_string(line_no) +
                                                ": expected {id, question, options} strings");
        }
        out.push_back({j["id"].get<std::string>(), j["question"].get<std::string>(),
                       j["options"].get<std::string>()});
    }
    if (out.empty()) throw error(errc::empty_input, "daily pool has no records");
    return out;
}

std::string daily_pool_to_jsonl(const std::vector<DailyQuery>& pool) {
    std::string out;
    for (const auto& q : pool) {
        ordered_json j;
        j["id"] = q.id;
        j["question"] = q.question;
        j["options"] = q.options;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace ltmfair
