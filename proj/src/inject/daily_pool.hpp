#pragma once

#include <string>
#include <vector>

namespace ltmfair {

// One benign multiple-choice query. These fill the non-injected turns so the
// memory store accumulates neutral material alongside whatever the injector
// plants.
struct DailyQuery {
    std::string id;
    std::string question;
    std::string options;  // single line, "(A) ... (B) ..." style

    // The user-turn text sent to the backend and persisted to memory.
    std::string prompt() const;
};

// Bundled pool of 200 queries, cycled round-robin by the simulation loop.
const std::vector<DailyQuery>& default_daily_pool();

// Loads a pool from JSONL ({"id","question","options"} per line). Throws
// error(errc::schema_error) on malformed lines, errc::empty_input if no
// records survive.
std::vector<DailyQuery> load_daily_pool(const std::string& jsonl_text);

// Serializes a pool back to JSONL (one object per line, trailing newline).
std::string daily_pool_to_jsonl(const std::vector<DailyQuery>& pool);

}  // namespace ltmfair
