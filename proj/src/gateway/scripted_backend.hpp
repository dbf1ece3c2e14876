#pragma once

#include <string>
#include <vector>

#include "gateway/backend.hpp"

namespace ltmfair {

// Substring-triggered canned reply. First matching rule wins.
struct ScriptedRule {
    std::string needle;
    std::string answer;
};

// Deterministic offline backend: pure function of (rules, request). Useful as
// a stand-in model wherever the test only cares about the plumbing around the
// completion call.
class ScriptedBackend : public Backend {
public:
    ScriptedBackend() = default;
    explicit ScriptedBackend(std::vector<ScriptedRule> rules, std::string fallback = "");

    std::string complete(const ChatRequest& req) override;
    std::string id() const override { return "scripted"; }

private:
    std::vector<ScriptedRule> rules_;
    std::string fallback_;
};

}  // namespace ltmfair
