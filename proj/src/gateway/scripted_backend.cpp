#include "gateway/scripted_backend.hpp"

namespace ltmfair {

ScriptedBackend::ScriptedBackend(std::vector<ScriptedRule> rules, std::string fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {}

std::string ScriptedBackend::complete(const ChatRequest& req) {
    std::string haystack = req.system;
    for (const auto& m : req.messages) {
        haystack += '\n';
        haystack += m.content;
    }
    for (const auto& r : rules_) {
        if (haystack.find(r.needle) != std::string::npos) return r.answer;
    }
    if (!fallback_.empty()) return fallback_;
    if (req.force_json) return R"json({"answer": "(A)", "reasoning": "scripted default"})json";
    return "The best supported choice is (A).";
}

}  // namespace ltmfair
