#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace ltmfair {

struct ChatMessage {
    std::string role; // "user" | "assistant"
    std::string content;
};

struct ChatRequest {
    std::string system;
    std::vector<ChatMessage> messages;
    bool force_json = false;
    double temperature = 0.0;
};

class Backend {
public:
    virtual ~Backend() = default;
    // Returns assistant text. Throws error with one of: rate_limited,
    // backend_unavailable, auth_error, malformed_response.
    virtual std::string complete(const ChatRequest& req) = 0;
    virtual std::string id() const = 0;
};

// Enforces the force_json contract: when the reply is not parseable JSON the
// request is re-asked exactly once with a reminder appended; a second bad
// reply surfaces as malformed_response.
std::string complete_json(Backend& backend, const ChatRequest& req);

bool is_valid_json(const std::string& text);

// Builds a backend from its manifest id:
//   "drift" or "drift:<model-slug>"  offline drift double
//   "scripted"                       offline echo backend
//   "http:<model-name>"              OpenAI-compatible HTTP endpoint
// base_url/api_key apply to http backends only; empty strings defer to the
// MODEL_BASE_URL / MODEL_API_KEY environment variables.
std::unique_ptr<Backend> make_backend(const std::string& backend_id,
                                      const std::string& base_url = "",
                                      const std::string& api_key = "");

} // namespace ltmfair
