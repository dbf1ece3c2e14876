#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "gateway/backend.hpp"

namespace ltmfair {

class TokenBucket;

struct HttpBackendOptions {
    std::string base_url;  // "http(s)://host[:port]"; "/v1/chat/completions" is appended
    std::string api_key;
    std::string model;
    double requests_per_second = 4.0;
    int max_attempts = 5;                         // total tries per request
    std::chrono::milliseconds backoff_base{500};  // doubled after each retry
    int max_in_flight = 4;
    std::chrono::seconds request_timeout{60};
    // Injectable for tests; defaults to std::this_thread::sleep_for.
    std::function<void(std::chrono::milliseconds)> sleeper;
    // Injectable clock for the rate limiter.
    std::function<std::chrono::steady_clock::time_point()> clock;
};

// OpenAI-compatible chat-completions client. Transient failures (HTTP 429,
// 5xx, transport errors) retry with exponential backoff under a token-bucket
// rate limit; auth and schema problems surface immediately.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendOptions options);
    ~HttpBackend() override;

    std::string complete(const ChatRequest& req) override;
    std::string id() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ltmfair
