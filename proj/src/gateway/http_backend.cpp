#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "gateway/http_backend.hpp"

#include <cstdlib>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "core/util.hpp"
#include "gateway/rate_limiter.hpp"

namespace ltmfair {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return (v && *v) ? std::string(v) : fallback;
}

bool retryable_status(int status) { return status == 429 || (status >= 500 && status < 600); }

}  // namespace

struct HttpBackend::Impl {
    HttpBackendOptions opt;
    TokenBucket bucket;
    std::counting_semaphore<> in_flight;

    explicit Impl(HttpBackendOptions o)
        : opt(std::move(o)),
          bucket(opt.requests_per_second, 1.0,
                 opt.clock ? opt.clock : [] { return std::chrono::steady_clock::now(); }),
          in_flight(std::max(opt.max_in_flight, 1)) {
        if (opt.base_url.empty()) opt.base_url = env_or("MODEL_BASE_URL", "");
        if (opt.api_key.empty()) opt.api_key = env_or("MODEL_API_KEY", "");
        if (!opt.sleeper)
            opt.sleeper = [](std::chrono::milliseconds ms) { std::this_thread::sleep_for(ms); };
    }

    std::string body_for(const ChatRequest& req) const {
        ordered_json j;
        j["model"] = opt.model;
        j["messages"] = ordered_json::array();
        if (!req.system.empty())
            j["messages"].push_back({{"role", "system"}, {"content", req.system}});
        for (const auto& m : req.messages)
            j["messages"].push_back({{"role", m.role}, {"content", m.content}});
        j["temperature"] = req.temperature;
        if (req.force_json) j["response_format"] = {{"type", "json_object"}};
        return j.dump();
    }

    std::string extract_content(const std::string& body) const {
        try {
            auto j = ordered_json::parse(body);
            const auto& choices = j.at("choices");
            if (choices.is_array() && !choices.empty()) {
                const auto& content = choices.at(0).at("message").at("content");
                if (content.is_string()) return content.get<std::string>();
            }
        } catch (const nlohmann::json::exception&) {
        }
        throw error(errc::malformed_response,
                    "completion response lacks choices[0].message.content");
    }
};

HttpBackend::HttpBackend(HttpBackendOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
    if (impl_->opt.base_url.empty())
        throw error(errc::invalid_argument,
                    "http backend needs a base URL (flag or MODEL_BASE_URL)");
    if (impl_->opt.model.empty())
        throw error(errc::invalid_argument, "http backend needs a model name");
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::id() const { return "http:" + impl_->opt.model; }

std::string HttpBackend::complete(const ChatRequest& req) {
    auto& o = impl_->opt;
    const std::string body = impl_->body_for(req);

    impl_->in_flight.acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{impl_->in_flight};

    int last_status = 0;
    std::string last_note;
    for (int attempt = 1; attempt <= o.max_attempts; ++attempt) {
        if (attempt > 1) {
            auto backoff = o.backoff_base * (1LL << (attempt - 2));
            o.sleeper(std::chrono::duration_cast<std::chrono::milliseconds>(backoff));
        }
        impl_->bucket.acquire(o.sleeper);

        httplib::Client cli(o.base_url);
        cli.set_connection_timeout(o.request_timeout);
        cli.set_read_timeout(o.request_timeout);
        cli.set_write_timeout(o.request_timeout);
        httplib::Headers headers;
        if (!o.api_key.empty()) headers.emplace("Authorization", "Bearer " + o.api_key);

        auto res = cli.Post("/v1/chat/completions", headers, body, "application/json");
        if (!res) {
            last_status = 0;
            last_note = httplib::to_string(res.error());
            continue;  // transport error: retry
        }
        last_status = res->status;
        if (res->status == 200) return impl_->extract_content(res->body);
        if (res->status == 401 || res->status == 403)
            throw error(errc::auth_error, "authentication rejected (HTTP " +
                                              std::to_string(res->status) + ")");
        if (retryable_status(res->status)) {
            last_note = res->body.substr(0, 200);
            continue;
        }
        throw error(errc::backend_unavailable,
                    "completion endpoint returned HTTP " + std::to_string(res->status));
    }

    std::string detail = last_status ? "HTTP " + std::to_string(last_status) : "transport: " + last_note;
    if (last_status == 429)
        throw error(errc::rate_limited, "rate limited after " + std::to_string(o.max_attempts) +
                                            " attempts (" + detail + ")");
    throw error(errc::backend_unavailable, "gave up after " + std::to_string(o.max_attempts) +
                                               " attempts (" + detail + ")");
}

}  // namespace ltmfair
