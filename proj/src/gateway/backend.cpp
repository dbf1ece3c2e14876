#include "gateway/backend.hpp"

#include <json.hpp>

#include "gateway/drift_backend.hpp"
#include "gateway/http_backend.hpp"
#include "gateway/scripted_backend.hpp"

namespace ltmfair {

bool is_valid_json(const std::string& text) { return nlohmann::json::accept(text); }

std::string complete_json(Backend& backend, const ChatRequest& req) {
    ChatRequest first = req;
    first.force_json = true;
    std::string out = backend.complete(first);
    if (is_valid_json(out)) return out;

    ChatRequest retry = first;
    retry.messages.push_back({"assistant", out});
    retry.messages.push_back(
        {"user", "Your previous reply was not valid JSON. Please respond in valid JSON."});
    out = backend.complete(retry);
    if (is_valid_json(out)) return out;
    throw error(errc::malformed_response, "backend returned invalid JSON twice");
}

std::unique_ptr<Backend> make_backend(const std::string& backend_id, const std::string& base_url,
                                      const std::string& api_key) {
    if (backend_id == "scripted") return std::make_unique<ScriptedBackend>();
    if (backend_id == "drift") return std::make_unique<DriftBackend>(make_drift_config());
    if (backend_id.rfind("drift:", 0) == 0)
        return std::make_unique<DriftBackend>(make_drift_config(backend_id.substr(6)));
    if (backend_id.rfind("http:", 0) == 0) {
        HttpBackendOptions opt;
        opt.base_url = base_url;
        opt.api_key = api_key;
        opt.model = backend_id.substr(5);
        return std::make_unique<HttpBackend>(std::move(opt));
    }
    throw error(errc::invalid_argument, "unknown backend id '" + backend_id + "'");
}

}  // namespace ltmfair
