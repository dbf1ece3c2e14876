#pragma once

#include <stdexcept>
#include <string>

namespace ltmfair {

// One code per failure mode the public API can surface. The C layer maps
// these onto lf_status values; tests match on the code, not the message.
enum class errc {
    invalid_argument,
    io_error,
    // domain core
    invalid_manifest,
    // dib pipeline
    missing_roster,
    placeholder_error,
    schema_error,
    // memory engines
    read_only_violation,
    embed_backend_error,
    corrupt_snapshot,
    // model gateway
    rate_limited,
    backend_unavailable,
    auth_error,
    malformed_response,
    unknown_group,
    // bias injector
    generator_unavailable,
    // simulation
    extraction_error,
    corrupt_checkpoint,
    // fairness metrics
    insufficient_groups,
    empty_input,
    missing_domain,
    undefined_mp,
    // mitigation
    auditor_unavailable,
    // reporting
    missing_snapshot,
};

class error : public std::runtime_error {
public:
    error(errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::invalid_argument:    return "invalid_argument";
        case errc::io_error:            return "io_error";
        case errc::invalid_manifest:    return "invalid_manifest";
        case errc::missing_roster:      return "missing_roster";
        case errc::placeholder_error:   return "placeholder_error";
        case errc::schema_error:        return "schema_error";
        case errc::read_only_violation: return "read_only_violation";
        case errc::embed_backend_error: return "embed_backend_error";
        case errc::corrupt_snapshot:    return "corrupt_snapshot";
        case errc::rate_limited:        return "rate_limited";
        case errc::backend_unavailable: return "backend_unavailable";
        case errc::auth_error:          return "auth_error";
        case errc::malformed_response:  return "malformed_response";
        case errc::unknown_group:       return "unknown_group";
        case errc::generator_unavailable: return "generator_unavailable";
        case errc::extraction_error:    return "extraction_error";
        case errc::corrupt_checkpoint:  return "corrupt_checkpoint";
        case errc::insufficient_groups: return "insufficient_groups";
        case errc::empty_input:         return "empty_input";
        case errc::missing_domain:      return "missing_domain";
        case errc::undefined_mp:        return "undefined_mp";
        case errc::auditor_unavailable: return "auditor_unavailable";
        case errc::missing_snapshot:    return "missing_snapshot";
    }
    return "unknown";
}

} // namespace ltmfair
