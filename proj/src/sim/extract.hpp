#pragma once

#include <string>

namespace ltmfair {

struct ExtractResult {
    int score = 0;
    bool clamped = false;  // stage-1 value fell outside [0,100]
    int stage = 0;         // 1 = JSON field, 2 = text scan
};

// The score extraction function: stage 1 reads an integer-valued `field` from
// a JSON response; stage 2 falls back to the last standalone integer in
// [0,100] in the raw text, skipping denominators ("out of 100", "/100") and
// decimal-fraction digits. Throws error(errc::extraction_error) when both
// stages fail.
ExtractResult extract_score(const std::string& response_text,
                            const std::string& field = "score");

}  // namespace ltmfair
