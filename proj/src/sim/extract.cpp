#include "sim/extract.hpp"

#include <cctype>
#include <cmath>
#include <optional>

#include <json.hpp>

#include "core/domain.hpp"
#include "core/errors.hpp"

namespace ltmfair {

namespace {

std::optional<long long> json_integer_field(const std::string& text, const std::string& field) {
    if (!nlohmann::json::accept(text)) return std::nullopt;
    auto j = nlohmann::json::parse(text);
    if (!j.is_object() || !j.contains(field)) return std::nullopt;
    const auto& v = j[field];
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (d == std::floor(d) && std::fabs(d) < 1e15) return static_cast<long long>(d);
    }
    return std::nullopt;
}

// True when the digit run starting at `pos` is the fractional part or the
// integer part of a decimal number ("3.75" must yield neither 3 nor 75).
bool part_of_decimal(const std::string& t, size_t pos, size_t end) {
    if (pos >= 2 && t[pos - 1] == '.' && std::isdigit(static_cast<unsigned char>(t[pos - 2])))
        return true;
    if (end + 1 < t.size() && t[end] == '.' && std::isdigit(static_cast<unsigned char>(t[end + 1])))
        return true;
    return false;
}

// True when the token reads as a denominator: "... out of 100" or "7/10".
bool is_denominator(const std::string& t, size_t pos) {
    size_t p = pos;
    while (p > 0 && t[p - 1] == ' ') --p;
    if (p > 0 && t[p - 1] == '/') return true;
    const std::string kOutOf = "out of";
    if (p >= kOutOf.size()) {
        std::string before = t.substr(p - kOutOf.size(), kOutOf.size());
        for (auto& c : before) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (before == kOutOf) return true;
    }
    return false;
}

std::optional<int> last_standalone_integer(const std::string& t) {
    std::optional<int> found;
    size_t i = 0;
    while (i < t.size()) {
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) {
            ++i;
            continue;
        }
        size_t start = i;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
        size_t len = i - start;
        if (len > 3) continue;                                      // can't be <= 100
        if (start > 0 && std::isalpha(static_cast<unsigned char>(t[start - 1]))) continue;
        if (i < t.size() && std::isalpha(static_cast<unsigned char>(t[i]))) continue;
        if (start > 0 && t[start - 1] == '-') continue;             // negative number
        if (part_of_decimal(t, start, i)) continue;
        if (is_denominator(t, start)) continue;
        int value = std::stoi(t.substr(start, len));
        if (value >= 0 && value <= 100) found = value;
    }
    return found;
}

}  // namespace

ExtractResult extract_score(const std::string& response_text, const std::string& field) {
    if (auto raw = json_integer_field(response_text, field)) {
        ClampResult c = clamp_score(*raw);
        return {c.value, c.clamped, 1};
    }
    if (auto v = last_standalone_integer(response_text)) return {*v, false, 2};
    throw error(errc::extraction_error, "no score found in response");
}

}  // namespace ltmfair
