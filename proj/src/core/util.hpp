#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace ltmfair {

using ordered_json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path);
// Writes via a sibling temp file + rename so readers never observe a torn file.
void write_text_file_atomic(const std::filesystem::path& path,
                            const std::string& content);

std::vector<std::string> split_lines(const std::string& text);

// Fixed-precision decimal text (no locale, no exponent) for serialized floats.
std::string format_fixed(double v, int decimals);

// SplitMix64: tiny, portable, serializable as a single integer. The whole
// harness draws from this generator so checkpoints can capture its state
// losslessly and a Bernoulli gate costs exactly one step.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0,1) consuming exactly one step.
    double next_unit() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    uint64_t state() const { return state_; }
    void set_state(uint64_t s) { state_ = s; }

private:
    uint64_t state_;
};

} // namespace ltmfair
