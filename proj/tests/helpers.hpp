#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "core/util.hpp"

namespace ltmfair::testing {

inline std::filesystem::path data_dir() {
    return std::filesystem::path(LTMFAIR_DATA_DIR);
}

// Scratch directory wiped on scope exit so suites can run repeatedly.
class TempDir {
public:
    explicit TempDir(const std::string& prefix) {
        std::random_device rd;
        std::uint64_t tag = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        path_ = std::filesystem::temp_directory_path() /
                (prefix + "_" + std::to_string(tag));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

private:
    std::filesystem::path path_;
};

// Minimal CSV reader for the bundled fixtures: comma split, no quoting (the
// fixture files contain none), tolerates CRLF, skips blank lines.
inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> rows;
    for (std::string line : split_lines(read_text_file(path))) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> row;
        size_t start = 0;
        while (true) {
            size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                row.push_back(line.substr(start));
                break;
            }
            row.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ltmfair::testing
