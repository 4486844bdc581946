#pragma once

#include "config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hglass::app {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Writes through a temporary sibling file and renames it into place.
void atomic_write(const std::filesystem::path& path, std::string_view content);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string content_digest(std::string_view bytes);

/// Collects the files of one run and writes manifest.json last.
class RunWriter {
public:
    RunWriter(std::filesystem::path dir, std::string command, const ExperimentConfig& config);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    /// Writes `content` to dir/name and registers its digest.
    void write(const std::string& name, std::string_view content);

    /// Per-line digests are recorded for JSON-lines record files.
    void write_records(const std::string& name, const std::vector<std::string>& lines);

    void finish();

private:
    std::filesystem::path dir_;
    std::string command_;
    KeyValues config_;
    nlohmann::json files_ = nlohmann::json::object();
};

} // namespace hglass::app
