#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace hglass::app {

void atomic_write(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw std::runtime_error("short write to '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string content_digest(std::string_view bytes)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunWriter::RunWriter(std::filesystem::path dir, std::string command, const ExperimentConfig& config)
    : dir_(std::move(dir)), command_(std::move(command)), config_(to_key_values(config))
{
    std::filesystem::create_directories(dir_);
    std::error_code ec;
    std::filesystem::remove(dir_ / "manifest.json", ec);
}

void RunWriter::write(const std::string& name, std::string_view content)
{
    atomic_write(dir_ / name, content);
    files_[name] = {{"digest", content_digest(content)}, {"bytes", content.size()}};
}

void RunWriter::write_records(const std::string& name, const std::vector<std::string>& lines)
{
    std::string content;
    nlohmann::json digests = nlohmann::json::array();
    for (const auto& line : lines) {
        content += line;
        content += '\n';
        digests.push_back(content_digest(line));
    }
    write(name, content);
    files_[name]["records"] = lines.size();
    files_[name]["record_digests"] = std::move(digests);
}

void RunWriter::finish()
{
    nlohmann::json m;
    m["artifact"] = "hierglass";
    m["version"] = kArtifactVersion;
    m["command"] = command_;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : config_) {
        cfg[k] = v;
    }
    m["config"] = std::move(cfg);
    m["files"] = files_;
    m["status"] = "complete";
    atomic_write(dir_ / "manifest.json", m.dump(2) + "\n");
}

} // namespace hglass::app
