#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace hsikit {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string to_hex(std::uint64_t value);

// Owns one output directory for the lifetime of a run: takes the lock file
// on construction (one run per directory), collects the paths the command
// writes, and emits manifest.json with the resolved configuration and a
// checksum per artifact. No timestamps, so reruns are byte-identical.
class RunContext {
public:
    explicit RunContext(std::filesystem::path out_dir);
    ~RunContext();

    RunContext(const RunContext&) = delete;
    RunContext& operator=(const RunContext&) = delete;

    const std::filesystem::path& dir() const { return out_dir_; }
    std::filesystem::path path(const std::string& name) const { return out_dir_ / name; }

    // register an artifact written under dir()
    void record(const std::filesystem::path& file);

    void write_json(const std::string& name, const ordered_json& payload);

    void write_manifest(const std::string& command, const std::vector<std::string>& config_lines);

private:
    std::filesystem::path out_dir_;
    std::filesystem::path lock_path_;
    std::vector<std::filesystem::path> outputs_;
};

} // namespace hsikit
