#include "context.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>

#include "hsi/errors.hpp"

namespace hsikit {

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hsi::Error(hsi::ErrorCode::IoFailure, "cannot checksum " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[8192];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    return hash;
}

std::string to_hex(std::uint64_t value) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

RunContext::RunContext(std::filesystem::path out_dir) : out_dir_(std::move(out_dir)) {
    std::filesystem::create_directories(out_dir_);
    lock_path_ = out_dir_ / ".hsikit.lock";
    const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0)
        throw hsi::Error(hsi::ErrorCode::BadConfig,
                         "output directory is locked by another run (remove " +
                             lock_path_.string() + " if that run is gone)");
    ::close(fd);
}

RunContext::~RunContext() {
    std::error_code ec;
    std::filesystem::remove(lock_path_, ec);
}

void RunContext::record(const std::filesystem::path& file) { outputs_.push_back(file); }

void RunContext::write_json(const std::string& name, const ordered_json& payload) {
    const std::filesystem::path file = path(name);
    std::ofstream out(file);
    if (!out) throw hsi::Error(hsi::ErrorCode::IoFailure, "cannot write " + file.string());
    out << payload.dump(2) << "\n";
    out.close();
    if (!out) throw hsi::Error(hsi::ErrorCode::IoFailure, "short write on " + file.string());
    record(file);
}

void RunContext::write_manifest(const std::string& command,
                                const std::vector<std::string>& config_lines) {
    ordered_json manifest;
    manifest["command"] = command;
    manifest["config"] = config_lines;
    ordered_json files = ordered_json::array();
    for (const auto& file : outputs_) {
        ordered_json entry;
        entry["path"] = std::filesystem::relative(file, out_dir_).generic_string();
        entry["bytes"] = static_cast<std::uint64_t>(std::filesystem::file_size(file));
        entry["fnv1a64"] = to_hex(fnv1a64_file(file));
        files.push_back(entry);
    }
    manifest["outputs"] = files;
    const std::filesystem::path file = path("manifest.json");
    std::ofstream out(file);
    out << manifest.dump(2) << "\n";
}

} // namespace hsikit
