#pragma once

// Collects the files of one run in memory and writes them, plus a
// manifest.json listing each file with its SHA-256, into an output
// directory. Nothing time- or host-dependent goes into the manifest, so
// repeated runs with the same config produce identical directories.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

namespace regionlab {

inline constexpr int kManifestVersion = 1;

class OutputBundle {
public:
    /// Adds (or replaces) a file; name is relative to the output directory
    /// and must not contain path separators.
    void add(const std::string& name, std::string bytes);
    void add_json(const std::string& name, const nlohmann::json& j);

    bool contains(const std::string& name) const { return files_.contains(name); }
    const std::string& at(const std::string& name) const { return files_.at(name); }
    std::size_t size() const { return files_.size(); }

    /// Manifest document: subcommand, seed, resolved config and the sorted
    /// file list with sizes and hashes.
    nlohmann::json manifest(const std::string& subcommand, std::uint64_t seed,
                            const nlohmann::json& config) const;

    /// Writes every file atomically, then manifest.json. Creates dir.
    void write(const std::filesystem::path& dir, const std::string& subcommand, std::uint64_t seed,
               const nlohmann::json& config) const;

private:
    std::map<std::string, std::string> files_;
};

}  // namespace regionlab
