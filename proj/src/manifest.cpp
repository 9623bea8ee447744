#include "regionlab/manifest.hpp"

#include "regionlab/error.hpp"
#include "regionlab/io.hpp"

namespace regionlab {

using nlohmann::json;

void OutputBundle::add(const std::string& name, std::string bytes) {
    require(!name.empty() && name.find('/') == std::string::npos && name.find('\\') == std::string::npos &&
                name != "." && name != "..",
            "OutputBundle: bad file name '" + name + "'");
    require(name != "manifest.json", "OutputBundle: manifest.json is reserved");
    files_[name] = std::move(bytes);
}

void OutputBundle::add_json(const std::string& name, const json& j) { add(name, j.dump(2) + "\n"); }

json OutputBundle::manifest(const std::string& subcommand, std::uint64_t seed, const json& config) const {
    json files = json::array();
    for (const auto& [name, bytes] : files_)
        files.push_back({{"path", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    return {{"format", "regionlab-manifest"},
            {"version", kManifestVersion},
            {"subcommand", subcommand},
            {"seed", seed},
            {"config", config},
            {"files", std::move(files)}};
}

void OutputBundle::write(const std::filesystem::path& dir, const std::string& subcommand, std::uint64_t seed,
                         const json& config) const {
    std::filesystem::create_directories(dir);
    for (const auto& [name, bytes] : files_) write_file_atomic(dir / name, bytes);
    write_file_atomic(dir / "manifest.json", manifest(subcommand, seed, config).dump(2) + "\n");
}

}  // namespace regionlab
