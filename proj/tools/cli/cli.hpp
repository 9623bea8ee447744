#pragma once

// Command-line front end. Every subcommand takes a JSON config (optionally
// starting from a named preset), writes its files through an OutputBundle
// and finishes with a manifest.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "regionlab/field.hpp"
#include "regionlab/manifest.hpp"
#include "regionlab/network.hpp"
#include "regionlab/presets.hpp"

namespace regionlab::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kConfigError = 2 };

/// Entry point shared by main() and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Resolved invocation: config after preset, file and flag merging. A
/// --seed flag lands in config["seed"].
struct Invocation {
    std::string command;
    json config;
    std::filesystem::path out_dir;
    std::filesystem::path base_dir;  // relative network files resolve against this
};

/// Names of the presets available to a subcommand.
std::vector<std::string> preset_names(const std::string& command);
/// Preset config document; ContractError for an unknown name.
json preset_config(const std::string& command, const std::string& name);

// Shared config pieces.
GridSpec parse_grid(const json& j);
json grid_to_json(const GridSpec& g);
Labeling parse_labeling(const json& j);
/// Network from {"file": path}, {"preset": name, ...}, {"pipeline": {...}}
/// or an inline network document.
Network parse_network(const json& j, const std::filesystem::path& base_dir);
/// Lower-case letters, digits, '-', '_' and '.'; anything else becomes '_'.
std::string safe_name(const std::string& name);

/// Adds "<stem>.csv" and, when pgm is set, "<stem>.pgm".
void add_field(OutputBundle& out, const std::string& stem, const FieldMap& map, bool pgm);

// Subcommands. Each fills the bundle from the resolved invocation and
// returns the seed recorded in the manifest.
std::uint64_t cmd_field(const Invocation& inv, OutputBundle& out);
std::uint64_t cmd_regions(const Invocation& inv, OutputBundle& out);
std::uint64_t cmd_train(const Invocation& inv, OutputBundle& out);
std::uint64_t cmd_partialbp(const Invocation& inv, OutputBundle& out);
std::uint64_t cmd_tverberg(const Invocation& inv, OutputBundle& out);

}  // namespace regionlab::cli
