#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "regionlab/error.hpp"
#include "regionlab/io.hpp"

namespace regionlab::cli {

namespace {

using Command = std::function<std::uint64_t(const Invocation&, OutputBundle&)>;

const std::map<std::string, std::pair<Command, std::string>>& commands() {
    static const std::map<std::string, std::pair<Command, std::string>> c = {
        {"field", {cmd_field, "Sample network quantities on a 2-D grid"}},
        {"regions", {cmd_regions, "Build set-operation networks and region analytics"}},
        {"train", {cmd_train, "Run gradient-descent experiments"}},
        {"partialbp", {cmd_partialbp, "Reach of the cut-off backward pass over a grid"}},
        {"tverberg", {cmd_tverberg, "Draw and verify a family of disjoint affine subspaces"}},
    };
    return c;
}

struct Options {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "regionlab-out";
    bool print_config = false;
    bool list_presets = false;
};

// Later sources replace whole top-level keys of earlier ones.
void merge_top_level(json& into, const json& from, const std::string& what) {
    require(from.is_object(), what + ": expected a JSON object at the top level");
    for (const auto& [key, value] : from.items()) into[key] = value;
}

Invocation resolve(const std::string& command, const Options& opt) {
    Invocation inv;
    inv.command = command;
    inv.config = json::object();
    inv.base_dir = std::filesystem::current_path();
    if (!opt.preset.empty()) merge_top_level(inv.config, preset_config(command, opt.preset), "preset");
    if (!opt.config_path.empty()) {
        const std::filesystem::path p(opt.config_path);
        require(std::filesystem::exists(p) && !std::filesystem::is_directory(p),
                "cannot read config file '" + opt.config_path + "'");
        merge_top_level(inv.config, json::parse(read_file(p)), opt.config_path);
        inv.base_dir = std::filesystem::absolute(p).parent_path();
    }
    if (opt.seed) inv.config["seed"] = *opt.seed;
    inv.out_dir = opt.out_dir;
    return inv;
}

int execute(const std::string& command, const Options& opt, std::ostream& out) {
    if (opt.list_presets) {
        for (const auto& name : preset_names(command)) out << name << "\n";
        return kOk;
    }
    require(!opt.preset.empty() || !opt.config_path.empty(), command + ": give --config and/or --preset");
    const Invocation inv = resolve(command, opt);
    if (opt.print_config) {
        out << inv.config.dump(2) << "\n";
        return kOk;
    }
    OutputBundle bundle;
    const std::uint64_t seed = commands().at(command).first(inv, bundle);
    bundle.write(inv.out_dir, command, seed, inv.config);
    out << "wrote " << bundle.size() << " file(s) and manifest.json to " << inv.out_dir.string() << "\n";
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"regionlab: soft regions, gradient fields and training experiments for small sigmoid networks"};
    app.require_subcommand(1);
    Options opt;
    for (const auto& [name, entry] : commands()) {
        auto* sub = app.add_subcommand(name, entry.second);
        sub->add_option("--config", opt.config_path, "JSON config file");
        sub->add_option("--preset", opt.preset, "Start from a named preset (see --list-presets)");
        sub->add_option("--seed", opt.seed, "Seed; overrides the config's seed");
        sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
        sub->add_flag("--print-config", opt.print_config, "Print the resolved config and exit");
        sub->add_flag("--list-presets", opt.list_presets, "List preset names and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kConfigError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return execute(command, opt, out);
    } catch (const ContractError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

}  // namespace regionlab::cli
