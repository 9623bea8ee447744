// train: either a named experiment with overrides, or one explicit run
// (network, samples, trainer settings, optional area domain).

#include "cli.hpp"
#include "regionlab/error.hpp"
#include "regionlab/io.hpp"
#include "regionlab/json_util.hpp"
#include "regionlab/network_io.hpp"
#include "regionlab/trainer.hpp"

namespace regionlab::cli {

namespace {

constexpr std::uint64_t kDefaultTrainSeed = 1;

std::vector<TrainingSample> parse_samples(const json& j, std::uint64_t seed) {
    const std::string where = "samples";
    if (j.is_array()) {
        std::vector<TrainingSample> out;
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string w = where + "[" + std::to_string(i) + "]";
            reject_unknown_keys(j[i], {"x", "label"}, w);
            out.push_back({get_field<Vector>(j[i], "x", w), get_field<std::size_t>(j[i], "label", w)});
        }
        return out;
    }
    const auto kind = get_field<std::string>(j, "kind", where);
    if (kind == "simple") {
        reject_unknown_keys(j, {"kind", "n", "extent"}, where);
        return make_simple_domain(get_field<std::size_t>(j, "n", where), get_or(j, "extent", 6.0, where), seed);
    }
    if (kind == "uniform") {
        reject_unknown_keys(j, {"kind", "per_class", "extent"}, where);
        return make_uniform_domain(get_field<std::size_t>(j, "per_class", where), get_or(j, "extent", 6.0, where),
                                   seed);
    }
    throw ContractError("samples: unknown kind '" + kind + "' (expected simple, uniform or an array)");
}

ExperimentRun explicit_run(const json& cfg, std::uint64_t seed, const std::filesystem::path& base_dir) {
    ExperimentRun run;
    run.label = get_or<std::string>(cfg, "label", "run", "train config");
    require(cfg.contains("network") && cfg.contains("samples"), "train config: needs 'network' and 'samples'");
    run.initial = parse_network(cfg.at("network"), base_dir);
    run.samples = parse_samples(cfg.at("samples"), seed);
    TrainerConfig base;
    base.seed = seed;
    run.config = trainer_config_from_json(cfg.value("trainer", json::object()), base);
    run.config.seed = seed;
    if (cfg.contains("area")) {
        const json& a = cfg.at("area");
        reject_unknown_keys(a, {"grid", "labeling"}, "area");
        require(a.contains("labeling"), "area: missing key 'labeling'");
        run.area = AreaDomain{a.contains("grid") ? parse_grid(a.at("grid")) : GridSpec{}, parse_labeling(a.at("labeling"))};
    }
    run.params = {{"source", "explicit"}};
    run.config.validate(run.initial);
    return run;
}

std::string report_csv(const ExperimentReport& r) {
    CsvWriter csv(r.columns);
    for (const auto& row : r.rows) csv.row(row);
    return csv.str();
}

}  // namespace

std::uint64_t cmd_train(const Invocation& inv, OutputBundle& out) {
    const json& cfg = inv.config;
    const std::uint64_t seed = get_or(cfg, "seed", kDefaultTrainSeed, "train config");
    std::vector<ExperimentReport> reports;
    if (cfg.contains("experiment")) {
        reject_unknown_keys(cfg, {"experiment", "overrides", "seed"}, "train config");
        json overrides = cfg.value("overrides", json::object());
        require(overrides.is_object(), "overrides: expected an object");
        require(!overrides.contains("seed"), "overrides: set the seed at the top level");
        overrides["seed"] = seed;
        reports = run_experiment(get_field<std::string>(cfg, "experiment", "train config"), overrides);
    } else {
        reject_unknown_keys(cfg, {"label", "network", "samples", "trainer", "area", "seed"}, "train config");
        reports.push_back(train(explicit_run(cfg, seed, inv.base_dir)));
    }

    json summary = json::array();
    for (const auto& r : reports) {
        const std::string stem = safe_name(r.label);
        require(!out.contains(stem + ".csv"), "duplicate run label '" + r.label + "'");
        out.add(stem + ".csv", report_csv(r));
        out.add_json(stem + ".network.json", network_to_json(r.final_network));
        json final_row = json::object();
        for (std::size_t c = 0; c < r.columns.size(); ++c) final_row[r.columns[c]] = r.last()[c];
        summary.push_back({{"label", r.label},
                           {"file", stem + ".csv"},
                           {"config", r.config},
                           {"zero_area_iteration", r.zero_area_iteration ? json(*r.zero_area_iteration) : json()},
                           {"final", final_row}});
    }
    out.add_json("summary.json", summary);
    return seed;
}

}  // namespace regionlab::cli
