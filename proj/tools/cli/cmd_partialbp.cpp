// partialbp: how far the cut-off backward pass reaches over a grid, for a
// list of weight scales and norm variants.

#include "cli.hpp"
#include "regionlab/error.hpp"
#include "regionlab/io.hpp"
#include "regionlab/json_util.hpp"
#include "regionlab/partial_backprop.hpp"

namespace regionlab::cli {

namespace {

std::map<std::size_t, double> parse_thresholds(const json& j, const std::string& where) {
    require(j.is_object(), where + ": expected an object of layer -> threshold");
    std::map<std::size_t, double> out;
    for (const auto& [key, value] : j.items()) {
        std::size_t layer = 0, used = 0;
        try {
            layer = std::stoul(key, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == key.size() && layer >= 1, where + ": layer keys must be positive integers, got '" + key + "'");
        require(value.is_number(), where + ": threshold for layer " + key + " must be a number");
        out[layer] = value.get<double>();
    }
    return out;
}

}  // namespace

std::uint64_t cmd_partialbp(const Invocation& inv, OutputBundle& out) {
    const json& cfg = inv.config;
    const std::string where = "partialbp config";
    reject_unknown_keys(cfg,
                        {"network", "scales", "grid", "labeling", "weight_thresholds", "bias_thresholds", "norms",
                         "linf_variant", "linf_rows", "pgm", "seed"},
                        where);
    require(cfg.contains("network"), where + ": missing key 'network'");
    const Network base = parse_network(cfg.at("network"), inv.base_dir);
    require(base.input_dim() == 2, where + ": network must take 2-D input");
    const auto scales = get_or<std::vector<double>>(cfg, "scales", {1.0}, where);
    require(!scales.empty(), where + ": scales must not be empty");
    const GridSpec grid = cfg.contains("grid") ? parse_grid(cfg.at("grid")) : GridSpec{};
    require(cfg.contains("labeling"), where + ": missing key 'labeling'");
    const Labeling truth = parse_labeling(cfg.at("labeling"));
    const bool pgm = get_or(cfg, "pgm", true, where);

    CutoffPolicy policy;
    require(cfg.contains("weight_thresholds"), where + ": missing key 'weight_thresholds'");
    policy.weight_thresholds = parse_thresholds(cfg.at("weight_thresholds"), "weight_thresholds");
    if (cfg.contains("bias_thresholds"))
        policy.bias_thresholds = parse_thresholds(cfg.at("bias_thresholds"), "bias_thresholds");
    policy.linf_variant = linf_variant_from_string(get_or<std::string>(cfg, "linf_variant", "tight", where));
    policy.linf_rows = get_or(cfg, "linf_rows", false, where);
    for (const auto& [layer, t] : policy.weight_thresholds)
        require(layer <= base.depth(), "weight_thresholds: layer " + std::to_string(layer) + " does not exist");
    for (const auto& [layer, t] : policy.bias_thresholds)
        require(layer <= base.depth(), "bias_thresholds: layer " + std::to_string(layer) + " does not exist");
    policy.validate();

    std::vector<CutoffPolicy::Norm> norms;
    for (const auto& n : get_or<std::vector<std::string>>(cfg, "norms", {"l2", "linf"}, where))
        norms.push_back(norm_from_string(n));
    require(!norms.empty(), where + ": norms must not be empty");

    std::vector<std::string> header{"scale", "norm"};
    for (std::size_t k = 1; k <= base.depth(); ++k) header.push_back("reach_" + std::to_string(k));
    CsvWriter csv(header);
    for (double s : scales) {
        const Network net = scaled(base, s);
        for (auto norm : norms) {
            policy.norm = norm;
            const ReachStatistics st = reach_statistics(net, grid, truth, policy);
            std::vector<std::string> row{format_double(s), to_string(norm)};
            for (double f : st.fractions) row.push_back(format_double(f));
            csv.row(row);
            add_field(out, "reach_" + safe_name(to_string(norm)) + "_scale_" + safe_name(format_double(s)),
                      st.reached, pgm);
        }
    }
    out.add("fractions.csv", csv.str());
    return get_or<std::uint64_t>(cfg, "seed", 0, where);
}

}  // namespace regionlab::cli
