// field and regions: sample per-point quantities of one or more networks on a
// grid. regions additionally emits the realized networks, primitive-layer
// networks, transition analytics and region counts.

#include <cmath>
#include <limits>

#include "cli.hpp"
#include "regionlab/error.hpp"
#include "regionlab/io.hpp"
#include "regionlab/json_util.hpp"
#include "regionlab/network_io.hpp"
#include "regionlab/regions.hpp"

namespace regionlab::cli {

namespace {

struct Common {
    GridSpec grid;
    std::optional<Labeling> labeling;
    bool pgm = true;
};

Common parse_common(const json& cfg) {
    Common c;
    if (cfg.contains("grid")) c.grid = parse_grid(cfg.at("grid"));
    if (cfg.contains("labeling")) c.labeling = parse_labeling(cfg.at("labeling"));
    c.pgm = get_or(cfg, "pgm", true, "config");
    return c;
}

std::uint64_t seed_of(const json& cfg) { return get_or<std::uint64_t>(cfg, "seed", 0, "config"); }

/// Evaluates every quantity of every panel. Returns the parsed networks so
/// that regions can write them out.
std::vector<std::pair<std::string, Network>> run_panels(const json& panels, const Common& common,
                                                        const std::filesystem::path& base_dir, OutputBundle& out) {
    require(panels.is_array(), "panels: expected an array");
    std::vector<std::pair<std::string, Network>> nets;
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const json& pj = panels[p];
        const std::string where = "panels[" + std::to_string(p) + "]";
        reject_unknown_keys(pj, {"name", "network", "quantities", "grid", "labeling"}, where);
        const std::string name = safe_name(get_field<std::string>(pj, "name", where));
        require(pj.contains("network"), where + ": missing key 'network'");
        const Network net = parse_network(pj.at("network"), base_dir);
        const GridSpec grid = pj.contains("grid") ? parse_grid(pj.at("grid")) : common.grid;
        const std::optional<Labeling> labels =
            pj.contains("labeling") ? std::optional(parse_labeling(pj.at("labeling"))) : common.labeling;

        for (const auto& text : get_or<std::vector<std::string>>(pj, "quantities", {}, where)) {
            if (text == "truth") {
                require(labels.has_value(), where + ": 'truth' needs a labeling");
                const Labeling l = *labels;
                add_field(out, name + "_truth",
                          sample_function(grid, [l](double x, double y) { return static_cast<double>(l(x, y)); }),
                          common.pgm);
                continue;
            }
            const FieldQuantity q = parse_field_quantity(text);
            q.validate(net);
            require(!q.needs_class() || labels.has_value(), where + ": '" + text + "' needs a labeling");
            add_field(out, name + "_" + q.name(), eval_field(net, grid, q, labels ? &*labels : nullptr), common.pgm);
        }
        nets.emplace_back(name, net);
    }
    return nets;
}

struct Range {
    double from, to;
    std::size_t count;
    double at(std::size_t i) const {
        return count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

Range parse_range(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"from", "to", "count"}, where);
    Range r{get_field<double>(j, "from", where), get_field<double>(j, "to", where),
            get_field<std::size_t>(j, "count", where)};
    require(r.count >= 1 && std::isfinite(r.from) && std::isfinite(r.to), where + ": bad range");
    return r;
}

// Output, loss and the gradient with respect to the first layer's weight and
// bias of a one-input network, along a line of x values.
void curves_1d(const json& j, const std::filesystem::path& base_dir, OutputBundle& out) {
    const std::string where = "curves_1d";
    reject_unknown_keys(j, {"network", "x", "class"}, where);
    require(j.contains("network") && j.contains("x"), where + ": needs 'network' and 'x'");
    const Network net = parse_network(j.at("network"), base_dir);
    require(net.input_dim() == 1, where + ": network must take one input");
    const auto cls = get_or<std::size_t>(j, "class", 0, where);
    require(cls < std::max<std::size_t>(net.class_count(), 1), where + ": class out of range");
    const Range xs = parse_range(j.at("x"), where + ".x");

    CsvWriter csv({"x", "output", "loss", "grad_a_1_0_0", "grad_b_1_0"});
    for (std::size_t i = 0; i < xs.count; ++i) {
        const double x = xs.at(i);
        const Vector in{x};
        const ForwardTrace tr = forward(net, in);
        const auto [bt, g] = backward(net, tr, cls);
        csv.row(std::vector<double>{x, tr.out.back()[0], loss_from_trace(net, tr, cls), g.weights[0](0, 0),
                                    g.bias[0][0]});
    }
    out.add("curves_1d.csv", csv.str());
}

Primitive parse_primitive(const json& j, const std::string& where) {
    const auto kind = get_field<std::string>(j, "kind", where);
    if (kind == "hyperplane") {
        reject_unknown_keys(j, {"kind", "a", "beta"}, where);
        return Primitive::hyperplane(get_field<Vector>(j, "a", where), get_or(j, "beta", 0.0, where));
    }
    if (kind == "ellipsoid") {
        reject_unknown_keys(j, {"kind", "shape", "center", "alpha", "beta"}, where);
        const auto rows = get_field<std::vector<Vector>>(j, "shape", where);
        require(!rows.empty() && !rows.front().empty(), where + ": empty shape");
        Matrix shape(rows.size(), rows.front().size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            require(rows[r].size() == shape.cols(), where + ": ragged shape");
            std::copy(rows[r].begin(), rows[r].end(), shape.row(r).begin());
        }
        return Primitive::ellipsoid(std::move(shape), get_field<Vector>(j, "center", where),
                                    get_field<double>(j, "alpha", where), get_or(j, "beta", 0.0, where));
    }
    throw ContractError(where + ": unknown primitive kind '" + kind + "' (expected hyperplane or ellipsoid)");
}

// Every unit of every stage is written: "<name>_p_<i>" for the primitive
// layer and "<name>_x_<k>_<u>" for tail layer k (1-based, counting the
// primitive layer as layer 1 so the numbering matches an ordinary network).
void run_primitive_panels(const json& panels, const Common& common, const std::filesystem::path& base_dir,
                          OutputBundle& out) {
    require(panels.is_array(), "primitive_panels: expected an array");
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const json& pj = panels[p];
        const std::string where = "primitive_panels[" + std::to_string(p) + "]";
        reject_unknown_keys(pj, {"name", "primitives", "first_activation", "tail", "grid"}, where);
        const std::string name = safe_name(get_field<std::string>(pj, "name", where));
        require(pj.contains("primitives") && pj.at("primitives").is_array() && !pj.at("primitives").empty(),
                where + ": primitives must be a non-empty array");
        PrimitiveNetwork pn;
        for (std::size_t i = 0; i < pj.at("primitives").size(); ++i)
            pn.primitives.push_back(
                parse_primitive(pj.at("primitives")[i], where + ".primitives[" + std::to_string(i) + "]"));
        for (const auto& prim : pn.primitives) require(prim.dim() == 2, where + ": primitives must be 2-D");
        if (pj.contains("first_activation")) pn.first_activation = activation_from_json(pj.at("first_activation"));
        require(pj.contains("tail"), where + ": missing key 'tail'");
        pn.tail = parse_network(pj.at("tail"), base_dir);
        require(pn.tail.input_dim() == pn.primitives.size(), where + ": tail input must match the primitive count");
        const GridSpec grid = pj.contains("grid") ? parse_grid(pj.at("grid")) : common.grid;

        std::vector<std::size_t> widths{pn.primitives.size()};
        for (std::size_t k = 0; k < pn.tail.depth(); ++k) widths.push_back(pn.tail.layer(k).units());
        std::vector<std::vector<FieldMap>> maps(widths.size());
        for (std::size_t s = 0; s < widths.size(); ++s)
            for (std::size_t u = 0; u < widths[s]; ++u) maps[s].push_back({grid, FieldQuantity::layer_output(s + 1, u), Vector(grid.size())});
        for (std::size_t j = 0; j < grid.ny; ++j)
            for (std::size_t i = 0; i < grid.nx; ++i) {
                const Vector x{grid.x(i), grid.y(j)};
                const auto stages = pn.evaluate(x);
                for (std::size_t s = 0; s < stages.size(); ++s)
                    for (std::size_t u = 0; u < stages[s].size(); ++u) maps[s][u].values[j * grid.nx + i] = stages[s][u];
            }
        for (std::size_t s = 0; s < maps.size(); ++s)
            for (std::size_t u = 0; u < maps[s].size(); ++u)
                add_field(out, s == 0 ? name + "_p_" + std::to_string(u) : name + "_" + maps[s][u].quantity.name(),
                          maps[s][u], common.pgm);
    }
}

// Boundary shift and band widths as functions of beta. gamma is chosen per
// beta so that the output range reaches target; widths are reported at
// gamma times each multiple. Infinite widths are written as "inf".
void transition_curves(const json& j, OutputBundle& out) {
    const std::string where = "transition_curves";
    reject_unknown_keys(j, {"betas", "target", "level", "gamma_multiples"}, where);
    require(j.contains("betas"), where + ": missing key 'betas'");
    const Range betas = parse_range(j.at("betas"), where + ".betas");
    const double target = get_or(j, "target", 0.995, where);
    const double level = get_or(j, "level", 0.95, where);
    const auto multiples = get_or<std::vector<double>>(j, "gamma_multiples", {1.0}, where);
    require(!multiples.empty(), where + ": gamma_multiples must not be empty");
    for (double m : multiples) require(m > 0 && std::isfinite(m), where + ": gamma multiples must be positive");

    std::vector<std::string> header{"beta", "shift", "gamma"};
    for (double m : multiples) header.push_back("width_x" + format_double(m));
    CsvWriter csv(header);
    for (std::size_t i = 0; i < betas.count; ++i) {
        const double beta = betas.at(i);
        const double gamma = amplification_for_range(beta, target);
        std::vector<double> row{beta, transition_shift(beta), gamma};
        for (double m : multiples) row.push_back(transition_width(beta, m * gamma, level));
        csv.row(row);
    }
    out.add("transition.csv", csv.str());
}

void count_regions_table(const json& j, OutputBundle& out) {
    require(j.is_array(), "count_regions: expected an array of {n, d}");
    CsvWriter csv({"n", "d", "regions"});
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "count_regions[" + std::to_string(i) + "]";
        reject_unknown_keys(j[i], {"n", "d"}, where);
        const auto n = get_field<std::size_t>(j[i], "n", where);
        const auto d = get_field<std::size_t>(j[i], "d", where);
        csv.row(std::vector<std::string>{std::to_string(n), std::to_string(d), count_regions(n, d).str()});
    }
    out.add("counts.csv", csv.str());
}

}  // namespace

std::uint64_t cmd_field(const Invocation& inv, OutputBundle& out) {
    const json& cfg = inv.config;
    reject_unknown_keys(cfg, {"grid", "labeling", "panels", "curves_1d", "pgm", "seed"}, "field config");
    const Common common = parse_common(cfg);
    run_panels(cfg.value("panels", json::array()), common, inv.base_dir, out);
    if (cfg.contains("curves_1d")) curves_1d(cfg.at("curves_1d"), inv.base_dir, out);
    return seed_of(cfg);
}

std::uint64_t cmd_regions(const Invocation& inv, OutputBundle& out) {
    const json& cfg = inv.config;
    reject_unknown_keys(cfg,
                        {"grid", "labeling", "panels", "primitive_panels", "transition_curves", "count_regions",
                         "pgm", "seed"},
                        "regions config");
    const Common common = parse_common(cfg);
    for (const auto& [name, net] : run_panels(cfg.value("panels", json::array()), common, inv.base_dir, out))
        out.add_json(name + ".network.json", network_to_json(net));
    if (cfg.contains("primitive_panels")) run_primitive_panels(cfg.at("primitive_panels"), common, inv.base_dir, out);
    if (cfg.contains("transition_curves")) transition_curves(cfg.at("transition_curves"), out);
    if (cfg.contains("count_regions")) count_regions_table(cfg.at("count_regions"), out);
    return seed_of(cfg);
}

}  // namespace regionlab::cli
