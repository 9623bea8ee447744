#include <cctype>
#include <cmath>
#include <numbers>

#include "cli.hpp"
#include "regionlab/error.hpp"
#include "regionlab/io.hpp"
#include "regionlab/json_util.hpp"
#include "regionlab/network_io.hpp"
#include "regionlab/regions.hpp"

namespace regionlab::cli {

GridSpec parse_grid(const json& j) {
    const std::string where = "grid";
    GridSpec g;
    if (j.contains("half_extent") || j.contains("n")) {
        reject_unknown_keys(j, {"half_extent", "n"}, where);
        g = GridSpec::square(get_field<double>(j, "half_extent", where), get_field<std::size_t>(j, "n", where));
    } else {
        reject_unknown_keys(j, {"xmin", "xmax", "ymin", "ymax", "nx", "ny"}, where);
        g.xmin = get_or(j, "xmin", g.xmin, where);
        g.xmax = get_or(j, "xmax", g.xmax, where);
        g.ymin = get_or(j, "ymin", g.ymin, where);
        g.ymax = get_or(j, "ymax", g.ymax, where);
        g.nx = get_or(j, "nx", g.nx, where);
        g.ny = get_or(j, "ny", g.ny, where);
    }
    g.validate();
    return g;
}

json grid_to_json(const GridSpec& g) {
    return {{"xmin", g.xmin}, {"xmax", g.xmax}, {"ymin", g.ymin}, {"ymax", g.ymax}, {"nx", g.nx}, {"ny", g.ny}};
}

Labeling parse_labeling(const json& j) {
    const std::string where = "labeling";
    const json spec = j.is_string() ? json{{"kind", j}} : j;
    require(spec.is_object(), "labeling: expected a string or an object");
    const auto kind = get_field<std::string>(spec, "kind", where);
    if (kind == "xor") {
        reject_unknown_keys(spec, {"kind"}, where);
        return Labeling::xor_quadrants();
    }
    if (kind == "vertical") {
        reject_unknown_keys(spec, {"kind", "split", "left", "right"}, where);
        return Labeling::vertical(get_or(spec, "split", 0.0, where), get_or<std::size_t>(spec, "left", 0, where),
                                  get_or<std::size_t>(spec, "right", 1, where));
    }
    if (kind == "constant") {
        reject_unknown_keys(spec, {"kind", "class"}, where);
        return Labeling::constant(get_or<std::size_t>(spec, "class", 0, where));
    }
    if (kind == "halfspace") {
        // Class 1 where <(cos t, sin t), x> > offset.
        reject_unknown_keys(spec, {"kind", "normal_deg", "offset"}, where);
        const double t = get_field<double>(spec, "normal_deg", where) * std::numbers::pi / 180.0;
        const double c = std::cos(t), s = std::sin(t), off = get_or(spec, "offset", 0.0, where);
        Labeling l;
        l.classify = [c, s, off](double x, double y) -> std::size_t { return c * x + s * y > off ? 1 : 0; };
        return l;
    }
    throw ContractError("labeling: unknown kind '" + kind + "' (expected xor, vertical, constant or halfspace)");
}

namespace {

Matrix matrix_from_rows(const json& j, const std::string& where) {
    const auto rows = j.get<std::vector<Vector>>();
    require(!rows.empty() && !rows.front().empty(), where + ": empty matrix");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        require(rows[r].size() == m.cols(), where + ": ragged matrix");
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

Matrix get_matrix(const json& j, const std::string& key, const std::string& where) {
    require(j.contains(key), where + ": missing key '" + key + "'");
    try {
        return matrix_from_rows(j.at(key), where + "." + key);
    } catch (const json::exception& e) {
        throw ContractError(where + ": bad value for '" + key + "': " + e.what());
    }
}

// One unit of an operator layer, laid out over the previous layer's units.
void add_op_row(const json& op, std::size_t prev_units, Matrix& a, Vector& b, std::size_t row,
                const std::string& where) {
    reject_unknown_keys(op, {"op", "inputs", "negate", "value", "weights", "k", "bias", "gain"}, where);
    const auto kind = get_field<std::string>(op, "op", where);
    const auto inputs = get_or<std::vector<std::size_t>>(op, "inputs", {}, where);
    auto negate = get_or<std::vector<bool>>(op, "negate", std::vector<bool>(inputs.size(), false), where);
    require(negate.size() == inputs.size(), where + ": negate must match inputs");
    for (std::size_t i : inputs) require(i < prev_units, where + ": input index out of range");

    UnitParams p;
    if (kind == "linear") {
        const auto w = get_field<Vector>(op, "weights", where);
        require(w.size() == inputs.size(), where + ": weights must match inputs");
        p = {Matrix(1, w.size(), w), Vector{get_or(op, "bias", 0.0, where)}};
    } else if (kind == "kofn") {
        const auto w = get_or<Vector>(op, "weights", Vector(inputs.size(), 1.0), where);
        require(w.size() == inputs.size(), where + ": weights must match inputs");
        p = kofn_layer(w, get_field<std::size_t>(op, "k", where));
    } else {
        const auto k = region_op_kind_from_string(kind);
        RegionOp r;
        switch (k) {
            case RegionOp::Kind::Constant: r = RegionOp::constant(get_field<bool>(op, "value", where), inputs.size()); break;
            case RegionOp::Kind::Identity: r = RegionOp::identity(); break;
            case RegionOp::Kind::Complement: r = RegionOp::complement(); break;
            case RegionOp::Kind::Intersection: r = RegionOp::intersection(inputs.size()); break;
            case RegionOp::Kind::Union: r = RegionOp::union_of(inputs.size()); break;
            case RegionOp::Kind::KofN: throw ContractError(where + ": use op 'kofn'");
        }
        p = op_to_layer(r);
        require(p.weights.cols() == inputs.size(), where + ": '" + kind + "' takes " +
                                                       std::to_string(p.weights.cols()) + " input(s)");
    }
    const double gain = get_or(op, "gain", 1.0, where);
    for (std::size_t c = 0; c < inputs.size(); ++c)
        a(row, inputs[c]) += gain * (negate[c] ? -1.0 : 1.0) * p.weights(0, c);
    b[row] = gain * p.bias[0];
}

Network parse_pipeline(const json& j) {
    const std::string where = "pipeline";
    reject_unknown_keys(j, {"input_dim", "layers"}, where);
    const auto input_dim = get_field<std::size_t>(j, "input_dim", where);
    require(j.contains("layers") && j.at("layers").is_array() && !j.at("layers").empty(),
            "pipeline: layers must be a non-empty array");
    std::vector<Layer> layers;
    std::size_t prev = input_dim;
    for (std::size_t k = 0; k < j.at("layers").size(); ++k) {
        const json& lj = j.at("layers")[k];
        const std::string lw = where + ".layers[" + std::to_string(k) + "]";
        require(lj.contains("activation"), lw + ": missing key 'activation'");
        const Activation act = activation_from_json(lj.at("activation"));
        if (lj.contains("ops")) {
            reject_unknown_keys(lj, {"ops", "activation"}, lw);
            const json& ops = lj.at("ops");
            require(ops.is_array() && !ops.empty(), lw + ": ops must be a non-empty array");
            Matrix a(ops.size(), prev, 0.0);
            Vector b(ops.size(), 0.0);
            for (std::size_t r = 0; r < ops.size(); ++r)
                add_op_row(ops[r], prev, a, b, r, lw + ".ops[" + std::to_string(r) + "]");
            layers.push_back({std::move(a), std::move(b), act});
        } else {
            reject_unknown_keys(lj, {"weights", "bias", "activation"}, lw);
            Matrix a = get_matrix(lj, "weights", lw);
            require(a.cols() == prev, lw + ": weight columns must match the previous layer");
            Vector b = get_or(lj, "bias", Vector(a.rows(), 0.0), lw);
            require(b.size() == a.rows(), lw + ": bias length must match rows");
            layers.push_back({std::move(a), std::move(b), act});
        }
        prev = layers.back().units();
    }
    return Network(input_dim, std::move(layers));
}

Network preset_network(const json& j) {
    const std::string where = "network preset";
    const auto name = get_field<std::string>(j, "preset", where);
    if (name == "nn_example_2d") {
        reject_unknown_keys(j, {"preset", "scale"}, where);
        return presets::nn_example_2d(get_or(j, "scale", 1.0, where));
    }
    if (name == "single_hyperplane") {
        reject_unknown_keys(j, {"preset", "a", "b", "head", "scale"}, where);
        const auto a = get_field<Vector>(j, "a", where);
        require(a.size() == 2, "single_hyperplane: a must have two entries");
        return presets::single_hyperplane(a[0], a[1], get_or(j, "b", 0.0, where), get_or(j, "head", 3.0, where));
    }
    if (name == "motivational_1d") {
        reject_unknown_keys(j, {"preset", "alpha", "beta", "gain", "scale"}, where);
        return presets::motivational_1d(get_or(j, "alpha", 1.0, where), get_or(j, "beta", 0.0, where),
                                        get_or(j, "gain", 5.0, where));
    }
    throw ContractError("unknown network preset '" + name +
                        "' (expected nn_example_2d, single_hyperplane or motivational_1d)");
}

}  // namespace

Network parse_network(const json& j, const std::filesystem::path& base_dir) {
    require(j.is_object(), "network: expected an object");
    if (j.contains("format")) return network_from_json(j);
    if (j.contains("file")) {
        reject_unknown_keys(j, {"file", "scale"}, "network");
        std::filesystem::path p = get_field<std::string>(j, "file", "network");
        if (p.is_relative()) p = base_dir / p;
        const Network net = load_network(p);
        return j.contains("scale") ? scaled(net, get_field<double>(j, "scale", "network")) : net;
    }
    if (j.contains("pipeline")) {
        reject_unknown_keys(j, {"pipeline", "scale"}, "network");
        const Network net = parse_pipeline(j.at("pipeline"));
        return j.contains("scale") ? scaled(net, get_field<double>(j, "scale", "network")) : net;
    }
    if (j.contains("preset")) {
        const Network net = preset_network(j);
        // nn_example_2d applies its own scale.
        if (j.contains("scale") && j.at("preset") != "nn_example_2d")
            return scaled(net, get_field<double>(j, "scale", "network"));
        return net;
    }
    throw ContractError("network: expected one of 'file', 'preset', 'pipeline' or an inline network document");
}

std::string safe_name(const std::string& name) {
    std::string out;
    for (char c : name) {
        const auto u = static_cast<unsigned char>(c);
        out += (std::isalnum(u) || c == '-' || c == '_' || c == '.') ? static_cast<char>(std::tolower(u)) : '_';
    }
    require(!out.empty() && out != "." && out != "..", "empty or invalid name");
    return out;
}

void add_field(OutputBundle& out, const std::string& stem, const FieldMap& map, bool pgm) {
    out.add(stem + ".csv", field_to_csv(map));
    if (pgm) out.add(stem + ".pgm", field_to_pgm(map));
}

}  // namespace regionlab::cli
