#include "regionlab/network_io.hpp"

#include <fstream>
#include <set>

#include "regionlab/error.hpp"
#include "regionlab/json_util.hpp"

namespace regionlab {

using nlohmann::json;

json activation_to_json(const Activation& act) {
    json j = {{"kind", to_string(act.kind)}};
    if (act.kind == Activation::Kind::Sigmoid || act.kind == Activation::Kind::Logistic)
        j["gamma"] = act.gamma;
    return j;
}

Activation activation_from_json(const json& j) {
    require(j.is_object(), "activation: expected an object");
    reject_unknown_keys(j, {"kind", "gamma"}, "activation");
    const auto kind = activation_kind_from_string(get_field<std::string>(j, "kind", "activation"));
    switch (kind) {
        case Activation::Kind::Sigmoid:
            return Activation::sigmoid(get_field<double>(j, "gamma", "activation"));
        case Activation::Kind::Logistic:
            return Activation::logistic(get_field<double>(j, "gamma", "activation"));
        default:
            require(!j.contains("gamma"), "activation: gamma only applies to sigmoid/logistic");
            return {kind, 1.0};
    }
}

json network_to_json(const Network& net) {
    json layers = json::array();
    for (const auto& l : net.layers()) {
        layers.push_back({{"rows", l.units()},
                          {"cols", l.inputs()},
                          {"weights", Vector(l.weights.data().begin(), l.weights.data().end())},
                          {"bias", l.bias},
                          {"activation", activation_to_json(l.activation)}});
    }
    return {{"format", "regionlab-network"},
            {"version", kNetworkFormatVersion},
            {"input_dim", net.input_dim()},
            {"layers", layers}};
}

Network network_from_json(const json& j) {
    require(j.is_object(), "network: expected an object");
    reject_unknown_keys(j, {"format", "version", "input_dim", "layers"}, "network");
    require(get_field<std::string>(j, "format", "network") == "regionlab-network",
            "network: format must be 'regionlab-network'");
    const int version = get_field<int>(j, "version", "network");
    require(version == kNetworkFormatVersion,
            "network: unsupported version " + std::to_string(version));
    const auto input_dim = get_field<std::size_t>(j, "input_dim", "network");
    require(j.at("layers").is_array(), "network: 'layers' must be an array");
    std::vector<Layer> layers;
    std::size_t k = 0;
    for (const auto& lj : j.at("layers")) {
        const std::string where = "network layer " + std::to_string(++k);
        require(lj.is_object(), where + ": expected an object");
        reject_unknown_keys(lj, {"rows", "cols", "weights", "bias", "activation"}, where);
        const auto rows = get_field<std::size_t>(lj, "rows", where);
        const auto cols = get_field<std::size_t>(lj, "cols", where);
        auto w = get_field<Vector>(lj, "weights", where);
        auto b = get_field<Vector>(lj, "bias", where);
        require(w.size() == rows * cols, where + ": weights length != rows*cols");
        require(b.size() == rows, where + ": bias length != rows");
        layers.push_back({Matrix(rows, cols, std::move(w)), std::move(b),
                          activation_from_json(lj.at("activation"))});
    }
    return Network(input_dim, std::move(layers));
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open network file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ContractError("network file " + path.string() + ": " + e.what());
    }
    return network_from_json(j);
}

}  // namespace regionlab
