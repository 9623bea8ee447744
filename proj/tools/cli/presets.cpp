// Named starting configs. figN is the N-th figure of the reference material
// in source order; the others are plain descriptive names.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "cli.hpp"
#include "regionlab/error.hpp"
#include "regionlab/regions.hpp"

namespace regionlab::cli {

namespace {

json act(const std::string& kind, double gamma = 1.0) {
    if (kind == "sigmoid" || kind == "logistic") return {{"kind", kind}, {"gamma", gamma}};
    return {{"kind", kind}};
}

json dense(const json& weights, const json& bias, const json& activation) {
    return {{"weights", weights}, {"bias", bias}, {"activation", activation}};
}

json pipeline(std::size_t input_dim, json layers) {
    return {{"pipeline", {{"input_dim", input_dim}, {"layers", std::move(layers)}}}};
}

json panel(const std::string& name, json network, std::vector<std::string> quantities) {
    return {{"name", name}, {"network", std::move(network)}, {"quantities", std::move(quantities)}};
}

json fig2() {
    const json base = pipeline(2, {dense({{1.5, 0.5}}, {0.0}, act("sigmoid"))});
    const json sharp = pipeline(2, {dense({{6.0, 2.0}}, {12.0}, act("sigmoid"))});
    return {{"grid", {{"half_extent", 4.0}, {"n", 201}}},
            {"panels",
             {panel("a", base, {"pre_activation(1,0)"}), panel("b", base, {"layer_output(1,0)"}),
              panel("c", sharp, {"layer_output(1,0)"})}}};
}

json fig7() {
    auto net = [](double angle_deg, double factor, bool second) {
        const double f = 0.1 * factor, t = angle_deg * std::numbers::pi / 180.0 + std::numbers::pi / 4;
        json layers = {dense({{f, -f}, {f, f}}, {0.0, 0.0}, act("sigmoid"))};
        if (second) layers.push_back(dense({{std::cos(t), std::sin(t)}}, {0.0}, act("sigmoid")));
        return pipeline(2, layers);
    };
    return {{"grid", {{"half_extent", 3.0}, {"n", 201}}},
            {"panels",
             {panel("ab", net(0, 1, false), {"layer_output(1,0)", "layer_output(1,1)"}),
              panel("c", net(90, 1, true), {"layer_output(2,0)"}), panel("d", net(70, 1, true), {"layer_output(2,0)"}),
              panel("e", net(70, 10, true), {"layer_output(2,0)"}),
              panel("f", net(70, 20, true), {"layer_output(2,0)"})}}};
}

json max_gradient_panels() {
    json panels = json::array();
    for (int g : {1, 2, 3})
        panels.push_back(panel("gamma" + std::to_string(g), {{"preset", "nn_example_2d"}, {"scale", g}},
                               {"max_grad_a(3)", "max_grad_a(2)", "max_grad_a(1)"}));
    return {{"grid", {{"half_extent", 3.0}, {"n", 201}}}, {"labeling", "xor"}, {"panels", panels}};
}

json fig10() {
    return {{"grid", {{"half_extent", 3.0}, {"n", 201}}},
            {"labeling", "xor"},
            {"panels",
             {panel("net", {{"preset", "nn_example_2d"}},
                    {"truth", "layer_output(1,0)", "layer_output(1,1)", "layer_output(2,0)", "layer_output(2,1)",
                     "layer_output(2,2)", "layer_output(2,3)", "posterior(0)", "posterior(1)"})}}};
}

json fig11() {
    return {{"grid", {{"half_extent", 3.0}, {"n", 201}}},
            {"labeling", "xor"},
            {"panels",
             {panel("net", {{"preset", "nn_example_2d"}},
                    {"adjoint_y(3,0)", "layer_output(2,1)", "grad_a(3,0,1)", "adjoint_z(3,1)", "mask(2,1)",
                     "adjoint_y(2,1)", "layer_output(1,0)", "grad_a(2,1,0)", "adjoint_z(2,0)", "mask(1,0)",
                     "adjoint_y(1,0)", "grad_a(1,0,1)"})}}};
}

json gradient_1d() {
    return {{"panels", json::array()},
            {"curves_1d",
             {{"network", {{"preset", "motivational_1d"}, {"alpha", 1.0}, {"beta", 0.0}, {"gain", 5.0}}},
              {"x", {{"from", -12.0}, {"to", 12.0}, {"count", 481}}},
              {"class", 0}}}};
}

json fig3() {
    const json first = dense({{9, 1}, {-2, 6}}, {-2, -1}, act("sigmoid", 3));
    const json ops = {{"ops",
                       {{{"op", "complement"}, {"inputs", {0}}},
                        {{"op", "intersection"}, {"inputs", {0, 1}}},
                        {{"op", "union"}, {"inputs", {0, 1}}},
                        {{"op", "intersection"}, {"inputs", {0, 1}}, {"negate", {true, false}}},
                        {{"op", "intersection"}, {"inputs", {0, 1}}, {"negate", {false, true}}}}},
                      {"activation", act("sigmoid", 3)}};
    const json xor_layer = {{"ops", {{{"op", "union"}, {"inputs", {3, 4}}}}}, {"activation", act("sigmoid", 3)}};
    return {{"grid", {{"half_extent", 2.0}, {"n", 201}}},
            {"panels",
             {panel("ops", pipeline(2, {first, ops, xor_layer}),
                    {"layer_output(1,0)", "layer_output(1,1)", "layer_output(2,0)", "layer_output(2,1)",
                     "layer_output(2,2)", "layer_output(3,0)"})}}};
}

json fig4() {
    const double s = std::sqrt(0.5);
    // Outer square |x|, |y| <= 2 (positive inside) and a diamond
    // |x| + |y| <= sqrt(2) whose four halfspaces face outward, so no cell
    // lies in all eight and the weighted total peaks at 10.
    const json outer = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
    const json all = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {s, s}, {s, -s}, {-s, s}, {-s, -s}};
    const json all_bias = {-2, -2, -2, -2, 1, 1, 1, 1};
    const std::vector<std::size_t> idx8{0, 1, 2, 3, 4, 5, 6, 7};
    auto net = [&](double gain1, std::vector<double> weights, double beta, const json& second) {
        const bool outer_only = weights.size() == 4;
        std::vector<std::size_t> inputs(idx8.begin(), idx8.begin() + static_cast<std::ptrdiff_t>(weights.size()));
        const json first = outer_only ? dense(outer, {-2, -2, -2, -2}, act("logistic", gain1))
                                      : dense(all, all_bias, act("logistic", gain1));
        const json op = {{"op", "linear"}, {"inputs", inputs}, {"weights", weights}, {"bias", beta}};
        return pipeline(2, {first, {{"ops", {op}}, {"activation", second}}});
    };
    const std::vector<double> w{2, 2, 2, 2, 1, 1, 1, 1}, unit(8, 1.0);
    return {{"grid", {{"half_extent", 3.0}, {"n", 201}}},
            {"panels",
             {panel("a", net(1000, w, 0.0, act("identity")), {"layer_output(2,0)"}),
              panel("b", net(10, w, 9.5, act("sigmoid", 50)), {"layer_output(2,0)"}),
              panel("c", net(10, w, 8.5, act("sigmoid", 50)), {"layer_output(2,0)"}),
              panel("d", net(10, unit, 4.5, act("sigmoid", 50)), {"layer_output(2,0)"}),
              panel("e", net(10, w, 6.5, act("sigmoid", 1)), {"layer_output(2,0)"}),
              panel("f", net(1, {2, 2, 2, 2}, 6.5, act("sigmoid", 50)), {"layer_output(2,0)"})}}};
}

json sum_of_sigmoids(double beta, const json& out_act) {
    return pipeline(2, {dense({{1, 0}, {0, 1}}, {0, 0}, act("sigmoid")), dense({{1, 1}}, {beta}, out_act)});
}

json transition_panels() {
    json panels = json::array();
    for (const auto& [name, beta] : {std::pair{"a", 1.0}, std::pair{"b", 1.8}, std::pair{"c", 0.6}})
        panels.push_back(panel(name, sum_of_sigmoids(beta, act("sigmoid", amplification_for_range(beta, 0.995))),
                               {"layer_output(2,0)"}));
    return {{"grid", {{"half_extent", 8.0}, {"n", 201}}},
            {"panels", panels},
            {"transition_curves",
             {{"betas", {{"from", 0.05}, {"to", 1.95}, {"count", 39}}},
              {"target", 0.995},
              {"level", 0.95},
              {"gamma_multiples", {1, 2, 4}}}}};
}

json sum_of_sigmoids_panel() {
    return {{"grid", {{"half_extent", 6.0}, {"n", 201}}},
            {"panels",
             {panel("z", sum_of_sigmoids(0.0, act("identity")), {"layer_output(2,0)"}),
              panel("slice", sum_of_sigmoids(-1.0, act("step")), {"layer_output(2,0)"})}}};
}

json primitive_panels() {
    return {{"grid", {{"half_extent", 3.0}, {"n", 201}}},
            {"primitive_panels",
             {{{"name", "mix"},
               {"primitives",
                {{{"kind", "hyperplane"}, {"a", {1.0, 1.0}}, {"beta", 0.0}},
                 {{"kind", "ellipsoid"},
                  {"shape", {{1.0, 0.0}, {0.0, 1.0}}},
                  {"center", {0.8, 0.8}},
                  {"alpha", -1.0},
                  {"beta", 1.0}}}},
               {"first_activation", act("sigmoid", 3)},
               {"tail",
                pipeline(2, {{{"ops", {{{"op", "intersection"}, {"inputs", {0, 1}}, {"negate", {false, true}}}}},
                              {"activation", act("sigmoid", 3)}}})}}}}};
}

json count_regions_preset() { return {{"count_regions", {{{"n", 20}, {"d", 5}}}}}; }

json partial_backprop() {
    return {{"network", {{"preset", "nn_example_2d"}}},
            {"scales", {1, 2, 3}},
            {"grid", {{"half_extent", 3.0}, {"n", 201}}},
            {"labeling", "xor"},
            {"weight_thresholds", {{"1", 0.05}, {"2", 0.05}}},
            {"norms", {"l2", "linf"}},
            {"linf_variant", "tight"}};
}

json experiment(const std::string& name) { return {{"experiment", name}}; }

using Registry = std::map<std::string, std::map<std::string, std::function<json()>>>;

const Registry& registry() {
    static const Registry r = {
        {"field",
         {{"fig2", fig2}, {"fig7", fig7}, {"fig9", gradient_1d}, {"fig10", fig10}, {"fig11", fig11},
          {"fig12", max_gradient_panels}}},
        {"regions",
         {{"fig3", fig3}, {"fig4", fig4}, {"fig5", sum_of_sigmoids_panel}, {"fig6", transition_panels},
          {"fig8", primitive_panels}, {"count-regions", count_regions_preset}}},
        // fig12 is kept as a second name for the partial-backprop figure.
        {"partialbp", {{"fig17", partial_backprop}, {"fig12", partial_backprop}}},
        {"train",
         {{"fig13", [] { return experiment("density"); }},
          {"fig14", [] { return experiment("width"); }},
          {"fig15", [] { return experiment("norms-growth"); }},
          {"fig16", [] { return experiment("regularization-compare"); }},
          {"density", [] { return experiment("density"); }},
          {"width", [] { return experiment("width"); }},
          {"norms-growth", [] { return experiment("norms-growth"); }},
          {"regularization-compare", [] { return experiment("regularization-compare"); }},
          {"rotate-boundary", [] { return experiment("rotate-boundary"); }},
          {"motivational-1d", [] { return experiment("motivational-1d"); }}}},
        {"tverberg",
         {{"d3n5", [] { return json{{"d", 3}, {"n", 5}, {"lift", true}}; }},
          {"d5n4", [] { return json{{"d", 5}, {"n", 4}, {"lift", true}}; }}}},
    };
    return r;
}

}  // namespace

std::vector<std::string> preset_names(const std::string& command) {
    std::vector<std::string> out;
    const auto it = registry().find(command);
    if (it != registry().end())
        for (const auto& [name, fn] : it->second) out.push_back(name);
    return out;
}

json preset_config(const std::string& command, const std::string& name) {
    const auto it = registry().find(command);
    require(it != registry().end() && it->second.contains(name),
            "unknown preset '" + name + "' for '" + command + "'");
    return it->second.at(name)();
}

}  // namespace regionlab::cli
