#include "regionlab/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "regionlab/error.hpp"
#include "regionlab/json_util.hpp"
#include "regionlab/network_io.hpp"
#include "regionlab/rng.hpp"

namespace regionlab {

using nlohmann::json;

Regularization Regularization::l2(double lambda, std::set<std::size_t> layers) {
    return {Kind::L2, lambda, std::move(layers)};
}

Regularization Regularization::l1(double lambda, std::set<std::size_t> layers) {
    return {Kind::L1, lambda, std::move(layers)};
}

Regularization Regularization::norm_ball(double kappa, std::set<std::size_t> layers) {
    return {Kind::NormBall, kappa, std::move(layers)};
}

std::string to_string(Regularization::Kind kind) {
    switch (kind) {
        case Regularization::Kind::None: return "none";
        case Regularization::Kind::L2: return "l2";
        case Regularization::Kind::L1: return "l1";
        case Regularization::Kind::NormBall: return "norm_ball";
    }
    return "?";
}

Regularization::Kind regularization_kind_from_string(const std::string& name) {
    for (auto k : {Regularization::Kind::None, Regularization::Kind::L2, Regularization::Kind::L1,
                   Regularization::Kind::NormBall})
        if (to_string(k) == name) return k;
    throw ContractError("unknown regularization '" + name + "' (expected none, l2, l1 or norm_ball)");
}

void TrainerConfig::validate(const Network& net) const {
    require(std::isfinite(learning_rate) && learning_rate > 0.0, "trainer: learning_rate must be positive");
    require(record_every >= 1, "trainer: record_every must be at least 1");
    require(iterations % record_every == 0, "trainer: iterations must be a multiple of record_every");
    for (std::size_t k : frozen_layers)
        require(k >= 1 && k <= net.depth(), "trainer: frozen layer " + std::to_string(k) + " out of range");
    if (reg.kind != Regularization::Kind::None) {
        require(std::isfinite(reg.strength) && reg.strength > 0.0,
                "trainer: regularization strength must be positive");
        for (std::size_t k : reg.layers) {
            require(k >= 1 && k <= net.depth(),
                    "trainer: regularized layer " + std::to_string(k) + " out of range");
            require(!frozen_layers.contains(k),
                    "trainer: layer " + std::to_string(k) + " is both frozen and regularized");
        }
    }
    require(zero_area_tolerance >= 0.0, "trainer: zero_area_tolerance must be nonnegative");
}

json to_json(const TrainerConfig& cfg) {
    return {{"learning_rate", cfg.learning_rate},
            {"iterations", cfg.iterations},
            {"frozen_layers", cfg.frozen_layers},
            {"regularization",
             {{"kind", to_string(cfg.reg.kind)}, {"strength", cfg.reg.strength}, {"layers", cfg.reg.layers}}},
            {"record_every", cfg.record_every},
            {"seed", cfg.seed},
            {"stop_on_zero_area", cfg.stop_on_zero_area},
            {"zero_area_tolerance", cfg.zero_area_tolerance}};
}

TrainerConfig trainer_config_from_json(const json& j, TrainerConfig base) {
    const std::string where = "trainer config";
    reject_unknown_keys(j, {"learning_rate", "iterations", "frozen_layers", "regularization", "record_every",
                            "seed", "stop_on_zero_area", "zero_area_tolerance"},
                        where);
    base.learning_rate = get_or(j, "learning_rate", base.learning_rate, where);
    base.iterations = get_or(j, "iterations", base.iterations, where);
    base.frozen_layers = get_or(j, "frozen_layers", base.frozen_layers, where);
    base.record_every = get_or(j, "record_every", base.record_every, where);
    base.seed = get_or(j, "seed", base.seed, where);
    base.stop_on_zero_area = get_or(j, "stop_on_zero_area", base.stop_on_zero_area, where);
    base.zero_area_tolerance = get_or(j, "zero_area_tolerance", base.zero_area_tolerance, where);
    if (j.contains("regularization")) {
        const json& r = j.at("regularization");
        reject_unknown_keys(r, {"kind", "strength", "layers"}, "regularization");
        base.reg.kind = regularization_kind_from_string(get_field<std::string>(r, "kind", "regularization"));
        base.reg.strength = get_or(r, "strength", base.reg.strength, "regularization");
        base.reg.layers = get_or(r, "layers", base.reg.layers, "regularization");
    }
    return base;
}

double penalty(const Network& net, const Regularization& reg) {
    double r = 0.0;
    for (std::size_t k : reg.layers) {
        const auto w = net.layer(k - 1).weights.data();
        if (reg.kind == Regularization::Kind::L2)
            for (double v : w) r += 0.5 * reg.strength * v * v;
        else if (reg.kind == Regularization::Kind::L1)
            for (double v : w) r += reg.strength * std::abs(v);
    }
    return r;
}

void apply_update(Network& net, const GradientSet& grad, const TrainerConfig& cfg) {
    const double lr = cfg.learning_rate;
    for (std::size_t k = 0; k < net.depth(); ++k) {
        if (cfg.frozen_layers.contains(k + 1)) continue;
        Layer& layer = net.mutable_layer(k);
        const bool regularized = cfg.reg.kind != Regularization::Kind::None && cfg.reg.layers.contains(k + 1);
        auto w = layer.weights.data();
        const auto g = grad.weights[k].data();
        for (std::size_t i = 0; i < w.size(); ++i) {
            double step = g[i];
            if (regularized && cfg.reg.kind == Regularization::Kind::L2) step += cfg.reg.strength * w[i];
            if (regularized && cfg.reg.kind == Regularization::Kind::L1)
                step += cfg.reg.strength * static_cast<double>((w[i] > 0.0) - (w[i] < 0.0));
            w[i] -= lr * step;
        }
        for (std::size_t i = 0; i < layer.bias.size(); ++i) layer.bias[i] -= lr * grad.bias[k][i];
        if (regularized && cfg.reg.kind == Regularization::Kind::NormBall) {
            for (std::size_t i = 0; i < layer.units(); ++i) {
                auto row = layer.weights.row(i);
                const double norm = norm2(row);
                if (norm > cfg.reg.strength)
                    for (double& v : row) v *= cfg.reg.strength / norm;
            }
        }
    }
}

namespace {

std::vector<bool> skip_mask(const Network& net, const TrainerConfig& cfg) {
    std::vector<bool> skip(net.depth(), false);
    for (std::size_t k : cfg.frozen_layers) skip[k - 1] = true;
    return skip;
}

}  // namespace

Network gd_step(const Network& net, std::span<const TrainingSample> samples, const TrainerConfig& cfg) {
    cfg.validate(net);
    GradientEvaluator ev(net);
    const BatchGradient g = ev.evaluate(net, samples, skip_mask(net, cfg), false);
    Network out = net;
    apply_update(out, g.gradient, cfg);
    return out;
}

namespace {

std::size_t predicted_class(const Vector& out) {
    return static_cast<std::size_t>(std::max_element(out.begin(), out.end()) - out.begin());
}

// Class assigned by a network of single-unit hidden layers as a function of
// the first-layer pre-activation s.
std::size_t chain_class(const Network& net, double s) {
    Vector x{0.0}, v{0.0};
    apply_into(net.layer(0).activation, Vector{s}, x);
    for (std::size_t k = 1; k < net.depth(); ++k) {
        const Layer& l = net.layer(k);
        v.resize(l.units());
        affine_into(l.weights, x, l.bias, v);
        x.resize(l.units());
        apply_into(l.activation, v, x);
    }
    return predicted_class(x);
}

bool is_scalar_chain(const Network& net) {
    if (net.input_dim() != 2 || net.depth() < 2) return false;
    if (net.layer(0).units() != 1 || net.layer(0).activation.kind != Activation::Kind::Sigmoid) return false;
    for (std::size_t k = 1; k + 1 < net.depth(); ++k) {
        const auto kind = net.layer(k).activation.kind;
        if (net.layer(k).units() != 1 ||
            !(kind == Activation::Kind::Sigmoid || kind == Activation::Kind::Logistic ||
              kind == Activation::Kind::Identity))
            return false;
    }
    const Layer& head = net.layers().back();
    return head.units() == 2 && head.activation.kind == Activation::Kind::Softmax;
}

// Length of [lo, hi] intersected with (from, to).
double overlap(double lo, double hi, double from, double to) {
    return std::max(0.0, std::min(hi, to) - std::max(lo, from));
}

}  // namespace

std::optional<double> misclassified_area_exact(const Network& net, const AreaDomain& domain) {
    if (!domain.truth.vertical_split || !is_scalar_chain(net)) return std::nullopt;
    const GridSpec& g = domain.grid;
    const double split = std::clamp(*domain.truth.vertical_split, g.xmin, g.xmax);
    const std::size_t left = domain.truth.left_class, right = domain.truth.right_class;
    const double inf = std::numeric_limits<double>::infinity();

    // The class only depends on s = <a,x> - b and is monotone along the chain.
    constexpr double kFar = 1e6;
    const std::size_t hi_class = chain_class(net, kFar), lo_class = chain_class(net, -kFar);
    double s_star = 0.0;
    if (hi_class != lo_class) {
        double lo = -kFar, hi = kFar;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (chain_class(net, mid) == hi_class ? hi : lo) = mid;
        }
        s_star = hi;
    }
    const double a1 = net.layer(0).weights(0, 0), a2 = net.layer(0).weights(0, 1);
    const double c = net.layer(0).bias[0] + s_star;  // hi_class where a1 x + a2 y > c

    // Misclassified length of the row at height y.
    auto row_error = [&](double y) {
        double from = -inf, to = inf;  // x-range of hi_class
        if (a1 > 0.0) {
            from = (c - a2 * y) / a1;
        } else if (a1 < 0.0) {
            to = (c - a2 * y) / a1;
        } else if (!(a2 * y > c)) {
            from = to = 0.0;
        }
        double err = 0.0;
        const double left_hi = overlap(g.xmin, split, from, to), right_hi = overlap(split, g.xmax, from, to);
        if (hi_class != left) err += left_hi;
        if (lo_class != left) err += (split - g.xmin) - left_hi;
        if (hi_class != right) err += right_hi;
        if (lo_class != right) err += (g.xmax - split) - right_hi;
        return err;
    };
    if (hi_class == lo_class) {
        // Every point gets hi_class.
        double err = 0.0;
        if (hi_class != left) err += split - g.xmin;
        if (hi_class != right) err += g.xmax - split;
        return err * (g.ymax - g.ymin);
    }

    // Piecewise linear in y; the midpoint rule is exact on every piece.
    std::vector<double> knots{g.ymin, g.ymax};
    if (a2 != 0.0)
        for (double x : {g.xmin, split, g.xmax}) {
            const double y = (c - a1 * x) / a2;
            if (y > g.ymin && y < g.ymax) knots.push_back(y);
        }
    if (a1 == 0.0 && a2 != 0.0) {
        const double y = c / a2;
        if (y > g.ymin && y < g.ymax) knots.push_back(y);
    }
    std::sort(knots.begin(), knots.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double h = knots[i + 1] - knots[i];
        if (h > 0.0) area += h * row_error(0.5 * (knots[i] + knots[i + 1]));
    }
    return area;
}

double misclassified_area_grid(const Network& net, const AreaDomain& domain) {
    const GridSpec& g = domain.grid;
    g.validate();
    require(net.input_dim() == 2, "misclassified_area: network input must be 2-D");
    require(net.output_dim() >= 2, "misclassified_area: network needs at least two classes");
    const long long rows = static_cast<long long>(g.ny);
    long long wrong = 0;
#pragma omp parallel reduction(+ : wrong)
    {
        ForwardTrace t;
#pragma omp for schedule(static)
        for (long long j = 0; j < rows; ++j) {
            const double y = g.y(static_cast<std::size_t>(j));
            for (std::size_t i = 0; i < g.nx; ++i) {
                const double x = g.x(i);
                const double p[2] = {x, y};
                forward_into(net, p, t);
                if (predicted_class(t.out.back()) != domain.truth(x, y)) ++wrong;
            }
        }
    }
    return static_cast<double>(wrong) * g.dx() * g.dy();
}

double misclassified_area(const Network& net, const AreaDomain& domain) {
    if (auto exact = misclassified_area_exact(net, domain)) return *exact;
    return misclassified_area_grid(net, domain);
}

double nearest_sample_distance(const Network& net, std::span<const TrainingSample> samples, std::size_t row) {
    require(row < net.layer(0).units(), "nearest_sample_distance: row out of range");
    require(!samples.empty(), "nearest_sample_distance: no samples");
    const auto a = net.layer(0).weights.row(row);
    const double b = net.layer(0).bias[row];
    const double norm = norm2(a);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) best = std::min(best, std::abs(dot(a, s.x) - b) / norm);
    return best;
}

std::vector<TrainingSample> make_simple_domain(std::size_t n, double extent, std::uint64_t seed) {
    require(n >= 4, "make_simple_domain: need at least the four anchor samples");
    require(extent > kAnchorOffset, "make_simple_domain: extent must exceed the anchor offset");
    std::vector<TrainingSample> out{{{-kAnchorOffset, -0.5}, 0},
                                    {{-kAnchorOffset, 0.5}, 0},
                                    {{kAnchorOffset, -0.5}, 1},
                                    {{kAnchorOffset, 0.5}, 1}};
    Rng rng(seed);
    const std::size_t rest = n - 4, left = (rest + 1) / 2;
    for (std::size_t i = 0; i < rest; ++i) {
        const bool is_left = i < left;
        const double x = is_left ? rng.uniform(-extent, -kAnchorOffset) : rng.uniform(kAnchorOffset, extent);
        const double y = rng.uniform(-1.0, 1.0);
        out.push_back({{x, y}, is_left ? 0u : 1u});
    }
    return out;
}

std::vector<TrainingSample> make_uniform_domain(std::size_t per_class, double extent, std::uint64_t seed) {
    require(per_class >= 1, "make_uniform_domain: need at least one sample per class");
    require(extent > 0.0, "make_uniform_domain: extent must be positive");
    Rng rng(seed);
    std::vector<TrainingSample> out;
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < per_class; ++i) {
            const double x = c == 0 ? rng.uniform(-extent, 0.0) : rng.uniform(0.0, extent);
            out.push_back({{x, rng.uniform(-1.0, 1.0)}, c});
        }
    return out;
}

std::vector<double> ExperimentReport::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    require(it != columns.end(), "report has no column '" + name + "'");
    const auto idx = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
}

double ExperimentReport::last(const std::string& name) const { return column(name).back(); }

ExperimentReport train(const ExperimentRun& run) {
    const TrainerConfig& cfg = run.config;
    cfg.validate(run.initial);
    require(!run.samples.empty(), "train: no samples");
    ExperimentReport rep;
    rep.label = run.label;
    rep.config = {{"label", run.label}, {"trainer", to_json(cfg)}, {"params", run.params},
                  {"initial_network", network_to_json(run.initial)}};

    Network net = run.initial;
    const bool with_distance = net.input_dim() == 2 && net.layer(0).units() == 1;
    rep.columns = {"iteration", "loss", "penalty"};
    if (run.area) rep.columns.push_back("area");
    if (with_distance) rep.columns.push_back("nearest_distance");
    for (std::size_t k = 0; k < net.depth(); ++k)
        for (std::size_t i = 0; i < net.layer(k).units(); ++i)
            rep.columns.push_back("normA" + std::to_string(k + 1) + "_" + std::to_string(i));
    for (std::size_t k = 0; k < net.depth(); ++k)
        for (std::size_t i = 0; i < net.layer(k).units(); ++i)
            rep.columns.push_back("absb" + std::to_string(k + 1) + "_" + std::to_string(i));

    GradientEvaluator ev(net);
    const std::vector<bool> skip = skip_mask(net, cfg);
    for (std::size_t it = 0;; ++it) {
        const bool record = it % cfg.record_every == 0;
        const BatchGradient g = ev.evaluate(net, run.samples, skip, record);
        if (record) {
            std::vector<double> row{static_cast<double>(it), g.loss, penalty(net, cfg.reg)};
            bool zero = false;
            if (run.area) {
                const double area = misclassified_area(net, *run.area);
                row.push_back(area);
                zero = area <= cfg.zero_area_tolerance;
                if (zero && !rep.zero_area_iteration) rep.zero_area_iteration = it;
            }
            if (with_distance) row.push_back(nearest_sample_distance(net, run.samples));
            for (const auto& l : net.layers())
                for (std::size_t i = 0; i < l.units(); ++i) row.push_back(norm2(l.weights.row(i)));
            for (const auto& l : net.layers())
                for (double b : l.bias) row.push_back(std::abs(b));
            rep.rows.push_back(std::move(row));
            if (zero && cfg.stop_on_zero_area) break;
        }
        if (it == cfg.iterations) break;
        apply_update(net, g.gradient, cfg);
    }
    rep.final_network = std::move(net);
    return rep;
}

namespace {

const std::set<std::string> kTrainerKeys{"learning_rate", "iterations", "record_every",
                                         "seed", "stop_on_zero_area", "zero_area_tolerance"};

struct PresetInput {
    json params;        // preset parameters with defaults filled in
    TrainerConfig cfg;  // trainer defaults with overrides applied
};

PresetInput split_overrides(const std::string& preset, const json& overrides, json defaults,
                            TrainerConfig cfg) {
    const json ov = overrides.is_null() ? json::object() : overrides;
    require(ov.is_object(), preset + ": overrides must be a JSON object");
    json trainer_part = json::object();
    for (const auto& [key, value] : ov.items()) {
        if (kTrainerKeys.contains(key))
            trainer_part[key] = value;
        else if (defaults.contains(key))
            defaults[key] = value;
        else
            throw ContractError(preset + ": unknown key '" + key + "'");
    }
    return {std::move(defaults), trainer_config_from_json(trainer_part, cfg)};
}

template <typename T>
T param(const json& params, const std::string& key, const std::string& preset) {
    return get_field<T>(params, key, preset);
}

std::vector<double> number_list(const json& params, const std::string& key, const std::string& preset) {
    const json& v = params.at(key);
    if (v.is_number()) return {v.get<double>()};
    return get_field<std::vector<double>>(params, key, preset);
}

AreaDomain strip_area(double extent) {
    GridSpec g{-extent, extent, -1.0, 1.0, 1201, 201};
    return {g, Labeling::vertical(0.0, 0, 1)};
}

// Single hidden unit with normal norm * [1, 0.3] / sqrt(1.09) through (x0, 0).
Network tilted_unit(double norm, double x0, double head) {
    const double s = norm / std::sqrt(1.09);
    return presets::single_hyperplane(s, 0.3 * s, s * x0, head);
}

std::string fmt_label(const std::string& key, double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return key + "=" + s;
}

std::vector<ExperimentRun> density_runs(const json& overrides) {
    TrainerConfig cfg;
    cfg.iterations = 300000;
    cfg.record_every = 1000;
    cfg.frozen_layers = {2};
    cfg.seed = 1;
    auto in = split_overrides("density", overrides,
                              {{"n", {50, 200, 800, 3200}}, {"extent", 6.0}, {"init_norm", 25.0}, {"head", 3.0}},
                              cfg);
    std::vector<ExperimentRun> runs;
    const double extent = param<double>(in.params, "extent", "density");
    for (double n : number_list(in.params, "n", "density")) {
        require(n >= 4 && n == std::floor(n), "density: n must be an integer >= 4");
        ExperimentRun r;
        r.label = fmt_label("n", n);
        r.initial = tilted_unit(param<double>(in.params, "init_norm", "density"), 2.0,
                                param<double>(in.params, "head", "density"));
        r.samples = make_simple_domain(static_cast<std::size_t>(n), extent, in.cfg.seed);
        r.config = in.cfg;
        r.area = strip_area(extent);
        r.params = in.params;
        r.params["n"] = n;
        r.params["anchors"] = {{-kAnchorOffset, -0.5}, {-kAnchorOffset, 0.5}, {kAnchorOffset, -0.5}, {kAnchorOffset, 0.5}};
        runs.push_back(std::move(r));
    }
    return runs;
}

std::vector<ExperimentRun> width_runs(const json& overrides) {
    TrainerConfig cfg;
    cfg.iterations = 300000;
    cfg.record_every = 20;
    cfg.frozen_layers = {2};
    cfg.seed = 1;
    auto in = split_overrides("width", overrides,
                              {{"n", 3200}, {"norms", {1.0, 10.0, 25.0}}, {"extent", 6.0}, {"head", 3.0}}, cfg);
    const double extent = param<double>(in.params, "extent", "width");
    const auto n = param<std::size_t>(in.params, "n", "width");
    const auto samples = make_simple_domain(n, extent, in.cfg.seed);
    std::vector<ExperimentRun> runs;
    for (double norm : number_list(in.params, "norms", "width")) {
        require(norm > 0.0, "width: norms must be positive");
        ExperimentRun r;
        r.label = fmt_label("norm", norm);
        r.initial = tilted_unit(norm, 2.0, param<double>(in.params, "head", "width"));
        r.samples = samples;
        r.config = in.cfg;
        r.area = strip_area(extent);
        r.params = in.params;
        r.params["norm"] = norm;
        runs.push_back(std::move(r));
    }
    return runs;
}

std::vector<ExperimentRun> norms_growth_runs(const json& overrides) {
    TrainerConfig cfg;
    cfg.iterations = 300000;
    cfg.record_every = 1000;
    cfg.seed = 1;
    auto in = split_overrides("norms-growth", overrides,
                              {{"per_class", 250}, {"extent", 30.0}, {"start_x", 25.0}, {"middle_weight", 3.0},
                               {"head", 3.0}},
                              cfg);
    const double extent = param<double>(in.params, "extent", "norms-growth");
    const double s = 1.0 / std::sqrt(1.09), x0 = param<double>(in.params, "start_x", "norms-growth");
    const double head = param<double>(in.params, "head", "norms-growth");
    std::vector<Layer> layers;
    layers.push_back({Matrix{{s, 0.3 * s}}, Vector{s * x0}, Activation::sigmoid(1)});
    layers.push_back({Matrix{{param<double>(in.params, "middle_weight", "norms-growth")}}, Vector{0.0},
                      Activation::sigmoid(1)});
    layers.push_back({Matrix{{-head}, {head}}, Vector{0.0, 0.0}, Activation::softmax()});
    ExperimentRun r;
    r.label = "three-layer";
    r.initial = Network(2, std::move(layers));
    r.samples = make_uniform_domain(param<std::size_t>(in.params, "per_class", "norms-growth"), extent, in.cfg.seed);
    r.config = in.cfg;
    r.area = strip_area(extent);
    r.params = in.params;
    return {std::move(r)};
}

std::vector<ExperimentRun> regularization_runs(const json& overrides) {
    TrainerConfig cfg;
    cfg.iterations = 300000;
    cfg.record_every = 1000;
    cfg.frozen_layers = {2};
    cfg.seed = 1;
    auto in = split_overrides("regularization-compare", overrides,
                              {{"per_class", 250}, {"extent", 30.0}, {"start_x", 25.0}, {"lambda", 1e-3},
                               {"kappa", 5.0}, {"head", 3.0}},
                              cfg);
    const std::string p = "regularization-compare";
    const double extent = param<double>(in.params, "extent", p);
    const auto samples = make_uniform_domain(param<std::size_t>(in.params, "per_class", p), extent, in.cfg.seed);
    const Network init = tilted_unit(1.0, param<double>(in.params, "start_x", p), param<double>(in.params, "head", p));
    std::vector<ExperimentRun> runs;
    for (const auto& [label, reg] :
         {std::pair{"standard", Regularization::none()},
          std::pair{"l2", Regularization::l2(param<double>(in.params, "lambda", p))},
          std::pair{"norm-ball", Regularization::norm_ball(param<double>(in.params, "kappa", p))}}) {
        ExperimentRun r;
        r.label = label;
        r.initial = init;
        r.samples = samples;
        r.config = in.cfg;
        r.config.reg = reg;
        r.area = strip_area(extent);
        r.params = in.params;
        runs.push_back(std::move(r));
    }
    return runs;
}

std::vector<ExperimentRun> rotate_runs(const json& overrides) {
    TrainerConfig cfg;
    cfg.iterations = 20000;
    cfg.record_every = 500;
    cfg.frozen_layers = {1, 3};
    cfg.seed = 1;
    auto in = split_overrides("rotate-boundary", overrides,
                              {{"n", 400}, {"extent", 3.0}, {"target_angle_deg", 70.0}, {"start_angle_deg", 0.0},
                               {"first_layer_scale", 1.0}, {"head", 3.0}},
                              cfg);
    const std::string p = "rotate-boundary";
    const double extent = param<double>(in.params, "extent", p);
    const double target = param<double>(in.params, "target_angle_deg", p) * std::numbers::pi / 180.0;
    const double start = param<double>(in.params, "start_angle_deg", p) * std::numbers::pi / 180.0;
    const double f = 0.1 * param<double>(in.params, "first_layer_scale", p);
    const double head = param<double>(in.params, "head", p);
    // Normals [f, -f] and [f, f] form a basis, so the second-layer row
    // [cos(t + pi/4), sin(t + pi/4)] acts like a first-layer normal at angle t.
    std::vector<Layer> layers;
    layers.push_back({Matrix{{f, -f}, {f, f}}, Vector{0.0, 0.0}, Activation::sigmoid(1)});
    layers.push_back({Matrix{{std::cos(start + std::numbers::pi / 4), std::sin(start + std::numbers::pi / 4)}},
                      Vector{0.0}, Activation::sigmoid(1)});
    layers.push_back({Matrix{{-head}, {head}}, Vector{0.0, 0.0}, Activation::softmax()});

    const double cx = std::cos(target), cy = std::sin(target);
    Labeling truth;
    truth.classify = [cx, cy](double x, double y) -> std::size_t { return cx * x + cy * y > 0.0 ? 1 : 0; };
    ExperimentRun r;
    r.label = "rotate";
    r.initial = Network(2, std::move(layers));
    Rng rng(in.cfg.seed);
    const auto n = param<std::size_t>(in.params, "n", p);
    require(n >= 2, "rotate-boundary: n must be at least 2");
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform(-extent, extent), y = rng.uniform(-extent, extent);
        r.samples.push_back({{x, y}, truth(x, y)});
    }
    r.config = in.cfg;
    r.area = AreaDomain{GridSpec::square(extent, 201), truth};
    r.params = in.params;
    return {std::move(r)};
}

std::vector<ExperimentRun> motivational_runs(const json& overrides) {
    TrainerConfig cfg;
    cfg.iterations = 10000;
    cfg.record_every = 100;
    cfg.frozen_layers = {2};
    cfg.seed = 1;
    auto in = split_overrides("motivational-1d", overrides,
                              {{"n", 97}, {"range", 12.0}, {"alpha", 1.0}, {"beta", 0.0}, {"gain", 5.0}}, cfg);
    const std::string p = "motivational-1d";
    const auto n = param<std::size_t>(in.params, "n", p);
    require(n >= 2, "motivational-1d: n must be at least 2");
    const double range = param<double>(in.params, "range", p);
    ExperimentRun r;
    r.label = "motivational";
    r.initial = presets::motivational_1d(param<double>(in.params, "alpha", p), param<double>(in.params, "beta", p),
                                         param<double>(in.params, "gain", p));
    for (std::size_t i = 0; i < n; ++i)
        r.samples.push_back({{-range + 2.0 * range * static_cast<double>(i) / static_cast<double>(n - 1)}, 0});
    r.config = in.cfg;
    r.params = in.params;
    return {std::move(r)};
}

}  // namespace

std::vector<std::string> experiment_presets() {
    return {"density", "width", "norms-growth", "regularization-compare", "rotate-boundary", "motivational-1d"};
}

std::vector<ExperimentRun> build_experiment(const std::string& preset, const json& overrides) {
    std::vector<ExperimentRun> runs;
    if (preset == "density") runs = density_runs(overrides);
    else if (preset == "width") runs = width_runs(overrides);
    else if (preset == "norms-growth") runs = norms_growth_runs(overrides);
    else if (preset == "regularization-compare") runs = regularization_runs(overrides);
    else if (preset == "rotate-boundary") runs = rotate_runs(overrides);
    else if (preset == "motivational-1d") runs = motivational_runs(overrides);
    else throw ContractError("unknown experiment preset '" + preset + "'");
    for (auto& r : runs) {
        r.params["preset"] = preset;
        r.config.validate(r.initial);
    }
    return runs;
}

std::vector<ExperimentReport> run_experiment(const std::string& preset, const json& overrides) {
    std::vector<ExperimentReport> out;
    for (const auto& run : build_experiment(preset, overrides)) out.push_back(train(run));
    return out;
}

}  // namespace regionlab
