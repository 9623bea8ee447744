#pragma once

// Full-batch gradient descent with optional penalties or row-norm
// constraints, progress metrics and the preset experiments built on the
// two-class strip domain.
//
// Layer numbers in configurations are 1-based.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "regionlab/field.hpp"
#include "regionlab/network.hpp"
#include "regionlab/presets.hpp"

namespace regionlab {

struct Regularization {
    enum class Kind {
        None,
        L2,        // + lambda/2 * sum of squared row norms
        L1,        // + lambda * sum of |entries|; subgradient sign(0) = 0
        NormBall,  // every row projected onto ||row||_2 <= kappa after each step
    };

    Kind kind = Kind::None;
    double strength = 0.0;  // lambda or kappa
    std::set<std::size_t> layers{1};

    static Regularization none() { return {}; }
    static Regularization l2(double lambda, std::set<std::size_t> layers = {1});
    static Regularization l1(double lambda, std::set<std::size_t> layers = {1});
    static Regularization norm_ball(double kappa, std::set<std::size_t> layers = {1});
};

std::string to_string(Regularization::Kind kind);
Regularization::Kind regularization_kind_from_string(const std::string& name);

struct TrainerConfig {
    double learning_rate = 0.01;
    std::size_t iterations = 0;
    std::set<std::size_t> frozen_layers;
    Regularization reg;
    std::size_t record_every = 1000;
    std::uint64_t seed = 0;
    /// Stop at the first recorded iteration whose misclassified area is at or
    /// below zero_area_tolerance.
    bool stop_on_zero_area = false;
    double zero_area_tolerance = 0.1;

    /// Throws ContractError when the config does not fit net.
    void validate(const Network& net) const;
};

nlohmann::json to_json(const TrainerConfig& cfg);
/// Reads the keys present in j on top of base; unknown keys are rejected.
TrainerConfig trainer_config_from_json(const nlohmann::json& j, TrainerConfig base = {});

/// Value of the penalty term r(s) (zero for None and NormBall).
double penalty(const Network& net, const Regularization& reg);

/// Applies s <- s - lr (grad + grad r) to the layers that are not frozen,
/// then projects constrained rows.
void apply_update(Network& net, const GradientSet& grad, const TrainerConfig& cfg);

/// One full-batch step.
Network gd_step(const Network& net, std::span<const TrainingSample> samples, const TrainerConfig& cfg);

/// Rectangle plus ground truth over which misclassification is measured.
struct AreaDomain {
    GridSpec grid;  // the rectangle; nodes are used by the grid estimate
    Labeling truth;
};

/// Exact area when the first layer has a single sigmoid unit feeding a chain
/// of single units and a two-class softmax head, and the truth is a vertical
/// split; nullopt otherwise.
std::optional<double> misclassified_area_exact(const Network& net, const AreaDomain& domain);
/// Node count where argmax differs from the truth, times the cell area.
double misclassified_area_grid(const Network& net, const AreaDomain& domain);
/// Exact value when available, grid estimate otherwise.
double misclassified_area(const Network& net, const AreaDomain& domain);

/// Smallest distance |<a,x> - b| / ||a|| from a sample to the hyperplane of
/// first-layer unit `row`.
double nearest_sample_distance(const Network& net, std::span<const TrainingSample> samples,
                               std::size_t row = 0);

inline constexpr double kAnchorOffset = 0.05;

/// Four anchors (-0.05, +-0.5) class 0 and (0.05, +-0.5) class 1, the rest
/// uniform on [-extent, -0.05] x [-1, 1] (class 0) and [0.05, extent] x [-1, 1]
/// (class 1); class sizes differ by at most one.
std::vector<TrainingSample> make_simple_domain(std::size_t n, double extent, std::uint64_t seed);
/// per_class samples uniform on each half of [-extent, extent] x [-1, 1].
std::vector<TrainingSample> make_uniform_domain(std::size_t per_class, double extent, std::uint64_t seed);

struct ExperimentReport {
    std::string label;
    /// Config echo including preset parameters and the seed.
    nlohmann::json config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // one per recorded iteration
    std::optional<std::size_t> zero_area_iteration;
    Network final_network;

    /// Values of one named column.
    std::vector<double> column(const std::string& name) const;
    const std::vector<double>& last() const { return rows.back(); }
    double last(const std::string& name) const;
};

/// Everything needed to run one training job.
struct ExperimentRun {
    std::string label;
    Network initial;
    std::vector<TrainingSample> samples;
    TrainerConfig config;
    std::optional<AreaDomain> area;
    nlohmann::json params;  // preset parameters, echoed into the report
};

ExperimentReport train(const ExperimentRun& run);

/// Preset names: density, width, norms-growth, regularization-compare,
/// rotate-boundary, motivational-1d.
std::vector<std::string> experiment_presets();
/// Expands a preset into its runs. overrides may hold any preset parameter or
/// trainer key; unknown keys raise ContractError.
std::vector<ExperimentRun> build_experiment(const std::string& preset, const nlohmann::json& overrides = {});
std::vector<ExperimentReport> run_experiment(const std::string& preset, const nlohmann::json& overrides = {});

}  // namespace regionlab
