#include "regionlab/partial_backprop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regionlab/error.hpp"

namespace regionlab {

namespace {

constexpr double kSpectralTolerance = 1e-10;
// Absorbs rounding in the Cauchy-Schwarz step when it is nearly tight.
constexpr double kRoundingSlack = 1.0 + 1e-12;

double max_derivative(const Activation& act, std::span<const double> v) {
    if (v.empty()) return 0.0;
    if (act.kind == Activation::Kind::Sigmoid || act.kind == Activation::Kind::Logistic) {
        // Both derivatives are even and decrease in |v|.
        const auto it = std::min_element(v.begin(), v.end(),
                                         [](double a, double b) { return std::abs(a) < std::abs(b); });
        return act.kind == Activation::Kind::Sigmoid ? sigma_prime(act.gamma, *it)
                                                     : logistic_prime(act.gamma, *it);
    }
    Vector d(v.size());
    derivative_into(act, v, d);
    return norm_inf(d);
}

Vector column_norms(const Matrix& a) {
    Vector out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * a(i, j);
    for (double& v : out) v = std::sqrt(v);
    return out;
}

Vector row_norms(const Matrix& a) {
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = norm2(a.row(i));
    return out;
}

void check_threshold_map(const std::map<std::size_t, double>& m, const char* what) {
    for (const auto& [layer, t] : m) {
        require(layer >= 1, std::string("CutoffPolicy: ") + what + " layers are 1-based");
        require(!std::isnan(t) && t >= 0.0, std::string("CutoffPolicy: ") + what + " must be nonnegative");
    }
}

}  // namespace

void CutoffPolicy::validate() const {
    check_threshold_map(weight_thresholds, "weight thresholds");
    check_threshold_map(bias_thresholds, "bias thresholds");
}

double CutoffPolicy::weight_threshold(std::size_t layer) const {
    const auto it = weight_thresholds.find(layer);
    return it == weight_thresholds.end() ? 0.0 : it->second;
}

double CutoffPolicy::bias_threshold(std::size_t layer) const {
    const auto it = bias_thresholds.find(layer);
    return it == bias_thresholds.end() ? std::numeric_limits<double>::infinity() : it->second;
}

CutoffPolicy CutoffPolicy::uniform(std::size_t layers, double weight_threshold, Norm norm) {
    CutoffPolicy p;
    for (std::size_t k = 1; k <= layers; ++k) p.weight_thresholds[k] = weight_threshold;
    p.norm = norm;
    p.validate();
    return p;
}

std::string to_string(CutoffPolicy::Norm norm) {
    return norm == CutoffPolicy::Norm::L2 ? "l2" : "linf";
}

CutoffPolicy::Norm norm_from_string(const std::string& name) {
    if (name == "l2") return CutoffPolicy::Norm::L2;
    if (name == "linf") return CutoffPolicy::Norm::LInf;
    throw ContractError("unknown norm '" + name + "' (expected l2 or linf)");
}

std::string to_string(CutoffPolicy::LInfVariant variant) {
    return variant == CutoffPolicy::LInfVariant::Tight ? "tight" : "loose";
}

CutoffPolicy::LInfVariant linf_variant_from_string(const std::string& name) {
    if (name == "tight") return CutoffPolicy::LInfVariant::Tight;
    if (name == "loose") return CutoffPolicy::LInfVariant::Loose;
    throw ContractError("unknown linf variant '" + name + "' (expected tight or loose)");
}

AdjointBounds::AdjointBounds(const Network& net) : net_(&net) {
    for (const Layer& layer : net.layers()) {
        const SpectralNormEstimate s = regionlab::spectral_norm(layer.weights, kSpectralTolerance);
        spectral_.push_back(s.value * kSpectralInflation);
        col_norms_.push_back(column_norms(layer.weights));
        row_norms_.push_back(row_norms(layer.weights));
    }
}

double AdjointBounds::l2(const ForwardTrace& trace, std::size_t k, double y_k_norm2) const {
    require(k >= 1 && k < net_->depth(), "bound_y_l2: layer must be a hidden-to-hidden step");
    return max_derivative(net_->layer(k - 1).activation, trace.pre[k - 1]) * spectral_[k] * y_k_norm2;
}

double AdjointBounds::linf(const ForwardTrace& trace, std::size_t k, double y_k_norm2,
                           CutoffPolicy::LInfVariant variant, bool rows) const {
    require(k >= 1 && k < net_->depth(), "bound_y_linf: layer must be a hidden-to-hidden step");
    const Activation& act = net_->layer(k - 1).activation;
    const Vector& v = trace.pre[k - 1];
    const Vector& norms = rows ? row_norms_[k] : col_norms_[k];
    if (variant == CutoffPolicy::LInfVariant::Loose)
        return max_derivative(act, v) * norm_inf(norms) * y_k_norm2 * kRoundingSlack;
    require(norms.size() == v.size(),
            "bound_y_linf: tight row variant needs a square weight matrix");
    Vector d(v.size());
    derivative_into(act, v, d);
    double best = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) best = std::max(best, std::abs(d[i]) * norms[i]);
    return best * y_k_norm2 * kRoundingSlack;
}

double bound_y_l2(const Network& net, const ForwardTrace& trace, std::size_t k, double y_k_norm2) {
    return AdjointBounds(net).l2(trace, k, y_k_norm2);
}

double bound_y_linf(const Network& net, const ForwardTrace& trace, std::size_t k,
                    double y_k_norm2, CutoffPolicy::LInfVariant variant, bool rows) {
    return AdjointBounds(net).linf(trace, k, y_k_norm2, variant, rows);
}

namespace {

// True when bounds certify that layers 0..current-1 (0-based) all fall below
// their thresholds, given the exact adjoint of layer `current`.
bool can_stop(const ForwardTrace& trace, std::size_t current,
              const Vector& y_current, const CutoffPolicy& policy, const AdjointBounds& bounds) {
    double y2 = norm2(y_current);  // bound on ||y_{j+1}||_2 while descending
    for (std::size_t j = current; j-- > 0;) {
        double bias_bound, weight_bound;
        if (policy.norm == CutoffPolicy::Norm::L2) {
            bias_bound = bounds.l2(trace, j + 1, y2);
            weight_bound = norm2(trace.layer_input(j)) * bias_bound;
        } else {
            bias_bound = bounds.linf(trace, j + 1, y2, policy.linf_variant, policy.linf_rows);
            weight_bound = norm_inf(trace.layer_input(j)) * bias_bound;
        }
        if (!(weight_bound < policy.weight_threshold(j + 1)) ||
            !(bias_bound < policy.bias_threshold(j + 1)))
            return false;
        if (j > 0) y2 = bounds.l2(trace, j + 1, y2);
    }
    return true;
}

}  // namespace

CutoffResult backward_with_cutoff(const Network& net, const ForwardTrace& trace, std::size_t c,
                                  const CutoffPolicy& policy, const AdjointBounds& bounds) {
    const std::size_t n = net.depth();
    require(trace.pre.size() == n && trace.out.size() == n,
            "backward_with_cutoff: trace does not match network depth");
    CutoffResult result{GradientSet::zeros_like(net), n};
    Vector y(net.output_dim()), z, y_prev;
    output_adjoint_into(net, trace, c, y);
    std::size_t k = n - 1;
    accumulate_layer_gradient(trace, k, y, 1.0, result.gradient);
    while (k > 0 && !can_stop(trace, k, y, policy, bounds)) {
        z.resize(net.layer(k).inputs());
        y_prev.resize(net.layer(k - 1).units());
        propagate_adjoint(net, trace, k, y, z, y_prev);
        std::swap(y, y_prev);
        --k;
        accumulate_layer_gradient(trace, k, y, 1.0, result.gradient);
    }
    result.reached_layer = k + 1;
    return result;
}

CutoffResult backward_with_cutoff(const Network& net, const ForwardTrace& trace, std::size_t c,
                                  const CutoffPolicy& policy) {
    policy.validate();
    return backward_with_cutoff(net, trace, c, policy, AdjointBounds(net));
}

namespace {

ReachStatistics prepare_reach(const Network& net, const GridSpec& spec, const CutoffPolicy& policy) {
    spec.validate();
    policy.validate();
    require(net.input_dim() == 2, "reach_statistics: network input must be 2-D");
    require(net.has_loss_head(), "reach_statistics: network needs a loss head");
    FieldMap reached{spec, FieldQuantity{}, Vector(spec.size())};
    return {{}, std::move(reached)};
}

double reach_node(const Network& net, const AdjointBounds& bounds, const Labeling& truth,
                  const CutoffPolicy& policy, double x, double y, ForwardTrace& trace) {
    const double point[2] = {x, y};
    forward_into(net, point, trace);
    return static_cast<double>(
        backward_with_cutoff(net, trace, truth(x, y), policy, bounds).reached_layer);
}

void finish_reach(const Network& net, ReachStatistics& stats) {
    stats.fractions.assign(net.depth(), 0.0);
    for (double r : stats.reached.values)
        for (std::size_t k = static_cast<std::size_t>(r); k <= net.depth(); ++k)
            stats.fractions[k - 1] += 1.0;
    for (double& f : stats.fractions) f /= static_cast<double>(stats.reached.values.size());
}

}  // namespace

ReachStatistics reach_statistics(const Network& net, const GridSpec& spec, const Labeling& truth,
                                 const CutoffPolicy& policy) {
    ReachStatistics stats = prepare_reach(net, spec, policy);
    const AdjointBounds bounds(net);
    const long long rows = static_cast<long long>(spec.ny);
#pragma omp parallel
    {
        ForwardTrace trace;
#pragma omp for schedule(static)
        for (long long j = 0; j < rows; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            for (std::size_t i = 0; i < spec.nx; ++i)
                stats.reached.values[jj * spec.nx + i] =
                    reach_node(net, bounds, truth, policy, spec.x(i), spec.y(jj), trace);
        }
    }
    finish_reach(net, stats);
    return stats;
}

ReachStatistics reach_statistics_serial(const Network& net, const GridSpec& spec,
                                        const Labeling& truth, const CutoffPolicy& policy) {
    ReachStatistics stats = prepare_reach(net, spec, policy);
    const AdjointBounds bounds(net);
    ForwardTrace trace;
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i)
            stats.reached.values[j * spec.nx + i] =
                reach_node(net, bounds, truth, policy, spec.x(i), spec.y(j), trace);
    finish_reach(net, stats);
    return stats;
}

}  // namespace regionlab
