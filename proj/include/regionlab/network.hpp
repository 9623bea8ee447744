#pragma once

// Feedforward network x_k = act_k(A_k x_{k-1} - b_k), cross-entropy loss and
// exact backpropagation.
//
// Layers are stored 0-based: layers()[0] is the first layer (the one that
// sees the input). Traces follow the same indexing. Field quantities and the
// command line use 1-based layer numbers and translate at the boundary.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "regionlab/activations.hpp"
#include "regionlab/dense.hpp"

namespace regionlab {

struct Layer {
    Matrix weights;  // A_k, rows = units, cols = inputs
    Vector bias;     // b_k, subtracted
    Activation activation;

    std::size_t units() const { return weights.rows(); }
    std::size_t inputs() const { return weights.cols(); }
    bool operator==(const Layer&) const = default;
};

class Network {
public:
    Network() = default;
    Network(std::size_t input_dim, std::vector<Layer> layers);

    std::size_t input_dim() const { return input_dim_; }
    std::size_t depth() const { return layers_.size(); }
    std::size_t output_dim() const { return layers_.back().units(); }
    const std::vector<Layer>& layers() const { return layers_; }
    const Layer& layer(std::size_t k) const { return layers_.at(k); }
    /// Mutable access for trainers; shapes must not be changed.
    Layer& mutable_layer(std::size_t k) { return layers_.at(k); }

    /// Whether the output activation defines a loss (Softmax or Logistic).
    bool has_loss_head() const;
    std::size_t class_count() const { return output_dim(); }
    std::size_t parameter_count() const;

    bool operator==(const Network&) const = default;

private:
    std::size_t input_dim_ = 0;
    std::vector<Layer> layers_;
};

/// Copy of net with every weight matrix and bias vector multiplied by factor.
Network scaled(const Network& net, double factor);

struct TrainingSample {
    Vector x;
    std::size_t label = 0;
};

struct ForwardTrace {
    Vector input;                  // x_0
    std::vector<Vector> pre;       // v_k
    std::vector<Vector> out;       // x_k = act_k(v_k)

    /// x_{k-1} for 0-based layer k.
    std::span<const double> layer_input(std::size_t k) const {
        return k == 0 ? std::span<const double>(input) : std::span<const double>(out[k - 1]);
    }
};

struct BackwardTrace {
    std::vector<Vector> y;  // y_k = df/dv_k
    std::vector<Vector> z;  // z_k = A_k^T y_k = df/dx_{k-1}; empty for the first layer
};

struct GradientSet {
    std::vector<Matrix> weights;  // df/dA_k
    std::vector<Vector> bias;     // df/db_k

    static GradientSet zeros_like(const Network& net);
    void set_zero();
    void add_scaled(const GradientSet& other, double factor);
    void scale(double factor);
    double squared_norm() const;
    bool operator==(const GradientSet&) const = default;
};

ForwardTrace forward(const Network& net, std::span<const double> x0);
/// Allocation-free variant once trace has been sized by a previous call.
void forward_into(const Network& net, std::span<const double> x0, ForwardTrace& trace);

/// Cross-entropy of the output head for class c: -log softmax(v_n)[c] for a
/// Softmax head, -log l_g(v_n[c]) for a Logistic head.
double loss_from_trace(const Network& net, const ForwardTrace& trace, std::size_t c);
double loss(const Network& net, const TrainingSample& sample);

/// y_n = df/dv_n of the output head.
void output_adjoint_into(const Network& net, const ForwardTrace& trace, std::size_t c,
                         std::span<double> y_out);

/// One backward step through layer k >= 1 (0-based): z_k = A_k^T y_k and
/// y_{k-1} = act'_{k-1}(v_{k-1}) * z_k. The partial-backprop code calls this
/// same routine so that truncated and full passes agree bit for bit.
void propagate_adjoint(const Network& net, const ForwardTrace& trace, std::size_t k,
                       std::span<const double> y_k, std::span<double> z_k,
                       std::span<double> y_prev);

/// Layer-k gradient blocks from y_k: dA_k = y_k x_{k-1}^T, db_k = -y_k.
/// Adds factor times the block into grad.
void accumulate_layer_gradient(const ForwardTrace& trace, std::size_t k,
                               std::span<const double> y_k, double factor, GradientSet& grad);

std::pair<BackwardTrace, GradientSet> backward(const Network& net, const ForwardTrace& trace,
                                               std::size_t c);

struct BatchGradient {
    double loss = 0.0;
    GradientSet gradient;
};

/// Mean loss and gradient over samples. Samples are processed in fixed-size
/// chunks whose partial sums are combined in chunk order, so the result does
/// not depend on the number of OpenMP threads.
BatchGradient batch_gradient(const Network& net, std::span<const TrainingSample> samples);
/// Straight sequential loop; reference for the parallel kernel.
BatchGradient batch_gradient_serial(const Network& net, std::span<const TrainingSample> samples);

/// Reusable evaluator holding per-chunk workspaces; used by the trainer to
/// avoid reallocations across iterations. Layers flagged in skip_gradient
/// still propagate adjoints but their gradient blocks are left at zero.
class GradientEvaluator {
public:
    static constexpr std::size_t kChunkSize = 256;

    explicit GradientEvaluator(const Network& shape);
    /// With compute_loss false the returned loss is NaN; saves the log-sum-exp
    /// on iterations that are not recorded.
    BatchGradient evaluate(const Network& net, std::span<const TrainingSample> samples,
                           const std::vector<bool>& skip_gradient = {}, bool compute_loss = true);

private:
    struct Workspace {
        ForwardTrace trace;
        Vector y;
        Vector y_prev;
        Vector z;
        GradientSet grad;
        double loss = 0.0;
    };
    std::vector<Workspace> chunks_;
    GradientSet total_;
};

/// Fixed parameter ordering: layer by layer, A_k row-major then b_k.
Vector flatten(const Network& net);
/// Rebuild a network with the shape (dims, activations) of like from s.
Network unflatten(const Network& like, std::span<const double> s);

}  // namespace regionlab
