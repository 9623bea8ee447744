#include "regionlab/network.hpp"

#include <cmath>
#include <string>

#include "regionlab/error.hpp"

namespace regionlab {

Network::Network(std::size_t input_dim, std::vector<Layer> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
    require(input_dim_ >= 1, "Network: input dimension must be at least 1");
    require(!layers_.empty(), "Network: need at least one layer");
    std::size_t in = input_dim_;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const Layer& l = layers_[k];
        const std::string where = "Network: layer " + std::to_string(k + 1);
        require(l.inputs() == in, where + " expects " + std::to_string(l.inputs()) +
                                      " inputs but receives " + std::to_string(in));
        require(l.bias.size() == l.units(), where + " bias length differs from unit count");
        if (l.activation.kind == Activation::Kind::Sigmoid ||
            l.activation.kind == Activation::Kind::Logistic)
            require(std::isfinite(l.activation.gamma) && l.activation.gamma > 0.0,
                    where + " gain must be finite and positive");
        require(l.activation.kind != Activation::Kind::Softmax || k + 1 == layers_.size(),
                where + ": softmax is only supported as the output layer");
        in = l.units();
    }
}

bool Network::has_loss_head() const {
    const auto kind = layers_.back().activation.kind;
    return kind == Activation::Kind::Softmax || kind == Activation::Kind::Logistic;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
    return n;
}

Network scaled(const Network& net, double factor) {
    std::vector<Layer> layers = net.layers();
    for (auto& l : layers) {
        for (double& w : l.weights.data()) w *= factor;
        for (double& b : l.bias) b *= factor;
    }
    return Network(net.input_dim(), std::move(layers));
}

GradientSet GradientSet::zeros_like(const Network& net) {
    GradientSet g;
    for (const auto& l : net.layers()) {
        g.weights.emplace_back(l.units(), l.inputs());
        g.bias.emplace_back(l.units(), 0.0);
    }
    return g;
}

void GradientSet::set_zero() {
    for (auto& m : weights)
        for (double& v : m.data()) v = 0.0;
    for (auto& b : bias)
        for (double& v : b) v = 0.0;
}

void GradientSet::add_scaled(const GradientSet& other, double factor) {
    require(other.weights.size() == weights.size(), "GradientSet: layer count mismatch");
    for (std::size_t k = 0; k < weights.size(); ++k) {
        auto dst = weights[k].data();
        auto src = other.weights[k].data();
        require(dst.size() == src.size(), "GradientSet: block shape mismatch");
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
        for (std::size_t i = 0; i < bias[k].size(); ++i) bias[k][i] += factor * other.bias[k][i];
    }
}

void GradientSet::scale(double factor) {
    for (auto& m : weights)
        for (double& v : m.data()) v *= factor;
    for (auto& b : bias)
        for (double& v : b) v *= factor;
}

double GradientSet::squared_norm() const {
    double s = 0.0;
    for (const auto& m : weights)
        for (double v : m.data()) s += v * v;
    for (const auto& b : bias)
        for (double v : b) s += v * v;
    return s;
}

void forward_into(const Network& net, std::span<const double> x0, ForwardTrace& trace) {
    if (x0.size() != net.input_dim())
        throw ContractError("forward: input has " + std::to_string(x0.size()) +
                            " entries, network expects " + std::to_string(net.input_dim()));
    const std::size_t n = net.depth();
    trace.input.assign(x0.begin(), x0.end());
    trace.pre.resize(n);
    trace.out.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Layer& l = net.layer(k);
        trace.pre[k].resize(l.units());
        trace.out[k].resize(l.units());
        affine_into(l.weights, trace.layer_input(k), l.bias, trace.pre[k]);
        apply_into(l.activation, trace.pre[k], trace.out[k]);
    }
}

ForwardTrace forward(const Network& net, std::span<const double> x0) {
    ForwardTrace t;
    forward_into(net, x0, t);
    return t;
}

double loss_from_trace(const Network& net, const ForwardTrace& trace, std::size_t c) {
    require(c < net.class_count(), "loss: class index out of range");
    const Layer& head = net.layers().back();
    const Vector& v = trace.pre.back();
    switch (head.activation.kind) {
        case Activation::Kind::Softmax: return log_sum_exp(v) - v[c];
        case Activation::Kind::Logistic: return neg_log_logistic(head.activation.gamma, v[c]);
        default: throw ContractError("loss: output activation must be softmax or logistic");
    }
}

double loss(const Network& net, const TrainingSample& sample) {
    return loss_from_trace(net, forward(net, sample.x), sample.label);
}

void output_adjoint_into(const Network& net, const ForwardTrace& trace, std::size_t c,
                         std::span<double> y_out) {
    require(c < net.class_count(), "backward: class index out of range");
    const Layer& head = net.layers().back();
    const Vector& v = trace.pre.back();
    switch (head.activation.kind) {
        case Activation::Kind::Softmax: {
            const Vector& p = trace.out.back();
            for (std::size_t i = 0; i < p.size(); ++i) y_out[i] = p[i];
            y_out[c] -= 1.0;
            return;
        }
        case Activation::Kind::Logistic:
            for (double& y : y_out) y = 0.0;
            y_out[c] = neg_log_logistic_prime(head.activation.gamma, v[c]);
            return;
        default: throw ContractError("backward: output activation must be softmax or logistic");
    }
}

void propagate_adjoint(const Network& net, const ForwardTrace& trace, std::size_t k,
                       std::span<const double> y_k, std::span<double> z_k,
                       std::span<double> y_prev) {
    transpose_matvec_into(net.layer(k).weights, y_k, z_k);
    derivative_into(net.layer(k - 1).activation, trace.pre[k - 1], y_prev);
    for (std::size_t i = 0; i < y_prev.size(); ++i) y_prev[i] *= z_k[i];
}

void accumulate_layer_gradient(const ForwardTrace& trace, std::size_t k,
                               std::span<const double> y_k, double factor, GradientSet& grad) {
    const auto x = trace.layer_input(k);
    Matrix& da = grad.weights[k];
    Vector& db = grad.bias[k];
    const std::size_t cols = x.size();
    double* p = da.data().data();
    for (std::size_t i = 0; i < y_k.size(); ++i, p += cols) {
        const double yi = factor * y_k[i];
        for (std::size_t j = 0; j < cols; ++j) p[j] += yi * x[j];
        db[i] -= yi;
    }
}

std::pair<BackwardTrace, GradientSet> backward(const Network& net, const ForwardTrace& trace,
                                               std::size_t c) {
    const std::size_t n = net.depth();
    require(trace.pre.size() == n && trace.out.size() == n,
            "backward: trace does not match network depth");
    BackwardTrace bt;
    bt.y.resize(n);
    bt.z.resize(n);
    GradientSet grad = GradientSet::zeros_like(net);
    bt.y[n - 1].resize(net.output_dim());
    output_adjoint_into(net, trace, c, bt.y[n - 1]);
    for (std::size_t k = n - 1;; --k) {
        accumulate_layer_gradient(trace, k, bt.y[k], 1.0, grad);
        if (k == 0) break;
        bt.z[k].resize(net.layer(k).inputs());
        bt.y[k - 1].resize(net.layer(k - 1).units());
        propagate_adjoint(net, trace, k, bt.y[k], bt.z[k], bt.y[k - 1]);
    }
    return {std::move(bt), std::move(grad)};
}

BatchGradient batch_gradient_serial(const Network& net, std::span<const TrainingSample> samples) {
    require(!samples.empty(), "batch_gradient: sample set is empty");
    BatchGradient out{0.0, GradientSet::zeros_like(net)};
    for (const auto& s : samples) {
        const ForwardTrace t = forward(net, s.x);
        out.loss += loss_from_trace(net, t, s.label);
        auto [bt, g] = backward(net, t, s.label);
        out.gradient.add_scaled(g, 1.0);
    }
    const double inv = 1.0 / static_cast<double>(samples.size());
    out.loss *= inv;
    out.gradient.scale(inv);
    return out;
}

GradientEvaluator::GradientEvaluator(const Network& shape) : total_(GradientSet::zeros_like(shape)) {}

BatchGradient GradientEvaluator::evaluate(const Network& net,
                                          std::span<const TrainingSample> samples,
                                          const std::vector<bool>& skip_gradient,
                                          bool compute_loss) {
    require(!samples.empty(), "batch_gradient: sample set is empty");
    const std::size_t n = net.depth();
    const std::size_t chunk_count = (samples.size() + kChunkSize - 1) / kChunkSize;
    if (chunks_.size() < chunk_count) chunks_.resize(chunk_count);
    std::size_t width = 0;
    for (const auto& l : net.layers()) width = std::max(width, std::max(l.units(), l.inputs()));

    const long long chunks = static_cast<long long>(chunk_count);
#pragma omp parallel for schedule(static)
    for (long long ci = 0; ci < chunks; ++ci) {
        Workspace& ws = chunks_[static_cast<std::size_t>(ci)];
        if (ws.grad.weights.size() != n) ws.grad = GradientSet::zeros_like(net);
        ws.grad.set_zero();
        ws.loss = 0.0;
        ws.y.resize(width);
        ws.y_prev.resize(width);
        ws.z.resize(width);
        const std::size_t begin = static_cast<std::size_t>(ci) * kChunkSize;
        const std::size_t end = std::min(samples.size(), begin + kChunkSize);
        for (std::size_t s = begin; s < end; ++s) {
            const TrainingSample& sample = samples[s];
            forward_into(net, sample.x, ws.trace);
            if (compute_loss) ws.loss += loss_from_trace(net, ws.trace, sample.label);
            std::span<double> y(ws.y.data(), net.output_dim());
            output_adjoint_into(net, ws.trace, sample.label, y);
            for (std::size_t k = n - 1;; --k) {
                if (skip_gradient.empty() || !skip_gradient[k])
                    accumulate_layer_gradient(ws.trace, k, y, 1.0, ws.grad);
                if (k == 0) break;
                // Nothing below a run of frozen layers needs an adjoint.
                bool needed = skip_gradient.empty();
                for (std::size_t j = 0; j < k && !needed; ++j) needed = !skip_gradient[j];
                if (!needed) break;
                std::span<double> z(ws.z.data(), net.layer(k).inputs());
                std::span<double> yp(ws.y_prev.data(), net.layer(k - 1).units());
                propagate_adjoint(net, ws.trace, k, y, z, yp);
                std::copy(yp.begin(), yp.end(), ws.y.begin());
                y = std::span<double>(ws.y.data(), yp.size());
            }
        }
    }

    total_.set_zero();
    double loss_sum = 0.0;
    for (std::size_t ci = 0; ci < chunk_count; ++ci) {
        total_.add_scaled(chunks_[ci].grad, 1.0);
        loss_sum += chunks_[ci].loss;
    }
    const double inv = 1.0 / static_cast<double>(samples.size());
    BatchGradient out{compute_loss ? loss_sum * inv : std::nan(""), total_};
    out.gradient.scale(inv);
    return out;
}

BatchGradient batch_gradient(const Network& net, std::span<const TrainingSample> samples) {
    GradientEvaluator ev(net);
    return ev.evaluate(net, samples);
}

Vector flatten(const Network& net) {
    Vector s;
    s.reserve(net.parameter_count());
    for (const auto& l : net.layers()) {
        s.insert(s.end(), l.weights.data().begin(), l.weights.data().end());
        s.insert(s.end(), l.bias.begin(), l.bias.end());
    }
    return s;
}

Network unflatten(const Network& like, std::span<const double> s) {
    require(s.size() == like.parameter_count(),
            "unflatten: parameter vector has " + std::to_string(s.size()) + " entries, expected " +
                std::to_string(like.parameter_count()));
    std::vector<Layer> layers;
    std::size_t pos = 0;
    for (const auto& l : like.layers()) {
        const std::size_t nw = l.weights.size();
        Matrix a(l.units(), l.inputs(), Vector(s.begin() + pos, s.begin() + pos + nw));
        pos += nw;
        Vector b(s.begin() + pos, s.begin() + pos + l.units());
        pos += l.units();
        layers.push_back({std::move(a), std::move(b), l.activation});
    }
    return Network(like.input_dim(), std::move(layers));
}

}  // namespace regionlab
