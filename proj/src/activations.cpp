#include "regionlab/activations.hpp"

#include <algorithm>
#include <cmath>

#include "regionlab/error.hpp"

namespace regionlab {

Activation Activation::sigmoid(double gamma) {
    require(std::isfinite(gamma) && gamma > 0.0, "sigmoid gain must be finite and positive");
    return {Kind::Sigmoid, gamma};
}

Activation Activation::logistic(double gamma) {
    require(std::isfinite(gamma) && gamma > 0.0, "logistic gain must be finite and positive");
    return {Kind::Logistic, gamma};
}

std::string to_string(Activation::Kind kind) {
    switch (kind) {
        case Activation::Kind::Sigmoid: return "sigmoid";
        case Activation::Kind::Logistic: return "logistic";
        case Activation::Kind::Step: return "step";
        case Activation::Kind::Softmax: return "softmax";
        case Activation::Kind::Identity: return "identity";
    }
    return "unknown";
}

Activation::Kind activation_kind_from_string(const std::string& name) {
    if (name == "sigmoid") return Activation::Kind::Sigmoid;
    if (name == "logistic") return Activation::Kind::Logistic;
    if (name == "step") return Activation::Kind::Step;
    if (name == "softmax") return Activation::Kind::Softmax;
    if (name == "identity") return Activation::Kind::Identity;
    throw ContractError("unknown activation kind '" + name + "'");
}

double logistic(double gamma, double x) {
    const double t = gamma * x;
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double logistic_prime(double gamma, double x) {
    // g e / (1 + e)^2 with e = exp(-g |x|); symmetric in x.
    const double e = std::exp(-gamma * std::abs(x));
    const double d = 1.0 + e;
    return gamma * e / (d * d);
}

double sigma(double gamma, double x) { return std::tanh(0.5 * gamma * x); }

double sigma_prime(double gamma, double x) { return 2.0 * logistic_prime(gamma, x); }

double sigma_inverse(double gamma, double y) {
    if (!(y > -1.0 && y < 1.0))
        throw DomainError("sigma_inverse: argument must lie in (-1, 1)");
    return 2.0 * std::atanh(y) / gamma;
}

double neg_log_logistic_prime(double gamma, double x) { return gamma * (logistic(gamma, x) - 1.0); }

double neg_log_logistic(double gamma, double x) {
    const double t = -gamma * x;
    // softplus(t) = max(t, 0) + log1p(exp(-|t|))
    return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double log_sum_exp(std::span<const double> v) {
    require(!v.empty(), "log_sum_exp: empty input");
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

void softmax_into(std::span<const double> v, std::span<double> out) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - m);
        s += out[i];
    }
    for (std::size_t i = 0; i < v.size(); ++i) out[i] /= s;
}

Vector softmax(std::span<const double> v) {
    require(!v.empty(), "softmax: empty input");
    Vector out(v.size());
    softmax_into(v, out);
    return out;
}

void apply_into(const Activation& act, std::span<const double> v, std::span<double> out) {
    switch (act.kind) {
        case Activation::Kind::Sigmoid:
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = sigma(act.gamma, v[i]);
            return;
        case Activation::Kind::Logistic:
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = logistic(act.gamma, v[i]);
            return;
        case Activation::Kind::Step:
            // Ties go to +1 so that the nonnegative set is the halfspace.
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] >= 0.0 ? 1.0 : -1.0;
            return;
        case Activation::Kind::Softmax:
            softmax_into(v, out);
            return;
        case Activation::Kind::Identity:
            std::copy(v.begin(), v.end(), out.begin());
            return;
    }
}

Vector apply(const Activation& act, std::span<const double> v) {
    Vector out(v.size());
    apply_into(act, v, out);
    return out;
}

void derivative_into(const Activation& act, std::span<const double> v, std::span<double> out) {
    switch (act.kind) {
        case Activation::Kind::Sigmoid:
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = sigma_prime(act.gamma, v[i]);
            return;
        case Activation::Kind::Logistic:
            for (std::size_t i = 0; i < v.size(); ++i) out[i] = logistic_prime(act.gamma, v[i]);
            return;
        case Activation::Kind::Step:
            std::fill(out.begin(), out.end(), 0.0);
            return;
        case Activation::Kind::Identity:
            std::fill(out.begin(), out.end(), 1.0);
            return;
        case Activation::Kind::Softmax:
            throw ContractError("softmax has no elementwise derivative; use it as the output layer");
    }
}

}  // namespace regionlab
