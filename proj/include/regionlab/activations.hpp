#pragma once

#include <span>
#include <string>

#include "regionlab/dense.hpp"

namespace regionlab {

/// Elementwise (or, for Softmax, vector-wise) nonlinearity of a layer.
struct Activation {
    enum class Kind { Sigmoid, Logistic, Step, Softmax, Identity };

    Kind kind = Kind::Sigmoid;
    double gamma = 1.0;  // gain; meaningful for Sigmoid and Logistic

    static Activation sigmoid(double gamma = 1.0);
    static Activation logistic(double gamma = 1.0);
    static Activation step() { return {Kind::Step, 1.0}; }
    static Activation softmax() { return {Kind::Softmax, 1.0}; }
    static Activation identity() { return {Kind::Identity, 1.0}; }

    bool operator==(const Activation&) const = default;
};

std::string to_string(Activation::Kind kind);
Activation::Kind activation_kind_from_string(const std::string& name);

// Scalar functions. The symmetric sigmoid is sigma_g(x) = 2 l_g(x) - 1 =
// tanh(g x / 2) with l_g the logistic function 1 / (1 + exp(-g x)).

double logistic(double gamma, double x);
/// l'_g(x) = g (l_g(x) - l_g(x)^2), evaluated without cancellation.
double logistic_prime(double gamma, double x);
double sigma(double gamma, double x);
/// sigma'_g(x) = 2 l'_g(x); positive, even, peak g/2 at the origin.
double sigma_prime(double gamma, double x);
/// Inverse of sigma_g on (-1, 1). Throws DomainError for |y| >= 1.
double sigma_inverse(double gamma, double y);
/// d/dx [-log l_g(x)] = g (l_g(x) - 1).
double neg_log_logistic_prime(double gamma, double x);
/// -log l_g(x) computed as log(1 + exp(-g x)) without overflow.
double neg_log_logistic(double gamma, double x);

/// Softmax with max-subtraction. Input must be nonempty and finite.
Vector softmax(std::span<const double> v);
void softmax_into(std::span<const double> v, std::span<double> out);
/// log(sum_j exp(v_j)), stabilized.
double log_sum_exp(std::span<const double> v);

/// Apply an activation to a pre-activation vector.
void apply_into(const Activation& act, std::span<const double> v, std::span<double> out);
Vector apply(const Activation& act, std::span<const double> v);

/// Elementwise derivative d act(v_i) / d v_i for the elementwise kinds. The
/// step function has derivative zero almost everywhere. Softmax is not
/// elementwise and is rejected.
void derivative_into(const Activation& act, std::span<const double> v, std::span<double> out);

}  // namespace regionlab
