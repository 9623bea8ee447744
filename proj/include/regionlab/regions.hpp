#pragma once

// Layer parameters that realize Boolean set operations on soft regions,
// boundary analytics for combined regions, generalized first-layer
// primitives and the hyperplane-arrangement region count.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "regionlab/activations.hpp"
#include "regionlab/dense.hpp"
#include "regionlab/network.hpp"

namespace regionlab {

/// A set operation applied by one unit to arity input regions, each given
/// as a +-1 (or soft sigmoid) membership signal.
struct RegionOp {
    enum class Kind { Constant, Identity, Complement, Intersection, Union, KofN };

    Kind kind = Kind::Identity;
    std::size_t arity = 1;
    bool value = false;    // Constant
    Vector weights;        // KofN
    std::size_t k = 0;     // KofN

    static RegionOp constant(bool value, std::size_t arity = 1);
    static RegionOp identity();
    static RegionOp complement();
    static RegionOp intersection(std::size_t n = 2);
    static RegionOp union_of(std::size_t n = 2);
    static RegionOp kofn(Vector weights, std::size_t k);
};

std::string to_string(RegionOp::Kind kind);
RegionOp::Kind region_op_kind_from_string(const std::string& name);

/// One output unit: weight row (1 x arity) and bias, applied as act(A x - b).
struct UnitParams {
    Matrix weights;
    Vector bias;
};

/// Intersection of n: all-ones row, b = n - 1/2. Union of n: all-ones row,
/// b = -(n - 1/2). Constants use a zero row and b = -100 (true) / +100
/// (false) so that the output saturates at +1 / -1.
UnitParams op_to_layer(const RegionOp& op);

/// "At least k of the inputs are members": with +-1 inputs and weights w the
/// unit computes <w,x> - (2k - sum(w) - 1), which is positive exactly when
/// the weight of the positive inputs is at least k (integer weights) or more
/// than k - 1/2 (general weights).
UnitParams kofn_layer(std::span<const double> weights, std::size_t k);

/// Asymptotic offset sigma^{-1}(beta - 1) of the zero level set of
/// sigma(x) + sigma(y) - beta from the x axis as x -> infinity.
/// DomainError unless 0 < beta < 2.
double transition_shift(double beta);

/// Asymptotic width (in y, as x -> infinity) of the band where
/// |sigma_gamma(sigma(x) + sigma(y) - beta)| <= level. Returns +infinity
/// once either bounding contour no longer has a horizontal asymptote.
double transition_width(double beta, double gamma, double level);

/// Gain gamma with sigma_gamma(2 - beta) == target.
double amplification_for_range(double beta, double target);

/// r(n, d) = sum_{i=0}^{d} C(n, i), the maximal number of cells cut out of
/// R^d by n hyperplanes.
boost::multiprecision::cpp_int count_regions(std::size_t n, std::size_t d);

/// First-layer shape primitive. Hyperplane: <a,x> + beta. Ellipsoid:
/// alpha ||A x - b||^2 + beta (alpha < 0 gives a bounded positive region).
struct Primitive {
    enum class Kind { Hyperplane, Ellipsoid };

    Kind kind = Kind::Hyperplane;
    Vector a;
    Matrix shape{1, 1};
    Vector center;
    double alpha = 0.0;
    double beta = 0.0;

    static Primitive hyperplane(Vector a, double beta);
    static Primitive ellipsoid(Matrix shape, Vector center, double alpha, double beta);
    std::size_t dim() const;
};

double primitive_eval(const Primitive& p, std::span<const double> x);

/// A network whose first layer is made of primitives followed by an
/// activation; the remaining layers form an ordinary network over the
/// primitive outputs.
struct PrimitiveNetwork {
    std::vector<Primitive> primitives;
    Activation first_activation = Activation::sigmoid(1);
    Network tail;

    std::size_t input_dim() const { return primitives.front().dim(); }
    /// Outputs of every stage: index 0 holds the primitive layer outputs,
    /// index k the outputs of tail layer k.
    std::vector<Vector> evaluate(std::span<const double> x) const;
};

}  // namespace regionlab
