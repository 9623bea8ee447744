#include "regionlab/regions.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "regionlab/error.hpp"

namespace regionlab {

namespace {

constexpr double kConstantBias = 100.0;

}  // namespace

RegionOp RegionOp::constant(bool value, std::size_t arity) {
    require(arity >= 1, "RegionOp: constant arity must be at least 1");
    RegionOp op;
    op.kind = Kind::Constant;
    op.value = value;
    op.arity = arity;
    return op;
}

RegionOp RegionOp::identity() { return {}; }

RegionOp RegionOp::complement() {
    RegionOp op;
    op.kind = Kind::Complement;
    return op;
}

RegionOp RegionOp::intersection(std::size_t n) {
    require(n >= 2, "RegionOp: intersection needs at least 2 inputs");
    RegionOp op;
    op.kind = Kind::Intersection;
    op.arity = n;
    return op;
}

RegionOp RegionOp::union_of(std::size_t n) {
    require(n >= 2, "RegionOp: union needs at least 2 inputs");
    RegionOp op;
    op.kind = Kind::Union;
    op.arity = n;
    return op;
}

RegionOp RegionOp::kofn(Vector weights, std::size_t k) {
    RegionOp op;
    op.kind = Kind::KofN;
    op.arity = weights.size();
    op.weights = std::move(weights);
    op.k = k;
    kofn_layer(op.weights, k);  // validates
    return op;
}

std::string to_string(RegionOp::Kind kind) {
    switch (kind) {
        case RegionOp::Kind::Constant: return "constant";
        case RegionOp::Kind::Identity: return "identity";
        case RegionOp::Kind::Complement: return "complement";
        case RegionOp::Kind::Intersection: return "intersection";
        case RegionOp::Kind::Union: return "union";
        case RegionOp::Kind::KofN: return "kofn";
    }
    return "?";
}

RegionOp::Kind region_op_kind_from_string(const std::string& name) {
    for (auto k : {RegionOp::Kind::Constant, RegionOp::Kind::Identity, RegionOp::Kind::Complement,
                   RegionOp::Kind::Intersection, RegionOp::Kind::Union, RegionOp::Kind::KofN})
        if (to_string(k) == name) return k;
    throw ContractError("unknown region operation '" + name + "'");
}

UnitParams op_to_layer(const RegionOp& op) {
    const double n = static_cast<double>(op.arity);
    switch (op.kind) {
        case RegionOp::Kind::Constant:
            return {Matrix(1, op.arity, 0.0), Vector{op.value ? -kConstantBias : kConstantBias}};
        case RegionOp::Kind::Identity: return {Matrix{{1.0}}, Vector{0.0}};
        case RegionOp::Kind::Complement: return {Matrix{{-1.0}}, Vector{0.0}};
        case RegionOp::Kind::Intersection: return {Matrix(1, op.arity, 1.0), Vector{n - 0.5}};
        case RegionOp::Kind::Union: return {Matrix(1, op.arity, 1.0), Vector{-(n - 0.5)}};
        case RegionOp::Kind::KofN: return kofn_layer(op.weights, op.k);
    }
    throw ContractError("op_to_layer: unknown operation");
}

UnitParams kofn_layer(std::span<const double> weights, std::size_t k) {
    require(!weights.empty(), "kofn_layer: need at least one input");
    for (double w : weights)
        require(std::isfinite(w) && w > 0.0, "kofn_layer: weights must be strictly positive");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    require(k >= 1 && static_cast<double>(k) <= total + 0.5,
            "kofn_layer: k must lie between 1 and the total weight");
    Matrix a(1, weights.size(), Vector(weights.begin(), weights.end()));
    return {std::move(a), Vector{2.0 * static_cast<double>(k) - total - 1.0}};
}

double transition_shift(double beta) {
    if (!(beta > 0.0 && beta < 2.0))
        throw DomainError("transition_shift: beta must lie in (0, 2)");
    return sigma_inverse(1.0, beta - 1.0);
}

double transition_width(double beta, double gamma, double level) {
    require(gamma > 0.0 && std::isfinite(gamma), "transition_width: gamma must be positive");
    require(level > 0.0 && level < 1.0, "transition_width: level must lie in (0, 1)");
    // As x -> infinity the output is sigma_gamma(1 + sigma(y) - beta); the
    // +-level contours sit where sigma(y) = beta - 1 -+ sigma_gamma^{-1}(level).
    const double t = sigma_inverse(gamma, level);
    const double lower = beta - 1.0 - t;
    const double upper = beta - 1.0 + t;
    if (lower <= -1.0 || upper >= 1.0) return std::numeric_limits<double>::infinity();
    return sigma_inverse(1.0, upper) - sigma_inverse(1.0, lower);
}

double amplification_for_range(double beta, double target) {
    if (!(beta < 2.0)) throw DomainError("amplification_for_range: beta must be below 2");
    require(target > 0.0 && target < 1.0, "amplification_for_range: target must lie in (0, 1)");
    return sigma_inverse(1.0, target) / (2.0 - beta);
}

boost::multiprecision::cpp_int count_regions(std::size_t n, std::size_t d) {
    require(d >= 1, "count_regions: dimension must be at least 1");
    boost::multiprecision::cpp_int total = 0, binom = 1;
    for (std::size_t i = 0; i <= std::min(n, d); ++i) {
        total += binom;
        binom = binom * (n - i) / (i + 1);
    }
    return total;
}

Primitive Primitive::hyperplane(Vector a, double beta) {
    require(!a.empty(), "Primitive: empty normal");
    require(norm2(a) > 0.0, "Primitive: hyperplane normal must be nonzero");
    Primitive p;
    p.kind = Kind::Hyperplane;
    p.a = std::move(a);
    p.beta = beta;
    return p;
}

Primitive Primitive::ellipsoid(Matrix shape, Vector center, double alpha, double beta) {
    require(shape.rows() == center.size(), "Primitive: ellipsoid center length != rows of A");
    Primitive p;
    p.kind = Kind::Ellipsoid;
    p.shape = std::move(shape);
    p.center = std::move(center);
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

std::size_t Primitive::dim() const { return kind == Kind::Hyperplane ? a.size() : shape.cols(); }

double primitive_eval(const Primitive& p, std::span<const double> x) {
    require(x.size() == p.dim(), "primitive_eval: dimension mismatch");
    if (p.kind == Primitive::Kind::Hyperplane) return dot(p.a, x) + p.beta;
    const Vector r = matvec(p.shape, x);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += (r[i] - p.center[i]) * (r[i] - p.center[i]);
    return p.alpha * s + p.beta;
}

std::vector<Vector> PrimitiveNetwork::evaluate(std::span<const double> x) const {
    require(!primitives.empty(), "PrimitiveNetwork: no primitives");
    require(tail.depth() == 0 || tail.input_dim() == primitives.size(),
            "PrimitiveNetwork: tail input dimension != primitive count");
    std::vector<Vector> stages;
    Vector pre(primitives.size());
    for (std::size_t i = 0; i < primitives.size(); ++i) pre[i] = primitive_eval(primitives[i], x);
    stages.push_back(regionlab::apply(first_activation, pre));
    if (tail.depth() > 0) {
        const ForwardTrace t = forward(tail, stages.front());
        stages.insert(stages.end(), t.out.begin(), t.out.end());
    }
    return stages;
}

}  // namespace regionlab
