#include "regionlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "regionlab/error.hpp"

namespace regionlab {

void GridSpec::validate() const {
    require(std::isfinite(xmin) && std::isfinite(xmax) && xmax > xmin, "grid: need xmax > xmin");
    require(std::isfinite(ymin) && std::isfinite(ymax) && ymax > ymin, "grid: need ymax > ymin");
    require(nx >= 2 && ny >= 2, "grid: need at least 2 nodes per axis");
}

GridSpec GridSpec::square(double half_extent, std::size_t n) {
    return {-half_extent, half_extent, -half_extent, half_extent, n, n};
}

namespace {

using Kind = FieldQuantity::Kind;

FieldQuantity make(Kind kind, std::size_t layer = 1, std::size_t unit = 0, std::size_t col = 0) {
    FieldQuantity q;
    q.kind = kind;
    q.layer = layer;
    q.unit = unit;
    q.col = col;
    return q;
}

}  // namespace

FieldQuantity FieldQuantity::layer_output(std::size_t k, std::size_t u) { return make(Kind::LayerOutput, k, u); }
FieldQuantity FieldQuantity::pre_activation(std::size_t k, std::size_t u) { return make(Kind::PreActivation, k, u); }
FieldQuantity FieldQuantity::mask(std::size_t k, std::size_t u) { return make(Kind::Mask, k, u); }
FieldQuantity FieldQuantity::adjoint_y(std::size_t k, std::size_t u) { return make(Kind::AdjointY, k, u); }
FieldQuantity FieldQuantity::adjoint_z(std::size_t k, std::size_t u) { return make(Kind::AdjointZ, k, u); }
FieldQuantity FieldQuantity::grad_a(std::size_t k, std::size_t r, std::size_t c) { return make(Kind::GradA, k, r, c); }
FieldQuantity FieldQuantity::grad_b(std::size_t k, std::size_t r) { return make(Kind::GradB, k, r); }
FieldQuantity FieldQuantity::max_grad_a(std::size_t k) { return make(Kind::MaxGradA, k); }
FieldQuantity FieldQuantity::loss() { return make(Kind::Loss); }

FieldQuantity FieldQuantity::posterior(std::size_t cls) {
    FieldQuantity q = make(Kind::Posterior);
    q.cls = cls;
    return q;
}

FieldQuantity FieldQuantity::region_indicator(std::size_t cls, std::optional<double> tau) {
    FieldQuantity q = make(Kind::RegionIndicator);
    q.cls = cls;
    q.tau = tau;
    return q;
}

bool FieldQuantity::needs_class() const {
    switch (kind) {
        case Kind::AdjointY:
        case Kind::AdjointZ:
        case Kind::GradA:
        case Kind::GradB:
        case Kind::MaxGradA:
        case Kind::Loss: return true;
        default: return false;
    }
}

void FieldQuantity::validate(const Network& net) const {
    const std::string n = name();
    auto check_layer = [&] {
        require(layer >= 1 && layer <= net.depth(),
                n + ": layer must lie in 1.." + std::to_string(net.depth()));
    };
    auto check_unit = [&] {
        require(unit < net.layer(layer - 1).units(), n + ": unit index out of range");
    };
    switch (kind) {
        case Kind::LayerOutput:
        case Kind::PreActivation:
        case Kind::AdjointY:
        case Kind::GradB:
            check_layer();
            check_unit();
            break;
        case Kind::Mask:
            check_layer();
            check_unit();
            require(net.layer(layer - 1).activation.kind != Activation::Kind::Softmax,
                    n + ": softmax layer has no elementwise mask");
            break;
        case Kind::AdjointZ:
            check_layer();
            require(layer >= 2, n + ": z is defined from layer 2 on");
            require(unit < net.layer(layer - 1).inputs(), n + ": unit index out of range");
            break;
        case Kind::GradA:
            check_layer();
            check_unit();
            require(col < net.layer(layer - 1).inputs(), n + ": column index out of range");
            break;
        case Kind::MaxGradA: check_layer(); break;
        case Kind::Loss:
            require(net.has_loss_head(), n + ": network has no softmax/logistic output");
            break;
        case Kind::Posterior:
        case Kind::RegionIndicator:
            require(cls < net.output_dim(), n + ": class index out of range");
            break;
    }
    if (needs_class())
        require(net.has_loss_head(), n + ": backward quantities need a softmax/logistic output");
}

std::string FieldQuantity::name() const {
    const std::string k = std::to_string(layer), u = std::to_string(unit);
    switch (kind) {
        case Kind::LayerOutput: return "x_" + k + "_" + u;
        case Kind::PreActivation: return "v_" + k + "_" + u;
        case Kind::Mask: return "mask_" + k + "_" + u;
        case Kind::AdjointY: return "y_" + k + "_" + u;
        case Kind::AdjointZ: return "z_" + k + "_" + u;
        case Kind::GradA: return "grad_a_" + k + "_" + u + "_" + std::to_string(col);
        case Kind::GradB: return "grad_b_" + k + "_" + u;
        case Kind::MaxGradA: return "max_grad_a_" + k;
        case Kind::Loss: return "loss";
        case Kind::Posterior: return "posterior_" + std::to_string(cls);
        case Kind::RegionIndicator: {
            std::string s = "region_" + std::to_string(cls);
            if (tau) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "_tau%g", *tau);
                s += buf;
            }
            return s;
        }
    }
    return "field";
}

FieldQuantity parse_field_quantity(const std::string& text) {
    static const std::regex pattern(R"(\s*([a-z_]+)\s*(?:\(([^)]*)\))?\s*)");
    std::smatch m;
    require(std::regex_match(text, m, pattern), "field quantity: cannot parse '" + text + "'");
    const std::string name = m[1];
    std::vector<double> args;
    if (m[2].matched && m[2].str().find_first_not_of(" \t") != std::string::npos) {
        std::string rest = m[2];
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const std::size_t comma = rest.find(',', pos);
            const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                std::size_t used = 0;
                args.push_back(std::stod(item, &used));
                require(item.find_first_not_of(" \t", used) == std::string::npos, "");
            } catch (const std::exception&) {
                throw ContractError("field quantity: bad argument '" + item + "' in '" + text + "'");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    auto index = [&](std::size_t i) {
        const double v = args[i];
        require(v >= 0 && v == std::floor(v), "field quantity: index must be a nonnegative integer in '" + text + "'");
        return static_cast<std::size_t>(v);
    };
    auto want = [&](std::size_t n) {
        require(args.size() == n, "field quantity '" + name + "' takes " + std::to_string(n) + " argument(s)");
    };
    if (name == "layer_output") return want(2), FieldQuantity::layer_output(index(0), index(1));
    if (name == "pre_activation") return want(2), FieldQuantity::pre_activation(index(0), index(1));
    if (name == "mask") return want(2), FieldQuantity::mask(index(0), index(1));
    if (name == "adjoint_y") return want(2), FieldQuantity::adjoint_y(index(0), index(1));
    if (name == "adjoint_z") return want(2), FieldQuantity::adjoint_z(index(0), index(1));
    if (name == "grad_a") return want(3), FieldQuantity::grad_a(index(0), index(1), index(2));
    if (name == "grad_b") return want(2), FieldQuantity::grad_b(index(0), index(1));
    if (name == "max_grad_a") return want(1), FieldQuantity::max_grad_a(index(0));
    if (name == "loss") return want(0), FieldQuantity::loss();
    if (name == "posterior") return want(1), FieldQuantity::posterior(index(0));
    if (name == "region") {
        require(args.size() == 1 || args.size() == 2, "field quantity 'region' takes 1 or 2 arguments");
        return FieldQuantity::region_indicator(index(0), args.size() == 2 ? std::optional(args[1]) : std::nullopt);
    }
    throw ContractError("unknown field quantity '" + name + "'");
}

namespace {

struct NodeEvaluator {
    const Network& net;
    const FieldQuantity& q;
    const Labeling* labels;
    ForwardTrace trace;
    Vector scratch;

    double operator()(double x, double y) {
        const double point[2] = {x, y};
        forward_into(net, point, trace);
        const std::size_t k = q.layer - 1;
        switch (q.kind) {
            case Kind::LayerOutput: return trace.out[k][q.unit];
            case Kind::PreActivation: return trace.pre[k][q.unit];
            case Kind::Mask: {
                scratch.resize(trace.pre[k].size());
                derivative_into(net.layer(k).activation, trace.pre[k], scratch);
                return scratch[q.unit];
            }
            case Kind::Posterior: return trace.out.back()[q.cls];
            case Kind::RegionIndicator: {
                const Vector& p = trace.out.back();
                if (q.tau) return p[q.cls] >= *q.tau ? 1.0 : 0.0;
                if (p.size() == 1) return p[0] >= 0.5 ? 1.0 : 0.0;
                const auto best = std::max_element(p.begin(), p.end()) - p.begin();
                return static_cast<std::size_t>(best) == q.cls ? 1.0 : 0.0;
            }
            default: break;
        }
        const std::size_t c = (*labels)(x, y);
        if (q.kind == Kind::Loss) return loss_from_trace(net, trace, c);
        const auto [bt, grad] = backward(net, trace, c);
        switch (q.kind) {
            case Kind::AdjointY: return std::abs(bt.y[k][q.unit]);
            case Kind::AdjointZ: return std::abs(bt.z[k][q.unit]);
            case Kind::GradA: return std::abs(grad.weights[k](q.unit, q.col));
            case Kind::GradB: return std::abs(grad.bias[k][q.unit]);
            case Kind::MaxGradA: return norm_inf(bt.y[k]) * norm_inf(trace.layer_input(k));
            default: break;
        }
        throw ContractError("eval_field: unhandled quantity");
    }
};

FieldMap prepare(const Network& net, const GridSpec& spec, const FieldQuantity& q,
                 const Labeling* labels) {
    spec.validate();
    require(net.input_dim() == 2, "eval_field: network input must be 2-D");
    q.validate(net);
    if (q.needs_class()) require(labels != nullptr, "eval_field: " + q.name() + " needs a class labeling");
    return {spec, q, Vector(spec.size())};
}

}  // namespace

FieldMap eval_field(const Network& net, const GridSpec& spec, const FieldQuantity& q,
                    const Labeling* labels) {
    FieldMap map = prepare(net, spec, q, labels);
    const long long rows = static_cast<long long>(spec.ny);
#pragma omp parallel
    {
        NodeEvaluator eval{net, q, labels, {}, {}};
#pragma omp for schedule(static)
        for (long long j = 0; j < rows; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            for (std::size_t i = 0; i < spec.nx; ++i)
                map.values[jj * spec.nx + i] = eval(spec.x(i), spec.y(jj));
        }
    }
    return map;
}

FieldMap eval_field_serial(const Network& net, const GridSpec& spec, const FieldQuantity& q,
                           const Labeling* labels) {
    FieldMap map = prepare(net, spec, q, labels);
    NodeEvaluator eval{net, q, labels, {}, {}};
    for (std::size_t j = 0; j < spec.ny; ++j)
        for (std::size_t i = 0; i < spec.nx; ++i) map.values[j * spec.nx + i] = eval(spec.x(i), spec.y(j));
    return map;
}

FieldMap sample_function(const GridSpec& spec, const std::function<double(double, double)>& f,
                         const FieldQuantity& tag) {
    spec.validate();
    FieldMap map{spec, tag, Vector(spec.size())};
    const long long rows = static_cast<long long>(spec.ny);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < rows; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        for (std::size_t i = 0; i < spec.nx; ++i) map.values[jj * spec.nx + i] = f(spec.x(i), spec.y(jj));
    }
    return map;
}

double fraction_above(const FieldMap& map, double threshold) {
    require(threshold >= 0.0, "fraction_above: threshold must be nonnegative");
    require(!map.values.empty(), "fraction_above: empty field");
    const auto n = std::count_if(map.values.begin(), map.values.end(),
                                 [&](double v) { return v > threshold; });
    return static_cast<double>(n) / static_cast<double>(map.values.size());
}

}  // namespace regionlab
