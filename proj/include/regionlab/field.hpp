#pragma once

// Per-point quantities of a 2-D network sampled on a rectangular grid.
//
// Layer numbers in FieldQuantity are 1-based (layer 1 sees the input);
// unit, row and column indices are 0-based.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "regionlab/dense.hpp"
#include "regionlab/network.hpp"
#include "regionlab/presets.hpp"

namespace regionlab {

/// Nodes sit at cell centers: x_i = xmin + (i + 1/2)(xmax - xmin)/nx.
struct GridSpec {
    double xmin = -3, xmax = 3, ymin = -3, ymax = 3;
    std::size_t nx = 201, ny = 201;

    void validate() const;
    double x(std::size_t i) const { return xmin + (static_cast<double>(i) + 0.5) * dx(); }
    double y(std::size_t j) const { return ymin + (static_cast<double>(j) + 0.5) * dy(); }
    double dx() const { return (xmax - xmin) / static_cast<double>(nx); }
    double dy() const { return (ymax - ymin) / static_cast<double>(ny); }
    std::size_t size() const { return nx * ny; }
    double area() const { return (xmax - xmin) * (ymax - ymin); }

    static GridSpec square(double half_extent, std::size_t n);
    bool operator==(const GridSpec&) const = default;
};

struct FieldQuantity {
    enum class Kind {
        LayerOutput,      // [x_k]_unit
        PreActivation,    // [v_k]_unit
        Mask,             // act'_k([v_k]_unit)
        AdjointY,         // |[y_k]_unit|
        AdjointZ,         // |[z_k]_unit|, k >= 2
        GradA,            // |df/d[A_k]_{row,col}|
        GradB,            // |df/d[b_k]_row|
        MaxGradA,         // max over entries of |df/dA_k|
        Loss,             // cross-entropy for the node's class
        Posterior,        // [x_n]_cls
        RegionIndicator,  // 1 where the node is assigned to cls, else 0
    };

    Kind kind = Kind::LayerOutput;
    std::size_t layer = 1;
    std::size_t unit = 0;  // unit / row index
    std::size_t col = 0;   // GradA column
    std::size_t cls = 0;   // Posterior / RegionIndicator class
    /// RegionIndicator: threshold rule p(cls|x) >= tau when set, argmax rule otherwise.
    std::optional<double> tau;

    static FieldQuantity layer_output(std::size_t k, std::size_t unit);
    static FieldQuantity pre_activation(std::size_t k, std::size_t unit);
    static FieldQuantity mask(std::size_t k, std::size_t unit);
    static FieldQuantity adjoint_y(std::size_t k, std::size_t unit);
    static FieldQuantity adjoint_z(std::size_t k, std::size_t unit);
    static FieldQuantity grad_a(std::size_t k, std::size_t row, std::size_t col);
    static FieldQuantity grad_b(std::size_t k, std::size_t row);
    static FieldQuantity max_grad_a(std::size_t k);
    static FieldQuantity loss();
    static FieldQuantity posterior(std::size_t cls);
    static FieldQuantity region_indicator(std::size_t cls, std::optional<double> tau = {});

    /// Whether evaluation needs a backward pass and hence a class per node.
    bool needs_class() const;
    /// Throws ContractError if the indices do not fit net.
    void validate(const Network& net) const;
    /// Compact name such as "grad_a_1_0_1", used for file names.
    std::string name() const;
    bool operator==(const FieldQuantity&) const = default;
};

/// Parses "layer_output(2,1)", "max_grad_a(1)", "loss", "region(0,0.5)" ...
FieldQuantity parse_field_quantity(const std::string& text);

struct FieldMap {
    GridSpec spec;
    FieldQuantity quantity;
    Vector values;  // row-major with y outer: values[j * nx + i]

    double at(std::size_t i, std::size_t j) const { return values[j * spec.nx + i]; }
};

/// Evaluates q at every grid node. labels supplies the class of each node
/// for backward-pass quantities and is required for those.
FieldMap eval_field(const Network& net, const GridSpec& spec, const FieldQuantity& q,
                    const Labeling* labels = nullptr);
/// Single-threaded reference used to check the parallel kernel.
FieldMap eval_field_serial(const Network& net, const GridSpec& spec, const FieldQuantity& q,
                           const Labeling* labels = nullptr);

/// Samples an arbitrary thread-safe scalar function of (x, y).
FieldMap sample_function(const GridSpec& spec, const std::function<double(double, double)>& f,
                         const FieldQuantity& tag = {});

/// Fraction of nodes whose value exceeds threshold (threshold >= 0).
double fraction_above(const FieldMap& map, double threshold);

}  // namespace regionlab
