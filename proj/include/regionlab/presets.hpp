#pragma once

// Reference networks and ground-truth labelings used by the experiments,
// the command line and the tests.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "regionlab/network.hpp"

namespace regionlab {

/// Ground-truth class of a 2-D feature point. When vertical_split is set the
/// labeling is "class left_class for x < split, right_class otherwise",
/// which enables exact area computations.
struct Labeling {
    std::function<std::size_t(double x, double y)> classify;
    std::optional<double> vertical_split;
    std::size_t left_class = 0;
    std::size_t right_class = 1;

    std::size_t operator()(double x, double y) const { return classify(x, y); }

    static Labeling vertical(double split = 0.0, std::size_t left = 0, std::size_t right = 1);
    /// Every point gets class c.
    static Labeling constant(std::size_t c);
    /// Quadrant XOR: class 0 where x*y < 0, class 1 where x*y > 0.
    static Labeling xor_quadrants();
};

namespace presets {

/// Three-layer 2-D example network: two halfspaces (sigma_3), four
/// intersections of (complemented) halfspaces (sigma_3) and a two-class
/// softmax head pairing opposite quadrants.
Network nn_example_2d(double scale = 1.0);

/// One-dimensional network p(x) = l_g(sigma(alpha x - beta)): hidden sigmoid
/// unit, identity weight into a single logistic output unit of gain g.
Network motivational_1d(double alpha = 1.0, double beta = 0.0, double gain = 5.0);

/// Single hidden unit with weight row a and offset b (sigma_1) followed by a
/// fixed two-class softmax head [-3; 3] (class 1 on the positive side).
Network single_hyperplane(double a1, double a2, double b, double head = 3.0);

}  // namespace presets
}  // namespace regionlab
