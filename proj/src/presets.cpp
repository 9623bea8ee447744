#include "regionlab/presets.hpp"

namespace regionlab {

Labeling Labeling::vertical(double split, std::size_t left, std::size_t right) {
    Labeling l;
    l.classify = [=](double x, double) { return x < split ? left : right; };
    l.vertical_split = split;
    l.left_class = left;
    l.right_class = right;
    return l;
}

Labeling Labeling::constant(std::size_t c) {
    Labeling l;
    l.classify = [c](double, double) { return c; };
    return l;
}

Labeling Labeling::xor_quadrants() {
    Labeling l;
    l.classify = [](double x, double y) -> std::size_t { return x * y < 0.0 ? 0 : 1; };
    return l;
}

namespace presets {

Network nn_example_2d(double scale) {
    std::vector<Layer> layers;
    layers.push_back({Matrix{{1.0, 0.3}, {0.4, -1.0}}, Vector{-1.0, 0.5}, Activation::sigmoid(3)});
    layers.push_back({Matrix{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}, Vector{1, 1, 1, 1},
                      Activation::sigmoid(3)});
    layers.push_back({Matrix{{1, 0, 1, 0}, {0, 1, 0, 1}}, Vector{-1.1, -1.1}, Activation::softmax()});
    Network net(2, std::move(layers));
    return scale == 1.0 ? net : scaled(net, scale);
}

Network motivational_1d(double alpha, double beta, double gain) {
    std::vector<Layer> layers;
    layers.push_back({Matrix{{alpha}}, Vector{beta}, Activation::sigmoid(1)});
    layers.push_back({Matrix{{1.0}}, Vector{0.0}, Activation::logistic(gain)});
    return Network(1, std::move(layers));
}

Network single_hyperplane(double a1, double a2, double b, double head) {
    std::vector<Layer> layers;
    layers.push_back({Matrix{{a1, a2}}, Vector{b}, Activation::sigmoid(1)});
    layers.push_back({Matrix{{-head}, {head}}, Vector{0.0, 0.0}, Activation::softmax()});
    return Network(2, std::move(layers));
}

}  // namespace presets
}  // namespace regionlab
