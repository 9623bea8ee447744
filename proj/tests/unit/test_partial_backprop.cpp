#include <doctest.h>

#include <cmath>
#include <limits>

#include "random_nets.hpp"
#include "regionlab/error.hpp"
#include "regionlab/partial_backprop.hpp"
#include "regionlab/presets.hpp"

using namespace regionlab;

namespace {

using Variant = CutoffPolicy::LInfVariant;

Network identity_pair(double gamma) {
    std::vector<Layer> layers;
    layers.push_back({Matrix::identity(2), Vector{0, 0}, Activation::sigmoid(gamma)});
    layers.push_back({Matrix::identity(2), Vector{0, 0}, Activation::softmax()});
    return Network(2, std::move(layers));
}

CutoffPolicy fig_policy(CutoffPolicy::Norm norm) {
    CutoffPolicy p;
    p.weight_thresholds = {{1, 0.05}, {2, 0.05}};
    p.norm = norm;
    return p;
}

}  // namespace

TEST_CASE("l2 bound on an identity layer") {
    const Network net = identity_pair(1.0);
    const ForwardTrace t = forward(net, Vector{0.0, 2.0});
    CHECK(bound_y_l2(net, t, 1, 3.0) == doctest::Approx(0.5 * 3.0 * AdjointBounds::kSpectralInflation));
    CHECK(bound_y_linf(net, t, 1, 3.0, Variant::Tight) ==
          doctest::Approx(bound_y_linf(net, t, 1, 3.0, Variant::Loose)));
    CHECK(bound_y_linf(net, t, 1, 3.0, Variant::Tight, true) ==
          doctest::Approx(bound_y_linf(net, t, 1, 3.0, Variant::Tight, false)));
    CHECK_THROWS_AS(bound_y_l2(net, t, 0, 1.0), ContractError);
    CHECK_THROWS_AS(bound_y_l2(net, t, 2, 1.0), ContractError);
}

TEST_CASE("saturated units kill the bound") {
    std::vector<Layer> layers;
    layers.push_back({Matrix{{1, 0}, {0, 1}, {1, 1}}, Vector{-21, 21, -50}, Activation::sigmoid(3)});
    layers.push_back({Matrix{{1, -2, 0.5}, {0.3, 1, 1}}, Vector{0, 0}, Activation::softmax()});
    const Network net(2, std::move(layers));
    const ForwardTrace t = forward(net, Vector{0.0, 0.0});
    CHECK(bound_y_l2(net, t, 1, 1.0) < 1e-10);
    CHECK(bound_y_linf(net, t, 1, 1.0, Variant::Loose) < 1e-10);
}

TEST_CASE("bounds dominate exact adjoint norms") {
    Rng rng(2024);
    int instances = 0;
    while (instances < 1000) {
        const Network net = testgen::random_network(rng);
        const AdjointBounds bounds(net);
        for (int s = 0; s < 5; ++s, ++instances) {
            const Vector x = gauss(rng, net.input_dim());
            const ForwardTrace t = forward(net, x);
            const auto [bt, grad] = backward(net, t, rng.next_u64() % net.class_count());
            for (std::size_t k = net.depth() - 1; k >= 1; --k) {
                const double yk = norm2(bt.y[k]);
                CHECK(bounds.l2(t, k, yk) >= norm2(bt.y[k - 1]));
                const double tight = bounds.linf(t, k, yk, Variant::Tight);
                const double loose = bounds.linf(t, k, yk, Variant::Loose);
                CHECK(tight >= norm_inf(bt.y[k - 1]));
                CHECK(tight <= loose);
            }
        }
    }
}

TEST_CASE("chained l2 bound dominates deeper adjoints") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Network net = testgen::random_network(rng);
        const AdjointBounds bounds(net);
        const ForwardTrace t = forward(net, gauss(rng, net.input_dim()));
        const auto [bt, grad] = backward(net, t, 0);
        double b = norm2(bt.y.back());
        for (std::size_t k = net.depth() - 1; k >= 1; --k) {
            b = bounds.l2(t, k, b);
            CHECK(b >= norm2(bt.y[k - 1]));
        }
    }
}

TEST_CASE("tight row variant needs a square matrix") {
    const Network net = presets::nn_example_2d();
    const ForwardTrace t = forward(net, Vector{0.3, 0.1});
    CHECK_THROWS_AS(bound_y_linf(net, t, 2, 1.0, Variant::Tight, true), ContractError);
    CHECK_NOTHROW(bound_y_linf(net, t, 2, 1.0, Variant::Loose, true));
}

TEST_CASE("infinite thresholds stop after the output layer") {
    Rng rng(11);
    const double inf = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 50; ++trial) {
        const Network net = testgen::random_network(rng);
        const ForwardTrace t = forward(net, gauss(rng, net.input_dim()));
        for (auto norm : {CutoffPolicy::Norm::L2, CutoffPolicy::Norm::LInf}) {
            const CutoffResult r = backward_with_cutoff(net, t, 0, CutoffPolicy::uniform(net.depth(), inf, norm));
            CHECK(r.reached_layer == net.depth());
            const auto [bt, grad] = backward(net, t, 0);
            CHECK(r.gradient.weights.back() == grad.weights.back());
            CHECK(r.gradient.bias.back() == grad.bias.back());
            for (std::size_t k = 0; k + 1 < net.depth(); ++k) CHECK(frobenius_norm(r.gradient.weights[k]) == 0.0);
        }
    }
}

TEST_CASE("zero thresholds give the full gradient") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const Network net = testgen::random_network(rng);
        const ForwardTrace t = forward(net, gauss(rng, net.input_dim()));
        const std::size_t c = rng.next_u64() % net.class_count();
        const CutoffResult r = backward_with_cutoff(net, t, c, CutoffPolicy::uniform(net.depth(), 0.0));
        CHECK(r.reached_layer == 1);
        CHECK(r.gradient == backward(net, t, c).second);
    }
}

TEST_CASE("computed blocks are bit-identical to full backward") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const Network net = testgen::random_network(rng);
        const ForwardTrace t = forward(net, gauss(rng, net.input_dim()));
        const std::size_t c = rng.next_u64() % net.class_count();
        CutoffPolicy p = CutoffPolicy::uniform(net.depth(), std::exp(rng.uniform(-8, 1)),
                                               rng.uniform() < 0.5 ? CutoffPolicy::Norm::L2
                                                                   : CutoffPolicy::Norm::LInf);
        if (rng.uniform() < 0.5) p.linf_variant = Variant::Loose;
        if (rng.uniform() < 0.3) p.bias_thresholds[1] = 1e-3;
        const CutoffResult r = backward_with_cutoff(net, t, c, p);
        const GradientSet full = backward(net, t, c).second;
        for (std::size_t k = 0; k < net.depth(); ++k) {
            if (k + 1 >= r.reached_layer) {
                CHECK(r.gradient.weights[k] == full.weights[k]);
                CHECK(r.gradient.bias[k] == full.bias[k]);
            } else {
                CHECK(frobenius_norm(r.gradient.weights[k]) == 0.0);
                CHECK(norm2(r.gradient.bias[k]) == 0.0);
            }
        }
    }
}

TEST_CASE("skipped layers really are below threshold") {
    Rng rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        const Network net = testgen::random_network(rng);
        const ForwardTrace t = forward(net, gauss(rng, net.input_dim()));
        const double thr = std::exp(rng.uniform(-6, 0));
        for (auto norm : {CutoffPolicy::Norm::L2, CutoffPolicy::Norm::LInf}) {
            const CutoffResult r = backward_with_cutoff(net, t, 0, CutoffPolicy::uniform(net.depth(), thr, norm));
            const GradientSet full = backward(net, t, 0).second;
            for (std::size_t k = 0; k + 1 < r.reached_layer; ++k) {
                const double size = norm == CutoffPolicy::Norm::L2 ? frobenius_norm(full.weights[k])
                                                                   : norm_inf(full.weights[k].data());
                CHECK(size < thr);
            }
        }
    }
}

TEST_CASE("reach fractions are nested and monotone in the threshold") {
    const Network net = presets::nn_example_2d();
    const GridSpec grid = GridSpec::square(3.0, 41);
    const Labeling truth = Labeling::xor_quadrants();
    for (auto norm : {CutoffPolicy::Norm::L2, CutoffPolicy::Norm::LInf}) {
        std::vector<double> previous(3, 1.0);
        for (double thr : {1e-4, 1e-3, 1e-2, 0.05, 0.2, 1.0, 5.0}) {
            const ReachStatistics s = reach_statistics(net, grid, truth, CutoffPolicy::uniform(3, thr, norm));
            CHECK(s.fractions[2] == 1.0);
            CHECK(s.fractions[1] <= s.fractions[2]);
            CHECK(s.fractions[0] <= s.fractions[1]);
            for (std::size_t k = 0; k < 3; ++k) CHECK(s.fractions[k] <= previous[k]);
            previous = s.fractions;
        }
    }
}

TEST_CASE("parallel reach matches serial") {
    const Network net = presets::nn_example_2d(2.0);
    const GridSpec grid = GridSpec::square(3.0, 37);
    const Labeling truth = Labeling::xor_quadrants();
    const CutoffPolicy p = fig_policy(CutoffPolicy::Norm::LInf);
    const ReachStatistics a = reach_statistics(net, grid, truth, p);
    const ReachStatistics b = reach_statistics_serial(net, grid, truth, p);
    CHECK(a.fractions == b.fractions);
    CHECK(a.reached.values == b.reached.values);
}

TEST_CASE("sharper networks backpropagate over less of the plane") {
    const GridSpec grid = GridSpec::square(3.0, 61);
    const Labeling truth = Labeling::xor_quadrants();
    for (auto norm : {CutoffPolicy::Norm::L2, CutoffPolicy::Norm::LInf}) {
        std::vector<double> previous(3, 2.0);
        for (double g : {1.0, 2.0, 3.0}) {
            const auto s = reach_statistics(presets::nn_example_2d(g), grid, truth, fig_policy(norm));
            CHECK(s.fractions[1] < previous[1]);
            CHECK(s.fractions[0] < previous[0]);
            previous = s.fractions;
        }
    }
}

TEST_CASE("policy validation and names") {
    CutoffPolicy p;
    p.weight_thresholds[1] = -1.0;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p.weight_thresholds = {{0, 1.0}};
    CHECK_THROWS_AS(p.validate(), ContractError);
    p.weight_thresholds = {{1, std::nan("")}};
    CHECK_THROWS_AS(p.validate(), ContractError);
    CHECK(norm_from_string(to_string(CutoffPolicy::Norm::LInf)) == CutoffPolicy::Norm::LInf);
    CHECK(linf_variant_from_string("loose") == Variant::Loose);
    CHECK_THROWS_AS(norm_from_string("l1"), ContractError);
    CHECK(CutoffPolicy{}.weight_threshold(3) == 0.0);
    CHECK(std::isinf(CutoffPolicy{}.bias_threshold(3)));
}
