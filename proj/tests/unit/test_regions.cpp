#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "regionlab/error.hpp"
#include "regionlab/regions.hpp"
#include "regionlab/rng.hpp"

using namespace regionlab;

namespace {

double unit_out(const UnitParams& u, const Vector& x, const Activation& act) {
    return regionlab::apply(act, Vector{matvec(u.weights, x)[0] - u.bias[0]})[0];
}

Network two_level(double beta, double gamma = 1.0) {
    std::vector<Layer> layers;
    layers.push_back({Matrix::identity(2), Vector{0, 0}, Activation::sigmoid(1)});
    layers.push_back({Matrix{{gamma, gamma}}, Vector{gamma * beta}, Activation::sigmoid(1)});
    return Network(2, std::move(layers));
}

double two_level_out(const Network& net, double x, double y) {
    return forward(net, Vector{x, y}).out.back()[0];
}

}  // namespace

TEST_CASE("printed operator parameters") {
    const auto u = op_to_layer(RegionOp::union_of());
    CHECK(u.weights == Matrix{{1, 1}});
    CHECK(u.bias == Vector{-1.5});
    const auto i = op_to_layer(RegionOp::intersection());
    CHECK(i.weights == Matrix{{1, 1}});
    CHECK(i.bias == Vector{1.5});
    CHECK(op_to_layer(RegionOp::identity()).weights == Matrix{{1}});
    CHECK(op_to_layer(RegionOp::complement()).weights == Matrix{{-1}});
    CHECK(op_to_layer(RegionOp::complement()).bias == Vector{0});
    CHECK(unit_out(i, Vector{1, -1}, Activation::sigmoid(3)) < 0.0);
}

TEST_CASE("constants saturate to true and false") {
    const auto t = op_to_layer(RegionOp::constant(true, 2));
    const auto f = op_to_layer(RegionOp::constant(false, 2));
    CHECK(t.bias == Vector{-100});
    CHECK(f.bias == Vector{100});
    for (unsigned p = 0; p < 4; ++p) {
        const Vector x = oracle::pm_inputs(p, 2);
        CHECK(unit_out(t, x, Activation::sigmoid(3)) > 0.999999);
        CHECK(unit_out(f, x, Activation::sigmoid(3)) < -0.999999);
    }
}

TEST_CASE("kofn threshold values") {
    CHECK(kofn_layer(Vector(4, 1.0), 1).bias == Vector{-3});
    CHECK(kofn_layer(Vector(4, 1.0), 4).bias == Vector{3});
    CHECK_THROWS_AS(kofn_layer(Vector(3, 1.0), 0), ContractError);
    CHECK_THROWS_AS(kofn_layer(Vector(3, 1.0), 4), ContractError);
    CHECK_THROWS_AS(kofn_layer(Vector{1.0, -1.0}, 1), ContractError);
}

TEST_CASE("n-ary operators match exhaustive truth tables") {
    for (unsigned n = 2; n <= 6; ++n)
        for (unsigned p = 0; p < (1u << n); ++p) {
            const Vector x = oracle::pm_inputs(p, n);
            const unsigned positives = __builtin_popcount(p);
            for (const auto& act : {Activation::step(), Activation::sigmoid(3)}) {
                CHECK((unit_out(op_to_layer(RegionOp::intersection(n)), x, act) > 0) ==
                      (positives == n));
                CHECK((unit_out(op_to_layer(RegionOp::union_of(n)), x, act) > 0) == (positives >= 1));
                for (unsigned k = 1; k <= n; ++k)
                    CHECK((unit_out(kofn_layer(Vector(n, 1.0), k), x, act) > 0) == (positives >= k));
            }
        }
    for (double v : {-1.0, 1.0}) {
        CHECK((unit_out(op_to_layer(RegionOp::identity()), Vector{v}, Activation::step()) > 0) == (v > 0));
        CHECK((unit_out(op_to_layer(RegionOp::complement()), Vector{v}, Activation::step()) > 0) == (v < 0));
    }
}

TEST_CASE("weighted kofn counts integer weights") {
    const Vector w{2, 1, 1, 3};
    for (unsigned p = 0; p < 16; ++p) {
        const Vector x = oracle::pm_inputs(p, 4);
        double mass = 0;
        for (unsigned i = 0; i < 4; ++i) mass += x[i] > 0 ? w[i] : 0;
        for (std::size_t k = 1; k <= 7; ++k)
            CHECK((unit_out(kofn_layer(w, k), x, Activation::step()) > 0) == (mass >= k));
    }
}

TEST_CASE("union agrees with complement-intersect-complement") {
    const auto c = op_to_layer(RegionOp::complement());
    const auto i = op_to_layer(RegionOp::intersection());
    const auto u = op_to_layer(RegionOp::union_of());
    for (const auto& act : {Activation::step(), Activation::sigmoid(3)})
        for (unsigned p = 0; p < 4; ++p) {
            const Vector x = oracle::pm_inputs(p, 2);
            const Vector comps{unit_out(c, Vector{x[0]}, act), unit_out(c, Vector{x[1]}, act)};
            const double composed = unit_out(c, Vector{unit_out(i, comps, act)}, act);
            CHECK((composed > 0) == (unit_out(u, x, act) > 0));
        }
}

TEST_CASE("transition shift") {
    CHECK(transition_shift(1.0) == 0.0);
    CHECK(transition_shift(1.8) == doctest::Approx(2.1972).epsilon(1e-4));
    for (double d = 0.05; d < 1.0; d += 0.05)
        CHECK(std::abs(transition_shift(1 + d) + transition_shift(1 - d)) <= 1e-12);
    CHECK_THROWS_AS(transition_shift(0.0), DomainError);
    CHECK_THROWS_AS(transition_shift(2.5), DomainError);
    for (double beta : {0.6, 1.0, 1.8}) {
        const Network net = two_level(beta);
        const double y = oracle::bisect([&](double t) { return two_level_out(net, 30.0, t); }, -40, 40);
        CHECK(std::abs(y - transition_shift(beta)) < 1e-6);
    }
}

TEST_CASE("transition width") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(std::isfinite(transition_width(1.0, amplification_for_range(1.0, 0.995), 0.95)));
    for (double beta : {0.8, 1.0, 1.3}) {
        double previous = inf;
        for (double g = 1.0; g <= 40.0; g += 0.5) {
            const double w = transition_width(beta, g, 0.95);
            CHECK(w <= previous);
            if (std::isfinite(previous)) CHECK(w < previous);
            previous = w;
        }
        CHECK(std::isfinite(previous));
    }
    // Lower contour loses its asymptote once beta <= sigma_gamma^{-1}(0.95).
    const double g = 8.0;
    const double critical = sigma_inverse(g, 0.95);
    CHECK(transition_width(critical - 1e-3, g, 0.95) == inf);
    CHECK(std::isfinite(transition_width(critical + 1e-3, g, 0.95)));
    // Contours located numerically on the far column x = 50.
    for (double beta : {0.9, 1.0, 1.2}) {
        const Network net = two_level(beta, g);
        auto level = [&](double target) {
            return oracle::bisect([&](double t) { return two_level_out(net, 50.0, t) - target; }, -60, 60);
        };
        CHECK(std::abs((level(0.95) - level(-0.95)) - transition_width(beta, g, 0.95)) < 1e-6);
    }
}

TEST_CASE("amplification for a target range") {
    CHECK(amplification_for_range(0.0, 0.995) == doctest::Approx(sigma_inverse(1, 0.995) / 2));
    double previous = 0.0;
    for (double beta = -1.0; beta < 1.99; beta += 0.01) {
        const double g = amplification_for_range(beta, 0.995);
        CHECK(g > previous);
        previous = g;
        CHECK(std::abs(sigma(1, g * (2 - beta)) - 0.995) <= 1e-12);
    }
    CHECK_THROWS_AS(amplification_for_range(2.0, 0.995), DomainError);
}

TEST_CASE("region count formula") {
    CHECK(count_regions(0, 3) == 1);
    CHECK(count_regions(3, 2) == 7);
    for (std::size_t n = 0; n < 30; ++n) CHECK(count_regions(n, 1) == n + 1);
    CHECK(count_regions(20, 5) == 21700);
    CHECK(count_regions(100, 100) == boost::multiprecision::cpp_int(1) << 100);
    CHECK_THROWS_AS(count_regions(3, 0), ContractError);
}

TEST_CASE("region count matches cell enumeration of random lines") {
    Rng rng(99);
    for (std::size_t n = 1; n <= 6; ++n)
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<oracle::Line> lines;
            for (std::size_t i = 0; i < n; ++i) lines.push_back({rng.gauss(), rng.gauss(), rng.gauss()});
            CHECK(oracle::count_cells(lines) == count_regions(n, 2));
        }
}

TEST_CASE("primitives") {
    const auto h = Primitive::hyperplane(Vector{1.0, -2.0}, 0.7);
    CHECK(primitive_eval(h, Vector{0, 0}) == 0.7);
    CHECK(primitive_eval(h, Vector{1, 1}) == doctest::Approx(-0.3));
    const Matrix a{{2, 0}, {1, 1}};
    const Vector x{0.5, -0.25};
    const auto e = Primitive::ellipsoid(a, matvec(a, x), -1.0, 0.4);
    CHECK(primitive_eval(e, x) == 0.4);
    CHECK_THROWS_AS(primitive_eval(h, Vector{1, 2, 3}), ContractError);
    CHECK_THROWS_AS(Primitive::hyperplane(Vector{0, 0}, 1), ContractError);

    // Halfspace x >= 0 minus a disk of radius 1 around (1, 0).
    PrimitiveNetwork pn;
    pn.primitives = {Primitive::hyperplane(Vector{4, 0}, 0),
                     Primitive::ellipsoid(Matrix::identity(2), Vector{1, 0}, -4, 4)};
    pn.first_activation = Activation::sigmoid(3);
    std::vector<Layer> tail;
    tail.push_back({Matrix{{1, -1}}, Vector{1.5}, Activation::sigmoid(3)});
    pn.tail = Network(2, std::move(tail));
    auto region = [&](double px, double py) { return pn.evaluate(Vector{px, py}).back()[0]; };
    CHECK(region(1.0, 2.0) > 0);   // in halfspace, outside disk
    CHECK(region(1.0, 0.0) < 0);   // inside disk
    CHECK(region(-1.5, 0.0) < 0);  // outside halfspace
}
