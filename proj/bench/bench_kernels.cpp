// Serial reference vs OpenMP kernel for the three hot loops. Set
// OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include "regionlab/field.hpp"
#include "regionlab/partial_backprop.hpp"
#include "regionlab/presets.hpp"
#include "regionlab/trainer.hpp"

using namespace regionlab;

namespace {

const Network& net() {
    static const Network n = presets::nn_example_2d(2.0);
    return n;
}

GridSpec grid(benchmark::State& state) { return GridSpec::square(3.0, static_cast<std::size_t>(state.range(0))); }

template <bool Parallel>
void eval_field_bench(benchmark::State& state) {
    const GridSpec g = grid(state);
    const Labeling truth = Labeling::xor_quadrants();
    const auto q = FieldQuantity::max_grad_a(1);
    for (auto _ : state) {
        auto m = Parallel ? eval_field(net(), g, q, &truth) : eval_field_serial(net(), g, q, &truth);
        benchmark::DoNotOptimize(m.values.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

template <bool Parallel>
void batch_gradient_bench(benchmark::State& state) {
    const Network n = presets::single_hyperplane(1.0, 0.2, 0.5);
    const auto samples = make_simple_domain(static_cast<std::size_t>(state.range(0)), 6.0, 1);
    for (auto _ : state) {
        auto g = Parallel ? batch_gradient(n, samples) : batch_gradient_serial(n, samples);
        benchmark::DoNotOptimize(g.loss);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void reach_bench(benchmark::State& state) {
    const GridSpec g = grid(state);
    const Labeling truth = Labeling::xor_quadrants();
    CutoffPolicy policy;
    policy.weight_thresholds = {{1, 0.05}, {2, 0.05}};
    for (auto _ : state) {
        auto r = Parallel ? reach_statistics(net(), g, truth, policy) : reach_statistics_serial(net(), g, truth, policy);
        benchmark::DoNotOptimize(r.fractions.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

}  // namespace

BENCHMARK(eval_field_bench<false>)->Name("eval_field/serial")->Arg(101)->Arg(201);
BENCHMARK(eval_field_bench<true>)->Name("eval_field/omp")->Arg(101)->Arg(201);
BENCHMARK(batch_gradient_bench<false>)->Name("batch_gradient/serial")->Arg(800)->Arg(3200);
BENCHMARK(batch_gradient_bench<true>)->Name("batch_gradient/omp")->Arg(800)->Arg(3200);
BENCHMARK(reach_bench<false>)->Name("reach_statistics/serial")->Arg(101)->Arg(201);
BENCHMARK(reach_bench<true>)->Name("reach_statistics/omp")->Arg(101)->Arg(201);

BENCHMARK_MAIN();
