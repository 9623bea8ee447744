// Acceptance run: one PASS/FAIL line per criterion, with the measured
// numbers underneath. Exit status is 0 when every failing criterion is listed
// in --expect-fail, 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "regionlab/geometry.hpp"
#include "regionlab/io.hpp"
#include "regionlab/partial_backprop.hpp"
#include "regionlab/presets.hpp"
#include "regionlab/regions.hpp"
#include "regionlab/trainer.hpp"
#include "random_nets.hpp"

using namespace regionlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back(std::string(ok ? "ok    " : "FAILED") + "  " + what);
    }
    void info(const std::string& what) { notes.push_back("        " + what); }
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Independent scalar definitions for the closed-form checks.
double sym_sigmoid(double u) { return std::tanh(0.5 * u); }
double sym_sigmoid_prime(double u) {
    const double t = std::tanh(0.5 * u);
    return 0.5 * (1.0 - t * t);
}
double logistic_g(double g, double s) { return 1.0 / (1.0 + std::exp(-g * s)); }
double sym_sigmoid_inverse(double y) { return 2.0 * std::atanh(y); }

// ---------------------------------------------------------------------------

Network gradcheck_network(Rng& rng) {
    const std::size_t depth = 2 + rng.next_u64() % 3;
    std::size_t in = 2 + rng.next_u64() % 5;
    std::vector<Layer> layers;
    const std::size_t input_dim = in;
    for (std::size_t k = 0; k < depth; ++k) {
        const std::size_t units = 2 + rng.next_u64() % 5;
        Matrix a(units, in);
        for (double& v : a.data()) v = rng.gauss();
        const bool last = k + 1 == depth;
        const Activation act = last ? Activation::softmax() : Activation::sigmoid(rng.uniform() < 0.5 ? 1.0 : 3.0);
        layers.push_back({std::move(a), gauss(rng, units), act});
        in = units;
    }
    return Network(input_dim, std::move(layers));
}

Outcome gradient_check() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1);
    const double h = 1e-5;
    std::size_t entries = 0, bad = 0;
    double worst_rel = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Network net = gradcheck_network(rng);
        const TrainingSample s{gauss(rng, net.input_dim()), rng.next_u64() % net.class_count()};
        const GradientSet g = backward(net, forward(net, s.x), s.label).second;
        Vector analytic;
        for (std::size_t k = 0; k < net.depth(); ++k) {
            analytic.insert(analytic.end(), g.weights[k].data().begin(), g.weights[k].data().end());
            analytic.insert(analytic.end(), g.bias[k].begin(), g.bias[k].end());
        }
        const Vector theta = flatten(net);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            Vector plus = theta, minus = theta;
            plus[i] += h;
            minus[i] -= h;
            const double fd = (loss(unflatten(net, plus), s) - loss(unflatten(net, minus), s)) / (2 * h);
            const double err = std::abs(fd - analytic[i]);
            const bool ok = err < 1e-9 || err < 1e-6 * std::abs(fd);
            if (err >= 1e-9) worst_rel = std::max(worst_rel, err / std::abs(fd));
            ++entries;
            bad += !ok;
        }
    }
    const double secs = seconds_since(t0);
    o.check(bad == 0, std::to_string(entries) + " gradient entries, " + std::to_string(bad) +
                          " outside tolerance, worst relative error " + fmt(worst_rel));
    o.check(secs < 10.0, "runtime " + fmt(secs, 3) + " s < 10 s");
    return o;
}

Outcome closed_forms() {
    Outcome o;
    const double gain = 5.0;
    double worst = 0;
    std::size_t points = 0;
    for (double alpha : {0.5, 1.0, 2.0})
        for (double beta : {-1.0, 0.0, 1.5})
            for (int i = 0; i <= 2400; ++i) {
                const double x = -12.0 + 0.01 * i;
                const Network net = presets::motivational_1d(alpha, beta, gain);
                const GradientSet g = backward(net, forward(net, Vector{x}), 0).second;
                const double u = alpha * x - beta;
                const double common = gain * (logistic_g(gain, sym_sigmoid(u)) - 1.0) * sym_sigmoid_prime(u);
                worst = std::max({worst, std::abs(g.weights[0](0, 0) - common * x), std::abs(g.bias[0][0] + common)});
                ++points;
            }
    o.check(worst <= 1e-12, std::to_string(points) + " points, alpha in {0.5,1,2}, beta in {-1,0,1.5}, gain 5: max |diff| " +
                                fmt(worst));
    return o;
}

double unit_value(const UnitParams& u, const Vector& x) {
    return regionlab::apply(Activation::step(), Vector{matvec(u.weights, x)[0] - u.bias[0]})[0];
}

Outcome boolean_algebra() {
    Outcome o;
    std::size_t cases = 0, bad = 0;
    for (double v : {-1.0, 1.0}) {
        bad += (unit_value(op_to_layer(RegionOp::complement()), Vector{v}) > 0) != (v < 0);
        bad += (unit_value(op_to_layer(RegionOp::identity()), Vector{v}) > 0) != (v > 0);
        cases += 2;
    }
    const auto comp = op_to_layer(RegionOp::complement());
    for (unsigned n = 1; n <= 6; ++n)
        for (unsigned p = 0; p < (1u << n); ++p) {
            const Vector x = oracle::pm_inputs(p, n);
            const unsigned positives = static_cast<unsigned>(__builtin_popcount(p));
            // A one-input intersection or union is the identity.
            const auto inter_op = op_to_layer(n == 1 ? RegionOp::identity() : RegionOp::intersection(n));
            const bool inter = unit_value(inter_op, x) > 0;
            const bool uni = unit_value(op_to_layer(n == 1 ? RegionOp::identity() : RegionOp::union_of(n)), x) > 0;
            bad += inter != (positives == n);
            bad += uni != (positives >= 1);
            cases += 2;
            for (unsigned k = 1; k <= n; ++k) {
                bad += (unit_value(kofn_layer(Vector(n, 1.0), k), x) > 0) != (positives >= k);
                ++cases;
            }
            // Union as complement of the intersection of complements.
            Vector comps(n);
            for (unsigned i = 0; i < n; ++i) comps[i] = unit_value(comp, Vector{x[i]});
            const double demorgan = unit_value(comp, Vector{unit_value(inter_op, comps)});
            bad += (demorgan > 0) != uni;
            ++cases;
        }
    o.check(bad == 0, std::to_string(cases) + " truth-table entries (n <= 6), " + std::to_string(bad) + " mismatches");
    return o;
}

Outcome region_count() {
    Outcome o;
    Rng rng(4);
    std::size_t bad = 0, cases = 0;
    for (std::size_t n = 1; n <= 6; ++n)
        for (int seed = 0; seed < 10; ++seed) {
            std::vector<oracle::Line> lines;
            for (std::size_t i = 0; i < n; ++i) lines.push_back({rng.gauss(), rng.gauss(), rng.gauss()});
            const std::size_t cells = oracle::count_cells(lines);
            bad += count_regions(n, 2) != cells;
            ++cases;
        }
    o.check(bad == 0, std::to_string(cases) + " random arrangements, n = 1..6: " + std::to_string(bad) + " mismatches");
    o.check(count_regions(3, 2) == 7, "r(3,2) = " + count_regions(3, 2).str());
    bool zero_ok = true;
    for (std::size_t d = 1; d <= 10; ++d) zero_ok = zero_ok && count_regions(0, d) == 1;
    o.check(zero_ok, "r(0,d) = 1 for d = 1..10");
    return o;
}

Network sum_of_sigmoids(double beta, double gamma) {
    std::vector<Layer> layers;
    layers.push_back({Matrix::identity(2), Vector{0, 0}, Activation::sigmoid(1)});
    layers.push_back({Matrix{{1.0, 1.0}}, Vector{beta}, Activation::sigmoid(gamma)});
    return Network(2, std::move(layers));
}

Outcome transitions() {
    Outcome o;
    for (double beta : {0.6, 1.0, 1.8}) {
        const Network net = sum_of_sigmoids(beta, 1.0);
        const double y = oracle::bisect([&](double t) { return forward(net, Vector{30.0, t}).out.back()[0]; }, -40, 40);
        const double expect = sym_sigmoid_inverse(beta - 1.0);
        o.check(std::abs(y - expect) < 1e-6 && std::abs(transition_shift(beta) - expect) < 1e-6,
                "beta " + fmt(beta, 2) + ": level set at x = 30 sits at y = " + fmt(y, 10) + ", formula " +
                    fmt(expect, 10));
    }
    const double level = 0.95;
    bool monotone = true;
    for (double beta : {0.8, 1.0, 1.3}) {
        double previous = std::numeric_limits<double>::infinity();
        for (double g = 1.0; g <= 40.0; g += 0.5) {
            const double w = transition_width(beta, g, level);
            if (std::isfinite(previous) && !(w < previous)) monotone = false;
            if (!std::isfinite(previous) && w > previous) monotone = false;
            previous = w;
        }
        monotone = monotone && std::isfinite(previous);
    }
    o.check(monotone, "width at level 0.95 decreases with gamma for beta in {0.8, 1, 1.3}, gamma 1..40");
    bool past = true;
    for (double g : {4.0, 8.0, 16.0}) {
        const double critical = sym_sigmoid_inverse(level) / g;  // lower contour loses its asymptote below this
        past = past && std::isinf(transition_width(critical - 1e-3, g, level)) &&
               std::isinf(transition_width(critical - 0.2, g, level)) &&
               std::isfinite(transition_width(critical + 1e-3, g, level));
    }
    o.check(past, "width is +inf for beta below the critical value sigma_g^-1(0.95), finite just above");
    return o;
}

Outcome partial_backprop_soundness() {
    Outcome o;
    Rng rng(6);
    std::size_t instances = 0, violations = 0, mismatches = 0;
    while (instances < 1000) {
        const Network net = testgen::random_network(rng);
        const AdjointBounds bounds(net);
        for (int s = 0; s < 5 && instances < 1000; ++s, ++instances) {
            const ForwardTrace t = forward(net, gauss(rng, net.input_dim()));
            const std::size_t c = rng.next_u64() % net.class_count();
            const auto [bt, full] = backward(net, t, c);
            for (std::size_t k = net.depth() - 1; k >= 1; --k) {
                const double yk = norm2(bt.y[k]);
                violations += bounds.l2(t, k, yk) < norm2(bt.y[k - 1]);
                violations += bounds.linf(t, k, yk, CutoffPolicy::LInfVariant::Tight) < norm_inf(bt.y[k - 1]);
                violations += bounds.linf(t, k, yk, CutoffPolicy::LInfVariant::Loose) < norm_inf(bt.y[k - 1]);
            }
            CutoffPolicy p = CutoffPolicy::uniform(net.depth(), std::exp(rng.uniform(-8, 1)),
                                                   rng.uniform() < 0.5 ? CutoffPolicy::Norm::L2
                                                                       : CutoffPolicy::Norm::LInf);
            if (rng.uniform() < 0.5) p.linf_variant = CutoffPolicy::LInfVariant::Loose;
            const CutoffResult r = backward_with_cutoff(net, t, c, p);
            for (std::size_t k = 0; k < net.depth(); ++k)
                if (k + 1 >= r.reached_layer)
                    mismatches += !(r.gradient.weights[k] == full.weights[k] && r.gradient.bias[k] == full.bias[k]);
        }
    }
    o.check(violations == 0, std::to_string(instances) + " instances, L2 / LInf tight / LInf loose: " +
                                 std::to_string(violations) + " bound violations");
    o.check(mismatches == 0, "cut-off gradients vs full backward on computed blocks: " + std::to_string(mismatches) +
                                 " blocks differ");
    return o;
}

Outcome reach_reproduction() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec grid = GridSpec::square(3.0, 201);
    const Labeling truth = Labeling::xor_quadrants();
    // Reference (layer 2, layer 1) reach in percent for gamma = 1, 2, 3.
    const std::map<CutoffPolicy::Norm, std::vector<std::pair<double, double>>> reference = {
        {CutoffPolicy::Norm::L2, {{100, 51}, {28, 16}, {9, 7}}},
        {CutoffPolicy::Norm::LInf, {{100, 40}, {28, 14}, {9, 6}}},
    };
    for (const auto& [norm, ref] : reference) {
        CutoffPolicy p;
        p.weight_thresholds = {{1, 0.05}, {2, 0.05}};
        p.norm = norm;
        std::vector<std::pair<double, double>> got;
        for (int g = 1; g <= 3; ++g) {
            const auto st = reach_statistics(presets::nn_example_2d(g), grid, truth, p);
            got.emplace_back(100 * st.fractions[1], 100 * st.fractions[0]);
        }
        const std::string name = norm == CutoffPolicy::Norm::L2 ? "Frobenius" : "elementwise";
        for (std::size_t i = 0; i < 3; ++i) {
            const bool ok = std::abs(got[i].first - ref[i].first) <= 10 && std::abs(got[i].second - ref[i].second) <= 10;
            o.check(ok, name + " gamma " + std::to_string(i + 1) + ": reach (" + fmt(got[i].first, 3) + ", " +
                            fmt(got[i].second, 3) + ") vs (" + fmt(ref[i].first, 3) + ", " + fmt(ref[i].second, 3) +
                            ") +-10");
        }
        const bool strict = got[0].first > got[1].first && got[1].first > got[2].first &&
                            got[0].second > got[1].second && got[1].second > got[2].second;
        o.check(strict, name + ": strictly decreasing in gamma on both layers");
    }
    const double secs = seconds_since(t0);
    o.check(secs < 60.0, "runtime " + fmt(secs, 3) + " s < 60 s");
    return o;
}

// Index of the first record at or after iteration `it`, or rows.size().
std::size_t record_at(const ExperimentReport& r, double it) {
    const auto iters = r.column("iteration");
    return static_cast<std::size_t>(std::lower_bound(iters.begin(), iters.end(), it) - iters.begin());
}

Outcome density_experiment(int seeds) {
    Outcome o;
    constexpr double kBudget = 300000;
    const double domain_area = 12.0;  // [-6, 6] x [-1, 1]
    std::vector<std::vector<double>> big_areas;  // n = 3200 at norm 25, per seed
    std::vector<std::vector<double>> small_areas;
    std::vector<double> record_iters;
    bool ordering = true, norm1_range = true;
    for (int seed = 1; seed <= seeds; ++seed) {
        // The width study's norm-25 run is the density run at n = 3200: same
        // samples, same start, same steps.
        const auto width = run_experiment(
            "width", {{"seed", seed}, {"record_every", 20}, {"stop_on_zero_area", true}, {"iterations", kBudget}});
        std::vector<double> counts;
        for (const auto& r : width) {
            const double it = r.zero_area_iteration ? static_cast<double>(*r.zero_area_iteration)
                                                    : std::numeric_limits<double>::infinity();
            counts.push_back(it);
        }
        const bool ord = counts[0] < counts[1] && counts[1] < counts[2];
        ordering = ordering && ord;
        norm1_range = norm1_range && counts[0] >= 1000 && counts[0] <= 10000;
        o.info("seed " + std::to_string(seed) + ": zero-area iteration for norm 1 / 10 / 25 = " + fmt(counts[0], 7) +
               " / " + fmt(counts[1], 7) + " / " + fmt(counts[2], 7));

        const ExperimentReport& n3200 = width[2];
        std::vector<double> area;
        const auto a = n3200.column("area");
        // A run that stopped early keeps its last recorded area.
        for (double it = 0; it <= kBudget; it += 1000) area.push_back(a[std::min(record_at(n3200, it), a.size() - 1)]);
        big_areas.push_back(area);

        const auto small = run_experiment("density", {{"seed", seed}, {"n", {50}}, {"iterations", kBudget}});
        small_areas.push_back(small[0].column("area"));
        record_iters = small[0].column("iteration");
    }

    auto mean_curve = [](const std::vector<std::vector<double>>& curves) {
        std::vector<double> m(curves.front().size(), 0.0);
        for (const auto& c : curves)
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += c[i] / static_cast<double>(curves.size());
        return m;
    };
    const TrainerConfig defaults;
    const auto big = mean_curve(big_areas);
    std::optional<std::size_t> reached;
    for (std::size_t i = 0; i < big.size() && !reached; ++i)
        if (big[i] <= defaults.zero_area_tolerance) reached = i * 1000;
    o.check(reached.has_value(), "n = 3200, init norm 25, mean area over " + std::to_string(seeds) +
                                     " seeds reaches <= " + fmt(defaults.zero_area_tolerance) + " within 300000: " +
                                     (reached ? "at " + std::to_string(*reached) : "no, final mean area " + fmt(big.back())));

    const auto small = mean_curve(small_areas);
    // Windows start before the run has converged; otherwise a finished run
    // would count as slow progress.
    std::optional<std::pair<std::size_t, std::size_t>> plateau;
    for (std::size_t i = 0; i < small.size() && !plateau; ++i)
        for (std::size_t j = i + 1; j < small.size(); ++j)
            if (record_iters[j] - record_iters[i] >= 10000) {
                if (small[i] > defaults.zero_area_tolerance && small[i] - small[j] < 0.01 * domain_area)
                    plateau = std::pair{i, j};
                break;
            }
    o.check(plateau.has_value(),
            "n = 50: a 10000-iteration window with mean area drop < 1% of the domain" +
                (plateau ? " at [" + fmt(record_iters[plateau->first], 7) + ", " + fmt(record_iters[plateau->second], 7) +
                               "], area " + fmt(small[plateau->first]) + " -> " + fmt(small[plateau->second])
                         : std::string()));
    o.check(ordering, "width ordering iterations(1) < iterations(10) < iterations(25) on every seed");
    o.check(norm1_range, "norm-1 zero-area iteration within [1000, 10000] on every seed");
    return o;
}

Outcome regularization_comparison() {
    Outcome o;
    const auto reports = run_experiment("regularization-compare");
    std::map<std::string, const ExperimentReport*> by;
    for (const auto& r : reports) by[r.label] = &r;
    const auto& st = *by.at("standard");
    const auto& l2 = *by.at("l2");
    const auto& nb = *by.at("norm-ball");
    auto zero = [](const ExperimentReport& r) {
        return r.zero_area_iteration ? static_cast<double>(*r.zero_area_iteration) : std::numeric_limits<double>::infinity();
    };
    for (const auto* r : {&st, &l2, &nb})
        o.info(r->label + ": final |A1| " + fmt(r->last("normA1_0")) + ", loss " + fmt(r->last("loss")) + ", area " +
               fmt(r->last("area")) + ", zero-area iteration " + fmt(zero(*r), 7));
    o.check(st.last("normA1_0") > l2.last("normA1_0") && st.last("normA1_0") > nb.last("normA1_0"),
            "(a) unconstrained |A1| exceeds both penalized and constrained");
    o.check(zero(l2) <= zero(st) && zero(nb) <= zero(st) && std::isfinite(std::min(zero(l2), zero(nb))),
            "(b) penalized and constrained reach zero area no later than unconstrained");
    // Larger |A1| should come with smaller loss.
    std::vector<const ExperimentReport*> rs{&st, &l2, &nb};
    std::sort(rs.begin(), rs.end(), [](auto* a, auto* b) { return a->last("normA1_0") < b->last("normA1_0"); });
    const bool ordered = rs[0]->last("loss") > rs[1]->last("loss") && rs[1]->last("loss") > rs[2]->last("loss");
    o.check(ordered, "(c) final loss decreases along increasing final |A1|: " + rs[0]->label + " < " + rs[1]->label +
                         " < " + rs[2]->label + " in |A1|");
    return o;
}

Outcome subspace_families() {
    Outcome o;
    std::size_t fails = 0, lift_fails = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed);
        const auto fam = random_family(3, 5, rng);
        fails += !verify_family(fam).ok();
        lift_fails += !verify_family(lift_family(fam)).separation_ok();
    }
    o.check(fails == 0 && lift_fails == 0, "100 families d = 3, n = 5: " + std::to_string(fails) +
                                               " failed, lifted: " + std::to_string(lift_fails) + " failed");
    fails = lift_fails = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(1000 + seed);
        const auto fam = random_family(5, 4, rng);
        fails += !verify_family(fam).ok();
        lift_fails += !verify_family(lift_family(fam)).separation_ok();
    }
    o.check(fails == 0 && lift_fails == 0, "20 families d = 5, n = 4: " + std::to_string(fails) +
                                               " failed, lifted: " + std::to_string(lift_fails) + " failed");
    return o;
}

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / ("regionlab_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string short_train = (root / "train.json").string();
    write_file_atomic(short_train, R"({"overrides": {"iterations": 2000, "record_every": 100}})");

    std::vector<std::vector<std::string>> runs;
    for (const std::string cmd : {"field", "regions", "partialbp", "tverberg"})
        for (const auto& p : cli::preset_names(cmd)) runs.push_back({cmd, "--preset", p, "--seed", "11"});
    for (const auto& p : experiment_presets())
        runs.push_back({"train", "--preset", p, "--config", short_train, "--seed", "11"});

    std::size_t files = 0, differing = 0, failed_runs = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        std::vector<fs::path> dirs;
        for (int rep = 0; rep < 2; ++rep) {
            auto args = runs[r];
            dirs.push_back(root / (std::to_string(r) + "_" + std::to_string(rep)));
            args.insert(args.begin(), "regionlab");
            args.push_back("--out");
            args.push_back(dirs.back().string());
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            failed_runs += cli::run(static_cast<int>(argv.size()), argv.data(), out, err) != 0;
        }
        for (const auto& e : fs::directory_iterator(dirs[0])) {
            if (e.path().extension() != ".csv") continue;
            ++files;
            const fs::path other = dirs[1] / e.path().filename();
            differing += !fs::exists(other) || read_file(e.path()) != read_file(other);
        }
        differing += read_file(dirs[0] / "manifest.json") != read_file(dirs[1] / "manifest.json");
    }
    fs::remove_all(root);
    o.check(failed_runs == 0 && differing == 0 && files > 0,
            std::to_string(runs.size()) + " preset runs twice with seed 11: " + std::to_string(files) +
                " CSV files compared, " + std::to_string(differing) + " differ, " + std::to_string(failed_runs) +
                " runs failed");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regionlab acceptance run"};
    std::vector<int> only, expect_fail;
    int seeds = 5;
    app.add_option("--only", only, "Run only these criteria");
    app.add_option("--expect-fail", expect_fail, "Criteria known to fail; they do not affect the exit status");
    app.add_option("--seeds", seeds, "Seeds for the density criterion")->check(CLI::Range(1, 100));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"gradient correctness vs central differences", gradient_check},
        {"one-dimensional closed-form gradients", closed_forms},
        {"Boolean operator truth tables and De Morgan", boolean_algebra},
        {"region count vs cell enumeration", region_count},
        {"transition shift and width", transitions},
        {"partial backprop soundness", partial_backprop_soundness},
        {"partial backprop reach on the 2-D example", reach_reproduction},
        {"density and width experiments", [seeds] { return density_experiment(seeds); }},
        {"penalized and constrained training", regularization_comparison},
        {"disjoint affine subspace families", subspace_families},
        {"CLI determinism", determinism},
    };

    std::vector<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.check(false, std::string("exception: ") + e.what());
        }
        std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << criteria[i].first << " ("
                  << fmt(seconds_since(t0), 3) << " s)\n";
        for (const auto& n : out.notes) std::cout << "        " << n << "\n";
        std::cout.flush();
        if (!out.pass) failed.push_back(id);
    }

    bool unexpected = false;
    std::cout << "\nsummary: " << failed.size() << " criteria failed";
    for (int id : failed) {
        const bool expected = std::find(expect_fail.begin(), expect_fail.end(), id) != expect_fail.end();
        unexpected = unexpected || !expected;
        std::cout << (id == failed.front() ? ": " : ", ") << id << (expected ? " (expected)" : " (UNEXPECTED)");
    }
    std::cout << "\n";
    return unexpected ? 1 : 0;
}
