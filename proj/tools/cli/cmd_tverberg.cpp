// tverberg: draw a family of pairwise disjoint affine subspaces, verify it and
// optionally its lift to one dimension higher.

#include "cli.hpp"
#include "regionlab/error.hpp"
#include "regionlab/geometry.hpp"
#include "regionlab/io.hpp"
#include "regionlab/json_util.hpp"
#include "regionlab/rng.hpp"

namespace regionlab::cli {

namespace {

std::string pairs_csv(const FamilyReport& rep) {
    CsvWriter csv({"i", "j", "disjoint", "level_i", "level_j", "separating_level", "intersects_all_others", "ok"});
    for (const auto& p : rep.pairs) {
        bool all = true;
        for (const auto& [other, hit] : p.intersects) all = all && hit;
        csv.row(std::vector<std::string>{std::to_string(p.i), std::to_string(p.j), p.disjoint ? "1" : "0",
                                         format_double(p.level_i), format_double(p.level_j),
                                         format_double(p.separating_level()), all ? "1" : "0", p.ok() ? "1" : "0"});
    }
    return csv.str();
}

}  // namespace

std::uint64_t cmd_tverberg(const Invocation& inv, OutputBundle& out) {
    const json& cfg = inv.config;
    const std::string where = "tverberg config";
    reject_unknown_keys(cfg, {"d", "n", "seed", "lift", "max_attempts"}, where);
    const auto d = get_field<std::size_t>(cfg, "d", where);
    const auto n = get_field<std::size_t>(cfg, "n", where);
    const auto seed = get_or<std::uint64_t>(cfg, "seed", 0, where);
    const bool lift = get_or(cfg, "lift", false, where);
    const int attempts = get_or(cfg, "max_attempts", 16, where);
    require(d >= 3 && d % 2 == 1, where + ": d must be odd and at least 3");
    require(n >= 2, where + ": n must be at least 2");
    require(attempts >= 1, where + ": max_attempts must be positive");

    Rng rng(seed);
    const SubspaceFamily fam = random_family(d, n, rng, attempts);
    const FamilyReport rep = verify_family(fam);
    out.add_json("family.json", to_json(fam));
    out.add_json("report.json", to_json(rep));
    out.add("pairs.csv", pairs_csv(rep));
    if (lift) {
        const SubspaceFamily lifted = lift_family(fam);
        const FamilyReport lrep = verify_family(lifted);
        out.add_json("lifted_family.json", to_json(lifted));
        out.add_json("lifted_report.json", to_json(lrep));
        out.add("lifted_pairs.csv", pairs_csv(lrep));
    }
    return seed;
}

}  // namespace regionlab::cli
