#pragma once

// Families of pairwise-disjoint affine subspaces S_i = {A_i t + b_i} in R^d
// whose pairwise separating hyperplanes each cut every other member, and the
// lift of such a family from R^d to R^(d+1).

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "regionlab/dense.hpp"
#include "regionlab/rng.hpp"

namespace regionlab {

struct SubspaceFamily {
    std::size_t d = 0;
    std::vector<Matrix> blocks;  // d x m each
    std::vector<Vector> offsets; // length d each

    std::size_t size() const { return blocks.size(); }
    /// Columns per block (the subspace dimension).
    std::size_t block_cols() const { return blocks.empty() ? 0 : blocks.front().cols(); }
    /// Throws ContractError on inconsistent dimensions.
    void validate() const;
    /// [A_1, ..., A_n].
    Matrix concatenated() const;
};

inline constexpr double kGeometryTolerance = 1e-9;

struct PairReport {
    std::size_t i = 0, j = 0;
    bool disjoint = false;
    /// Unit normal to span[A_i, A_j]; empty when that span is not a hyperplane.
    Vector normal;
    /// a^T b_i and a^T b_j; a hyperplane a^T x = beta with beta strictly
    /// between them separates S_i from S_j.
    double level_i = 0.0, level_j = 0.0;
    /// intersects[k] for every k != i, j: some entry of a^T A_k is nonzero,
    /// so the separating hyperplane meets S_k.
    std::vector<std::pair<std::size_t, bool>> intersects;

    double separating_level() const { return 0.5 * (level_i + level_j); }
    bool ok() const;
};

struct FamilyReport {
    /// Every min(d, #columns) columns of [A_1, ..., A_n] are independent.
    bool full_spark = false;
    std::vector<PairReport> pairs;  // i < j, lexicographic

    bool all_disjoint() const;
    bool all_intersect() const;
    /// Disjointness, normals and intersections for every pair.
    bool separation_ok() const;
    /// separation_ok() and full spark.
    bool ok() const { return full_spark && separation_ok(); }
};

/// Blocks of (d-1)/2 Gaussian columns and Gaussian offsets, redrawn until the
/// family verifies. d must be odd and at least 3, n at least 2.
SubspaceFamily random_family(std::size_t d, std::size_t n, Rng& rng, int max_attempts = 16);

FamilyReport verify_family(const SubspaceFamily& fam, double rel_tol = kGeometryTolerance);

/// Appends a zero row to every block plus the column e_{d+1}, and a zero to
/// every offset. Throws ContractError when either the input or the lifted
/// family fails separation.
SubspaceFamily lift_family(const SubspaceFamily& fam);

nlohmann::json to_json(const SubspaceFamily& fam);
SubspaceFamily family_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FamilyReport& rep);

}  // namespace regionlab
