#include "regionlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regionlab/error.hpp"
#include "regionlab/json_util.hpp"

namespace regionlab {

using nlohmann::json;

namespace {

// Subset enumeration beyond this is a usage error rather than a long wait.
constexpr double kMaxSparkSubsets = 5e6;

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

Vector difference(const Vector& a, const Vector& b) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

bool full_spark(const Matrix& m, double rel_tol) {
    const std::size_t total = m.cols(), k = std::min(m.rows(), total);
    require(binomial(total, k) <= kMaxSparkSubsets, "verify_family: too many column subsets for the spark check");
    std::vector<bool> pick(total, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    Matrix sub(m.rows(), k);
    do {
        std::size_t c = 0;
        for (std::size_t j = 0; j < total; ++j) {
            if (!pick[j]) continue;
            for (std::size_t r = 0; r < m.rows(); ++r) sub(r, c) = m(r, j);
            ++c;
        }
        if (numerical_rank(sub, rel_tol) != k) return false;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return true;
}

// Nonzero entry of a^T A relative to the column norms.
bool meets(const Vector& a, const Matrix& block, double rel_tol) {
    for (std::size_t c = 0; c < block.cols(); ++c) {
        const Vector col = block.column(c);
        if (std::abs(dot(a, col)) > rel_tol * norm2(a) * norm2(col)) return true;
    }
    return false;
}

}  // namespace

void SubspaceFamily::validate() const {
    require(d >= 1, "SubspaceFamily: dimension must be positive");
    require(blocks.size() == offsets.size(), "SubspaceFamily: block and offset counts differ");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        require(blocks[i].rows() == d, "SubspaceFamily: block " + std::to_string(i) + " must have d rows");
        require(blocks[i].cols() == block_cols(), "SubspaceFamily: blocks must have equal column counts");
        require(offsets[i].size() == d, "SubspaceFamily: offset " + std::to_string(i) + " must have length d");
    }
}

Matrix SubspaceFamily::concatenated() const {
    require(!blocks.empty(), "SubspaceFamily: no blocks");
    Matrix out = blocks.front();
    for (std::size_t i = 1; i < blocks.size(); ++i) out = hcat(out, blocks[i]);
    return out;
}

bool PairReport::ok() const {
    if (!disjoint || normal.empty()) return false;
    return std::all_of(intersects.begin(), intersects.end(), [](const auto& p) { return p.second; });
}

bool FamilyReport::all_disjoint() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const PairReport& p) { return p.disjoint; });
}

bool FamilyReport::all_intersect() const {
    for (const auto& p : pairs)
        for (const auto& [k, hit] : p.intersects)
            if (!hit) return false;
    return true;
}

bool FamilyReport::separation_ok() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const PairReport& p) { return p.ok(); });
}

FamilyReport verify_family(const SubspaceFamily& fam, double rel_tol) {
    fam.validate();
    FamilyReport rep;
    rep.full_spark = fam.size() == 0 || full_spark(fam.concatenated(), rel_tol);
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j) {
            PairReport p;
            p.i = i;
            p.j = j;
            const Matrix span = hcat(fam.blocks[i], fam.blocks[j]);
            // S_i and S_j meet iff b_j - b_i lies in the span of their directions.
            p.disjoint = numerical_rank(hcat(span, difference(fam.offsets[j], fam.offsets[i])), rel_tol) >
                         numerical_rank(span, rel_tol);
            p.normal = null_vector(transpose(span), rel_tol);
            if (!p.normal.empty()) {
                p.level_i = dot(p.normal, fam.offsets[i]);
                p.level_j = dot(p.normal, fam.offsets[j]);
                for (std::size_t k = 0; k < fam.size(); ++k)
                    if (k != i && k != j) p.intersects.emplace_back(k, meets(p.normal, fam.blocks[k], rel_tol));
            }
            rep.pairs.push_back(std::move(p));
        }
    return rep;
}

SubspaceFamily random_family(std::size_t d, std::size_t n, Rng& rng, int max_attempts) {
    require(d >= 3 && d % 2 == 1, "random_family: d must be odd and at least 3");
    require(n >= 2, "random_family: need at least two subspaces");
    require(max_attempts >= 1, "random_family: max_attempts must be positive");
    const std::size_t m = (d - 1) / 2;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        SubspaceFamily fam;
        fam.d = d;
        for (std::size_t i = 0; i < n; ++i) {
            fam.blocks.emplace_back(d, m, gauss(rng, d * m));
            fam.offsets.push_back(gauss(rng, d));
        }
        if (verify_family(fam).ok()) return fam;
    }
    throw RuntimeFailure("random_family: no valid family after " + std::to_string(max_attempts) + " draws");
}

SubspaceFamily lift_family(const SubspaceFamily& fam) {
    require(verify_family(fam).separation_ok(), "lift_family: input family does not verify");
    SubspaceFamily out;
    out.d = fam.d + 1;
    const std::size_t m = fam.block_cols();
    for (std::size_t i = 0; i < fam.size(); ++i) {
        Matrix b(out.d, m + 1, 0.0);
        for (std::size_t r = 0; r < fam.d; ++r)
            for (std::size_t c = 0; c < m; ++c) b(r, c) = fam.blocks[i](r, c);
        b(fam.d, m) = 1.0;
        out.blocks.push_back(std::move(b));
        Vector off = fam.offsets[i];
        off.push_back(0.0);
        out.offsets.push_back(std::move(off));
    }
    if (!verify_family(out).separation_ok()) throw RuntimeFailure("lift_family: lifted family fails verification");
    return out;
}

json to_json(const SubspaceFamily& fam) {
    json blocks = json::array();
    for (const Matrix& b : fam.blocks) {
        json rows = json::array();
        for (std::size_t r = 0; r < b.rows(); ++r) rows.push_back(Vector(b.row(r).begin(), b.row(r).end()));
        blocks.push_back(std::move(rows));
    }
    return {{"d", fam.d}, {"blocks", std::move(blocks)}, {"offsets", fam.offsets}};
}

SubspaceFamily family_from_json(const json& j) {
    const std::string where = "family";
    reject_unknown_keys(j, {"d", "blocks", "offsets"}, where);
    SubspaceFamily fam;
    fam.d = get_field<std::size_t>(j, "d", where);
    for (const auto& rows : get_field<std::vector<std::vector<Vector>>>(j, "blocks", where)) {
        require(!rows.empty() && !rows.front().empty(), "family: empty block");
        Matrix b(rows.size(), rows.front().size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            require(rows[r].size() == b.cols(), "family: ragged block");
            std::copy(rows[r].begin(), rows[r].end(), b.row(r).begin());
        }
        fam.blocks.push_back(std::move(b));
    }
    fam.offsets = get_field<std::vector<Vector>>(j, "offsets", where);
    fam.validate();
    return fam;
}

json to_json(const FamilyReport& rep) {
    json pairs = json::array();
    for (const auto& p : rep.pairs) {
        json inter = json::array();
        for (const auto& [k, hit] : p.intersects) inter.push_back({{"k", k}, {"intersects", hit}});
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"disjoint", p.disjoint},
                         {"normal", p.normal},
                         {"level_i", p.level_i},
                         {"level_j", p.level_j},
                         {"intersects", std::move(inter)}});
    }
    return {{"full_spark", rep.full_spark},
            {"all_disjoint", rep.all_disjoint()},
            {"all_intersect", rep.all_intersect()},
            {"ok", rep.ok()},
            {"pairs", std::move(pairs)}};
}

}  // namespace regionlab
