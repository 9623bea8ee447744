#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "regionlab/error.hpp"
#include "regionlab/geometry.hpp"

using namespace regionlab;

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

// SVD rank, independent of the elimination used by the library.
long svd_rank(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    long r = 0;
    for (long i = 0; i < s.size(); ++i) r += s(i) > 1e-9 * s(0);
    return r;
}

// Oracle: S_i and S_j are disjoint iff appending b_j - b_i raises the rank.
bool oracle_disjoint(const SubspaceFamily& f, std::size_t i, std::size_t j) {
    const Eigen::MatrixXd a = to_eigen(f.blocks[i]), b = to_eigen(f.blocks[j]);
    Eigen::MatrixXd span(f.d, a.cols() + b.cols());
    span << a, b;
    Eigen::MatrixXd aug(f.d, span.cols() + 1);
    aug << span, (Eigen::Map<const Eigen::VectorXd>(f.offsets[j].data(), f.d) -
                  Eigen::Map<const Eigen::VectorXd>(f.offsets[i].data(), f.d));
    return svd_rank(aug) > svd_rank(span);
}

void check_against_oracle(const SubspaceFamily& f, const FamilyReport& rep) {
    for (const PairReport& p : rep.pairs) {
        CHECK(p.disjoint == oracle_disjoint(f, p.i, p.j));
        REQUIRE(p.normal.size() == f.d);
        CHECK(norm2(p.normal) == doctest::Approx(1.0));
        for (const Matrix* blk : {&f.blocks[p.i], &f.blocks[p.j]})
            for (double v : transpose_matvec(*blk, p.normal)) CHECK(std::abs(v) < 1e-9 * (1 + frobenius_norm(*blk)));
        CHECK(p.level_i != p.level_j);
        for (const auto& [k, hit] : p.intersects) {
            const Vector proj = transpose_matvec(f.blocks[k], p.normal);
            CHECK(hit == (norm_inf(proj) > 1e-9 * frobenius_norm(f.blocks[k])));
        }
    }
}

}  // namespace

TEST_CASE("random families verify") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const std::size_t n = 2 + seed % 5;
        const SubspaceFamily f = random_family(3, n, rng);
        CHECK(f.block_cols() == 1);
        const FamilyReport rep = verify_family(f);
        CHECK(rep.ok());
        CHECK(rep.pairs.size() == n * (n - 1) / 2);
        check_against_oracle(f, rep);
    }
    Rng rng(7);
    const SubspaceFamily f5 = random_family(5, 3, rng);
    CHECK(f5.block_cols() == 2);
    CHECK(verify_family(f5).ok());
}

TEST_CASE("every separating normal cuts all other members") {
    Rng rng(3);
    const SubspaceFamily f = random_family(3, 6, rng);
    const FamilyReport rep = verify_family(f);
    for (const PairReport& p : rep.pairs) {
        CHECK(p.intersects.size() == 4);
        // A hyperplane between the two levels separates S_i from S_j.
        const double beta = p.separating_level();
        CHECK((p.level_i - beta) * (p.level_j - beta) < 0.0);
    }
    CHECK(rep.all_intersect());
}

TEST_CASE("parallel lines break full spark and intersection") {
    SubspaceFamily f;
    f.d = 3;
    f.blocks = {Matrix{{1}, {0}, {0}}, Matrix{{1}, {0}, {0}}, Matrix{{0}, {1}, {1}}};
    f.offsets = {{0, 0, 0}, {0, 1, 0}, {0, 0, 5}};
    const FamilyReport rep = verify_family(f);
    CHECK_FALSE(rep.full_spark);
    CHECK(rep.pairs[0].disjoint);
    // The two parallel lines span only a line, so there is no unique normal.
    CHECK(rep.pairs[0].normal.empty());
    CHECK_FALSE(rep.ok());
}

TEST_CASE("a normal orthogonal to a third line is reported") {
    SubspaceFamily f;
    f.d = 3;
    // Normal of span{e1, e2} is e3; the third line lies along e1 + e2.
    f.blocks = {Matrix{{1}, {0}, {0}}, Matrix{{0}, {1}, {0}}, Matrix{{1}, {1}, {0}}};
    f.offsets = {{0, 0, 0}, {0, 0, 1}, {3, 0, 2}};
    const FamilyReport rep = verify_family(f);
    CHECK(rep.pairs[0].disjoint);
    REQUIRE(rep.pairs[0].intersects.size() == 1);
    CHECK_FALSE(rep.pairs[0].intersects[0].second);
    CHECK_FALSE(rep.all_intersect());
}

TEST_CASE("intersecting lines are not disjoint") {
    SubspaceFamily f;
    f.d = 3;
    f.blocks = {Matrix{{1}, {0}, {0}}, Matrix{{0}, {1}, {0}}};
    f.offsets = {{0, 2, 0}, {1, 0, 0}};  // both pass through (1, 2, 0)
    const FamilyReport rep = verify_family(f);
    CHECK_FALSE(rep.pairs[0].disjoint);
    CHECK(rep.pairs[0].intersects.empty());
}

TEST_CASE("two members intersect nothing else vacuously") {
    Rng rng(1);
    const FamilyReport rep = verify_family(random_family(3, 2, rng));
    CHECK(rep.pairs.size() == 1);
    CHECK(rep.pairs[0].intersects.empty());
    CHECK(rep.all_intersect());
}

TEST_CASE("lifting adds a shared direction and keeps separation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(100 + seed);
        const SubspaceFamily f = random_family(3, 5, rng);
        const SubspaceFamily g = lift_family(f);
        CHECK(g.d == 4);
        CHECK(g.block_cols() == f.block_cols() + 1);
        for (const Vector& b : g.offsets) CHECK(b.back() == 0.0);
        const FamilyReport rep = verify_family(g);
        CHECK(rep.separation_ok());
        check_against_oracle(g, rep);
    }
    Rng rng(5);
    CHECK(verify_family(lift_family(random_family(5, 4, rng))).separation_ok());
}

TEST_CASE("preconditions") {
    Rng rng(1);
    CHECK_THROWS_AS(random_family(4, 3, rng), ContractError);
    CHECK_THROWS_AS(random_family(1, 3, rng), ContractError);
    CHECK_THROWS_AS(random_family(3, 1, rng), ContractError);
    SubspaceFamily bad;
    bad.d = 3;
    bad.blocks = {Matrix{{1}, {0}}};
    bad.offsets = {{0, 0, 0}};
    CHECK_THROWS_AS(verify_family(bad), ContractError);
    SubspaceFamily meeting;
    meeting.d = 3;
    meeting.blocks = {Matrix{{1}, {0}, {0}}, Matrix{{0}, {1}, {0}}};
    meeting.offsets = {{0, 0, 0}, {0, 0, 0}};
    CHECK_THROWS_AS(lift_family(meeting), ContractError);
}

TEST_CASE("family json round trip") {
    Rng rng(9);
    const SubspaceFamily f = random_family(5, 3, rng);
    const SubspaceFamily g = family_from_json(to_json(f));
    CHECK(g.d == f.d);
    CHECK(g.blocks == f.blocks);
    CHECK(g.offsets == f.offsets);
    CHECK(to_json(verify_family(f))["ok"] == true);
    CHECK_THROWS_AS(family_from_json({{"d", 3}, {"blocks", nlohmann::json::array()}, {"offsets", {{0, 0, 0}}}}),
                    ContractError);
    CHECK_THROWS_AS(family_from_json({{"d", 3}, {"extra", 1}}), ContractError);
}
