#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "attnlab/maxmargin.hpp"
#include "attnlab/training.hpp"

using namespace attnlab;

namespace {

PooledDataset make_pooled(int d, std::vector<std::pair<Vec, int>> pts) {
    PooledDataset pooled;
    pooled.d = d;
    for (auto& [v, y] : pts) {
        PooledPoint pt;
        pt.v = std::move(v);
        pt.label = y;
        pt.length = static_cast<int>(pt.v.size());
        pooled.points.push_back(std::move(pt));
    }
    return pooled;
}

// Random instance that is separable by construction: labels come from a
// hidden direction with a margin band around zero rejected.
PooledDataset random_separable(int n, int d, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coord(0.05, 1.0);
    std::uniform_real_distribution<double> dir(-1.0, 1.0);
    Vec hidden(static_cast<size_t>(d));
    for (double& x : hidden) x = dir(rng);
    PooledDataset pooled;
    pooled.d = d;
    while (static_cast<int>(pooled.points.size()) < n) {
        PooledPoint pt;
        pt.v.assign(static_cast<size_t>(d), 0.0);
        for (double& x : pt.v) x = coord(rng);
        const double s = dot(hidden, pt.v);
        if (std::fabs(s) < 0.15) continue;
        pt.label = s > 0.0 ? +1 : -1;
        pt.length = d;
        pooled.points.push_back(std::move(pt));
    }
    return pooled;
}

void check_kkt(const PooledDataset& pooled, const MarginSolution& sol) {
    CHECK(sol.kkt_feasibility <= kKktTol);
    CHECK(sol.kkt_stationarity <= kKktTol);
    CHECK(sol.kkt_complementarity <= kKktTol);
    CHECK(min_functional_margin(pooled, sol.u_star) >= 1.0 - 1e-6);
    CHECK(sol.margin == doctest::Approx(1.0 / norm2(sol.u_star)).epsilon(1e-12));
    CHECK(!sol.support_indices.empty());
    for (int i : sol.support_indices) {
        CHECK(sol.alpha[static_cast<size_t>(i)] > 0.0);
    }
}

}  // namespace

TEST_CASE("two opposite axis points") {
    const PooledDataset pooled =
        make_pooled(2, {{{1.0, 0.0}, +1}, {{0.0, 1.0}, -1}});
    const MarginSolution sol = solve_max_margin(pooled);
    CHECK(sol.u_star[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.u_star[1] == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(sol.margin == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    check_kkt(pooled, sol);

    const MarginSolution oracle = support_subset_oracle(pooled);
    CHECK(norm2(oracle.u_star) == doctest::Approx(norm2(sol.u_star)).epsilon(1e-9));
    CHECK(oracle.support_indices.size() == 2);
}

TEST_CASE("single point has the closed-form solution") {
    const PooledDataset pooled = make_pooled(3, {{{1.0, 0.0, 0.0}, +1}});
    const MarginSolution sol = solve_max_margin(pooled);
    CHECK(sol.u_star[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.margin == doctest::Approx(1.0).epsilon(1e-10));
    const MarginSolution oracle = support_subset_oracle(pooled);
    CHECK(oracle.margin == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oracle.support_indices == std::vector<int>{0});
}

TEST_CASE("collinear same-label points leave one support vector") {
    const PooledDataset pooled =
        make_pooled(2, {{{1.0, 0.0}, +1}, {{2.0, 0.0}, +1}});
    const MarginSolution sol = solve_max_margin(pooled);
    CHECK(sol.u_star[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sol.support_indices == std::vector<int>{0});  // nearer point binds
    const MarginSolution oracle = support_subset_oracle(pooled);
    CHECK(oracle.support_indices == std::vector<int>{0});
    CHECK(norm2(oracle.u_star) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solver agrees with the subset oracle on 20 fixed instances") {
    for (unsigned seed = 100; seed < 120; ++seed) {
        const int n = 4 + static_cast<int>(seed % 7);   // 4..10 points
        const int d = 3 + static_cast<int>(seed % 4);   // 3..6 dims
        const PooledDataset pooled = random_separable(n, d, seed);
        const MarginSolution sol = solve_max_margin(pooled);
        const MarginSolution oracle = support_subset_oracle(pooled);
        CHECK(std::fabs(norm2(sol.u_star) - norm2(oracle.u_star)) <= 1e-6);
        check_kkt(pooled, sol);
        // The oracle's candidate must be feasible and no better.
        CHECK(min_functional_margin(pooled, oracle.u_star) >= 1.0 - 1e-9);
    }
}

TEST_CASE("pooling at the zero checkpoint averages the embeddings") {
    const ModelParams p = ModelParams::zeros(4, 2.0);
    const TaskDataset ds = build_even_pairs_dataset(2);
    const PooledDataset pooled = pool_dataset(p, ds);
    REQUIRE(pooled.points.size() == 6);
    // Length-1 points are their own embeddings.
    CHECK(pooled.points[0].v == Vec{1.0, 0.0, 0.0, 0.0});
    CHECK(pooled.points[1].v == Vec{0.0, 1.0, 0.0, 0.0});
    // Length-2 points are uniform mixtures.
    CHECK(pooled.points[2].v == Vec{0.5, 0.0, 0.5, 0.0});  // aa
    CHECK(pooled.points[3].v == Vec{0.5, 0.0, 0.0, 0.5});  // ab
    for (const PooledPoint& pt : pooled.points) {
        double sum = 0.0;
        for (double x : pt.v) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("zero-checkpoint pooled even pairs is not separable") {
    // With uniform attention, "aa"+"bb" and "ab"+"ba" have the same mean but
    // opposite labels, so no direction can split them.
    const ModelParams p = ModelParams::zeros(4, 2.0);
    const PooledDataset pooled = pool_dataset(p, build_even_pairs_dataset(2));
    CHECK_THROWS_AS(solve_max_margin(pooled), NonSeparableError);
    CHECK_THROWS_AS(support_subset_oracle(pooled), NonSeparableError);
}

TEST_CASE("functional margin and the separability predicate") {
    const PooledDataset pooled =
        make_pooled(2, {{{1.0, 0.0}, +1}, {{0.0, 1.0}, -1}});
    const Vec good = {1.0, -1.0};
    const Vec zero = {0.0, 0.0};
    CHECK(min_functional_margin(pooled, good) == 1.0);
    CHECK(is_separable_by(pooled, good));
    CHECK(!is_separable_by(pooled, zero));
    Vec bad = good;
    for (double& x : bad) x = -x;
    CHECK(min_functional_margin(pooled, bad) == -1.0);
    CHECK(!is_separable_by(pooled, bad));
}

TEST_CASE("solver input validation") {
    CHECK_THROWS_AS(solve_max_margin(PooledDataset{}), std::invalid_argument);
    CHECK_THROWS_AS(support_subset_oracle(PooledDataset{}), std::invalid_argument);
    const PooledDataset big = random_separable(13, 3, 7u);
    CHECK_THROWS_AS(support_subset_oracle(big), std::invalid_argument);
    // A zero pooled point can never satisfy a margin constraint.
    const PooledDataset degenerate = make_pooled(2, {{{0.0, 0.0}, +1}});
    CHECK_THROWS_AS(solve_max_margin(degenerate), std::invalid_argument);
}

TEST_CASE("alignment is the cosine") {
    CHECK(alignment({1.0, 0.0}, {2.0, 0.0}) == doctest::Approx(1.0));
    CHECK(alignment({1.0, 0.0}, {0.0, 3.0}) == doctest::Approx(0.0));
    CHECK(alignment({1.0, 1.0}, {1.0, 0.0}) == doctest::Approx(1.0 / std::sqrt(2.0)));
}
