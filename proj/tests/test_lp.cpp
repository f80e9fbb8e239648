#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"

#include "corpus.hpp"
#include "firetree/lp.hpp"

using namespace firetree;

namespace {

Lp single_var_lp() {
    Lp lp;
    lp.num_vars = 1;
    lp.maximize = true;
    lp.objective = {Rat(1)};
    lp.rows.push_back({{{0, Rat(1)}}, Cmp::Le, Rat(3), "cap"});
    return lp;
}

// Exhaustive vertex enumeration: pick num_vars constraints from rows plus
// axis planes, solve the square rational system, keep feasible points, and
// report the best objective. Slow but independent of the simplex code.
std::optional<Rat> enumerate_optimum(const Lp& lp) {
    const int n = lp.num_vars;
    const int m = static_cast<int>(lp.rows.size());
    std::optional<Rat> best;
    std::vector<bool> mask(m + n, false);
    std::fill(mask.begin(), mask.begin() + n, true);
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n + 1));
    do {
        int r = 0;
        for (int i = 0; i < m + n && r < n; ++i) {
            if (!mask[i]) continue;
            for (int j = 0; j < n; ++j) a[r][j] = 0;
            if (i < m) {
                for (const auto& [var, coef] : lp.rows[i].terms) a[r][var] = coef;
                a[r][n] = lp.rows[i].rhs;
            } else {
                a[r][i - m] = 1;
                a[r][n] = 0;
            }
            ++r;
        }
        // Gaussian elimination over rationals
        bool singular = false;
        for (int col = 0; col < n && !singular; ++col) {
            int piv = -1;
            for (int row = col; row < n; ++row)
                if (sgn(a[row][col]) != 0) { piv = row; break; }
            if (piv < 0) { singular = true; break; }
            std::swap(a[col], a[piv]);
            for (int row = 0; row < n; ++row) {
                if (row == col || sgn(a[row][col]) == 0) continue;
                Rat f = a[row][col] / a[col][col];
                for (int j = col; j <= n; ++j) a[row][j] -= f * a[col][j];
            }
        }
        if (!singular) {
            std::vector<Rat> x(n);
            bool ok = true;
            for (int j = 0; j < n; ++j) {
                x[j] = a[j][n] / a[j][j];
                if (sgn(x[j]) < 0) ok = false;
            }
            for (int i = 0; i < m && ok; ++i) {
                Rat lhs(0);
                for (const auto& [var, coef] : lp.rows[i].terms) lhs += coef * x[var];
                switch (lp.rows[i].cmp) {
                    case Cmp::Le: ok = lhs <= lp.rows[i].rhs; break;
                    case Cmp::Ge: ok = lhs >= lp.rows[i].rhs; break;
                    case Cmp::Eq: ok = lhs == lp.rows[i].rhs; break;
                }
            }
            if (ok) {
                Rat obj(0);
                for (int j = 0; j < n; ++j) obj += lp.objective[j] * x[j];
                if (!best || (lp.maximize ? obj > *best : obj < *best)) best = obj;
            }
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return best;
}

bool satisfies(const Lp& lp, const std::vector<Rat>& x) {
    for (const Rat& v : x)
        if (sgn(v) < 0) return false;
    for (const auto& row : lp.rows) {
        Rat lhs(0);
        for (const auto& [var, coef] : row.terms) lhs += coef * x[var];
        bool ok = row.cmp == Cmp::Le   ? lhs <= row.rhs
                  : row.cmp == Cmp::Ge ? lhs >= row.rhs
                                       : lhs == row.rhs;
        if (!ok) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("one variable, one cap") {
    LpSolution sol = solve_vertex(single_var_lp());
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == 3);
    CHECK(sol.x[0] == 3);
    CHECK(active_set_rank(single_var_lp(), sol) == 1);
}

TEST_CASE("degenerate optimum lands on the lowest-index vertex") {
    Lp lp;
    lp.num_vars = 2;
    lp.maximize = true;
    lp.objective = {Rat(1), Rat(1)};
    lp.rows.push_back({{{0, Rat(1)}, {1, Rat(1)}}, Cmp::Le, Rat(1), "sum"});
    LpSolution sol = solve_vertex(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == 1);
    CHECK(sol.x[0] == 1);
    CHECK(sol.x[1] == 0);
    CHECK(active_set_rank(lp, sol) == 2);
}

TEST_CASE("minimization with lower bounds") {
    Lp lp;
    lp.num_vars = 4;  // x1 x2 x3 B
    lp.maximize = false;
    lp.objective = {Rat(0), Rat(0), Rat(0), Rat(1)};
    lp.rows.push_back(
        {{{0, Rat(1)}, {1, Rat(1)}, {2, Rat(1)}, {3, Rat(-1)}}, Cmp::Le, Rat(0), "budget"});
    for (int i = 0; i < 3; ++i)
        lp.rows.push_back({{{i, Rat(1)}}, Cmp::Ge, Rat(1), "path"});
    lp.rows.push_back({{{3, Rat(1)}}, Cmp::Ge, Rat(1), "Bmin"});
    LpSolution sol = solve_vertex(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == 3);
    CHECK(sol.x[0] == 1);
    CHECK(sol.x[1] == 1);
    CHECK(sol.x[2] == 1);
    CHECK(sol.x[3] == 3);
}

TEST_CASE("infeasible and unbounded are detected") {
    Lp bad;
    bad.num_vars = 1;
    bad.maximize = true;
    bad.objective = {Rat(1)};
    bad.rows.push_back({{{0, Rat(1)}}, Cmp::Le, Rat(0), "lo"});
    bad.rows.push_back({{{0, Rat(1)}}, Cmp::Ge, Rat(1), "hi"});
    CHECK(solve_vertex(bad).status == LpStatus::Infeasible);

    Lp open;
    open.num_vars = 1;
    open.maximize = true;
    open.objective = {Rat(1)};
    CHECK(solve_vertex(open).status == LpStatus::Unbounded);
}

TEST_CASE("firefighter relaxation on tiny trees") {
    FfInstance star = corpus::all_ones_instance(build_tree({-1, 0, 0}));
    LpSolution s1 = solve_vertex(build_lp_ff(star));
    REQUIRE(s1.status == LpStatus::Optimal);
    CHECK(s1.objective == 1);

    FfInstance path = corpus::all_ones_instance(build_tree({-1, 0, 1}));
    LpSolution s2 = solve_vertex(build_lp_ff(path));
    REQUIRE(s2.status == LpStatus::Optimal);
    CHECK(s2.objective == 2);
    CHECK(s2.x[0] == 1);
    CHECK(s2.x[1] == 0);
}

TEST_CASE("q-path equality fixings restrict the relaxation") {
    FfInstance path = corpus::all_ones_instance(build_tree({-1, 0, 1}));
    std::vector<std::vector<int>> q_paths = {{1, 2}};
    FfFixings none{&q_paths, 0};
    LpSolution s0 = solve_vertex(build_lp_ff(path, &none));
    REQUIRE(s0.status == LpStatus::Optimal);
    CHECK(s0.objective == 0);

    FfFixings take{&q_paths, 1};
    LpSolution s1 = solve_vertex(build_lp_ff(path, &take));
    REQUIRE(s1.status == LpStatus::Optimal);
    CHECK(s1.objective == 2);
}

TEST_CASE("rmfc relaxation with fixings") {
    RootedTree star = build_tree({-1, 0, 0, 0});
    RmfcInstance inst;
    inst.tree = star;
    inst.mult = {0, 2};
    LpSolution sol = solve_vertex(build_lp_rmfc_ad(inst, {}, {}));
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.x[3] == rat(3, 2));
    CHECK(sol.x[0] == 1);

    RootedTree pathT = build_tree({-1, 0, 1});
    RmfcInstance pinst;
    pinst.tree = pathT;
    pinst.mult = {0, 2, 4};
    LpSolution fixedLeaf = solve_vertex(build_lp_rmfc_ad(pinst, {2}, {}));
    REQUIRE(fixedLeaf.status == LpStatus::Optimal);
    CHECK(fixedLeaf.x[2] == 1);  // B pinned at its floor
    CHECK(fixedLeaf.x[1] == 1);

    CHECK(solve_vertex(build_lp_rmfc_ad(pinst, {}, {1, 2})).status == LpStatus::Infeasible);
    CHECK_THROWS_AS(build_lp_rmfc_ad(pinst, {1}, {1}), InvalidFixing);
}

TEST_CASE("tight and loose classification is support gated") {
    RootedTree path = build_tree({-1, 0, 1});

    auto a = classify_tight_loose(path, {Rat(1), Rat(0)});
    CHECK(a.tight == std::vector<int>{1});
    CHECK(a.loose.empty());

    auto b = classify_tight_loose(path, {rat(1, 2), rat(1, 2)});
    CHECK(b.loose == std::vector<int>{1});
    CHECK(b.tight == std::vector<int>{2});
    CHECK(b.path_sum[2] == 1);

    auto c = classify_tight_loose(path, {Rat(0), Rat(0)});
    CHECK(c.tight.empty());
    CHECK(c.loose.empty());

    CHECK_THROWS_AS(classify_tight_loose(path, {Rat(1), Rat(1)}), PathOverloaded);
    auto d = classify_tight_loose(path, {Rat(1), Rat(1)}, false);
    CHECK(d.tight == std::vector<int>{1});  // overloaded vertex 2 is neither
    CHECK(d.loose.empty());
}

TEST_CASE("simplex agrees with exhaustive vertex enumeration") {
    std::mt19937_64 rng(4242);
    int solved = 0;
    for (int trial = 0; trial < 30; ++trial) {
        Lp lp;
        lp.num_vars = 3 + static_cast<int>(rng() % 2);
        lp.maximize = true;
        lp.objective.resize(lp.num_vars);
        for (auto& c : lp.objective) c = Rat(static_cast<long>(rng() % 9) - 3);
        int rows = 3 + static_cast<int>(rng() % 3);
        for (int i = 0; i < rows; ++i) {
            LinearConstraint row;
            for (int j = 0; j < lp.num_vars; ++j) {
                long coef = static_cast<long>(rng() % 6) - 2;
                if (coef != 0) row.terms.push_back({j, Rat(coef)});
            }
            row.cmp = Cmp::Le;
            row.rhs = Rat(static_cast<long>(rng() % 7));
            row.tag = "r" + std::to_string(i);
            lp.rows.push_back(std::move(row));
        }
        LinearConstraint box;
        for (int j = 0; j < lp.num_vars; ++j) box.terms.push_back({j, Rat(1)});
        box.cmp = Cmp::Le;
        box.rhs = Rat(8);
        box.tag = "box";
        lp.rows.push_back(std::move(box));

        LpSolution sol = solve_vertex(lp);
        REQUIRE(sol.status == LpStatus::Optimal);  // origin feasible, box bounds
        std::optional<Rat> ref = enumerate_optimum(lp);
        REQUIRE(ref.has_value());
        CHECK(sol.objective == *ref);
        CHECK(satisfies(lp, sol.x));
        CHECK(active_set_rank(lp, sol) == lp.num_vars);
        ++solved;
    }
    CHECK(solved == 30);
}

TEST_CASE("relaxation solutions are sparse with a tight antichain") {
    auto trees = corpus::random_trees(50, 12, 909);
    for (const auto& wt : trees) {
        FfInstance inst = corpus::unit_budget_instance(wt.tree, wt.weight);
        LpSolution sol = solve_vertex(build_lp_ff(inst));
        REQUIRE(sol.status == LpStatus::Optimal);
        auto cls = classify_tight_loose(wt.tree, sol.x);
        CHECK(static_cast<int>(cls.loose.size()) <= wt.tree.max_depth);
        for (size_t i = 0; i < cls.tight.size(); ++i)
            for (size_t j = i + 1; j < cls.tight.size(); ++j) {
                CHECK_FALSE(wt.tree.is_ancestor_or_self(cls.tight[i], cls.tight[j]));
                CHECK_FALSE(wt.tree.is_ancestor_or_self(cls.tight[j], cls.tight[i]));
            }
        LpSolution again = solve_vertex(build_lp_ff(inst));
        CHECK(again.x == sol.x);
    }
}
