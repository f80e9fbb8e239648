#include "firetree/rmfc.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace firetree {

namespace {

// x is variable-indexed (entry u-1 for vertex u); returns per-level sums.
std::vector<Rat> level_sums(const RootedTree& t, const std::vector<Rat>& x) {
    std::vector<Rat> s(t.max_depth + 1, Rat(0));
    for (int l = 1; l <= t.max_depth; ++l)
        for (int v : t.levels[l]) s[l] += x[v - 1];
    return s;
}

// Vertex-indexed path sums: out[v] = sum of x over the root-to-v path (root excluded).
std::vector<Rat> path_sums(const RootedTree& t, const std::vector<Rat>& x) {
    std::vector<Rat> psum(t.n, Rat(0));
    for (int l = 1; l <= t.max_depth; ++l)
        for (int v : t.levels[l]) psum[v] = psum[t.parent[v]] + x[v - 1];
    return psum;
}

void require_doubling_budgets(const RmfcInstance& inst, const char* who) {
    for (int l = 1; l <= inst.tree.max_depth; ++l)
        if (inst.mult_at(l) != (1LL << l))
            throw std::invalid_argument(std::string(who) +
                                        " expects doubling level budgets 2^l");
}

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

// Smallest integer B with |plan cap V_l| <= mult_l * B on every level.
long long certify_level_budget(const RmfcInstance& inst, const Plan& plan) {
    const RootedTree& t = inst.tree;
    std::vector<long long> cnt(t.max_depth + 1, 0);
    for (int v : plan.vertices) {
        if (v <= 0 || v >= t.n) throw std::invalid_argument("plan vertex out of range");
        ++cnt[t.depth[v]];
    }
    long long best = 1;
    for (int l = 1; l <= t.max_depth; ++l)
        if (cnt[l] > 0) best = std::max(best, ceil_div(cnt[l], inst.mult_at(l)));
    return best;
}

bool in_sorted(const std::vector<int>& v, int key) {
    return std::binary_search(v.begin(), v.end(), key);
}

std::vector<int> with_inserted(std::vector<int> v, int key) {
    v.insert(std::lower_bound(v.begin(), v.end(), key), key);
    return v;
}

}  // namespace

std::vector<int> slice_cover(const RootedTree& t, const std::vector<Rat>& x,
                             const Rat& B, const Rat& eta, int k) {
    if (eta <= 0 || eta > 1) throw std::invalid_argument("slice_cover: eta must be in (0,1]");
    if (k < 1) throw std::invalid_argument("slice_cover: k must be >= 1");
    if (static_cast<int>(x.size()) < t.n - 1)
        throw std::invalid_argument("slice_cover: x too short");
    const int L = t.max_depth;
    if (L == 0) return {};
    const int l1 = ilog_iter_floor(L, k);
    const int l2 = ilog_iter_floor(L, k - 1);
    if (l1 >= l2) return {};

    for (int v = 1; v < t.n; ++v)
        if (sgn(x[v - 1]) != 0 && (t.depth[v] <= l1 || t.depth[v] > l2))
            throw std::invalid_argument("slice_cover: x supported outside the slice");
    std::vector<Rat> lsum = level_sums(t, x);
    for (int l = 1; l <= L; ++l)
        if (lsum[l] > B * rat(1L << l))
            throw std::invalid_argument("slice_cover: x violates the budget B at level " +
                                        std::to_string(l));

    std::vector<Rat> psum = path_sums(t, x);
    std::vector<int> heavy_leaves;
    for (int u : t.leaves)
        if (psum[u] >= eta) heavy_leaves.push_back(u);
    if (heavy_leaves.empty()) return {};

    // variables: slice vertices, ascending id
    std::vector<int> var_of(t.n, -1);
    std::vector<int> vert;
    for (int v = 1; v < t.n; ++v)
        if (t.depth[v] > l1 && t.depth[v] <= l2) {
            var_of[v] = static_cast<int>(vert.size());
            vert.push_back(v);
        }

    Lp lp;
    lp.num_vars = static_cast<int>(vert.size());
    lp.maximize = false;
    lp.objective.assign(lp.num_vars, Rat(1));
    lp.var_names.resize(lp.num_vars);
    for (int i = 0; i < lp.num_vars; ++i)
        lp.var_names[i] = "z" + std::to_string(vert[i]);
    const Rat scaled = B / eta;
    for (int l = l1 + 1; l <= l2; ++l) {
        LinearConstraint row;
        for (int v : t.levels[l]) row.terms.push_back({var_of[v], 1});
        row.cmp = Cmp::Le;
        row.rhs = scaled * rat(1L << l);
        row.tag = "slice budget " + std::to_string(l);
        lp.rows.push_back(std::move(row));
    }
    for (int u : heavy_leaves) {
        LinearConstraint row;
        for (int v = u; v != 0; v = t.parent[v])
            if (var_of[v] >= 0) row.terms.push_back({var_of[v], 1});
        row.cmp = Cmp::Ge;
        row.rhs = 1;
        row.tag = "cover " + std::to_string(u);
        lp.rows.push_back(std::move(row));
    }

    LpSolution sol = solve_vertex(lp);
    if (sol.status != LpStatus::Optimal)
        throw std::logic_error("slice_cover: cover LP not optimal although x/eta is feasible");

    std::vector<Rat> zf(t.n - 1, Rat(0));
    for (int i = 0; i < lp.num_vars; ++i) zf[vert[i] - 1] = sol.x[i];
    TightLoose tl = classify_tight_loose(t, zf, false);
    std::set<int> picked(tl.loose.begin(), tl.loose.end());
    for (int v : vert)
        if (zf[v - 1] == 1) picked.insert(v);
    std::vector<int> R(picked.begin(), picked.end());

    std::vector<char> hit(t.n, 0);
    for (int v : R) hit[v] = 1;
    for (int u : heavy_leaves) {
        bool ok = false;
        for (int v = u; v != 0 && !ok; v = t.parent[v]) ok = hit[v];
        if (!ok) throw std::logic_error("slice_cover: rounded set misses a heavy leaf");
    }
    std::vector<long long> cnt(L + 1, 0);
    for (int v : R) ++cnt[t.depth[v]];
    for (int l = l1 + 1; l <= l2; ++l)
        if (rat(cnt[l]) > (B / eta + 1) * rat(1L << l))
            throw std::logic_error("slice_cover: level " + std::to_string(l) +
                                   " exceeds the ((1/eta)B+1)*2^l bound");
    return R;
}

std::vector<int> bottom_cover(const RootedTree& t, const std::vector<Rat>& x,
                              const Rat& B, const Rat& mu, int q) {
    if (mu <= 0 || mu > 1) throw std::invalid_argument("bottom_cover: mu must be in (0,1]");
    if (q < 1) throw std::invalid_argument("bottom_cover: q must be >= 1");
    if (static_cast<int>(x.size()) < t.n - 1)
        throw std::invalid_argument("bottom_cover: x too short");
    const int L = t.max_depth;
    if (L == 0) return {};
    const int h = ilog_iter_floor(L, q);
    for (int v = 1; v < t.n; ++v)
        if (sgn(x[v - 1]) != 0 && t.depth[v] <= h)
            throw std::invalid_argument("bottom_cover: x supported at or above level " +
                                        std::to_string(h));
    std::vector<Rat> lsum = level_sums(t, x);
    for (int l = 1; l <= L; ++l)
        if (lsum[l] > B * rat(1L << l))
            throw std::invalid_argument("bottom_cover: x violates the budget B at level " +
                                        std::to_string(l));

    const Rat eta = mu / q;
    std::set<int> picked;
    for (int k = 1; k <= q; ++k) {
        const int a = ilog_iter_floor(L, k);
        const int b = ilog_iter_floor(L, k - 1);
        std::vector<Rat> xk(t.n - 1, Rat(0));
        for (int v = 1; v < t.n; ++v)
            if (t.depth[v] > a && t.depth[v] <= b) xk[v - 1] = x[v - 1];
        std::vector<int> Rk = slice_cover(t, xk, B, eta, k);
        picked.insert(Rk.begin(), Rk.end());
    }
    std::vector<int> R(picked.begin(), picked.end());

    std::vector<Rat> psum = path_sums(t, x);
    std::vector<char> hit(t.n, 0);
    for (int v : R) hit[v] = 1;
    for (int u : t.leaves) {
        if (psum[u] < mu) continue;
        bool ok = false;
        for (int v = u; v != 0 && !ok; v = t.parent[v]) ok = hit[v];
        if (!ok) throw std::logic_error("bottom_cover: rounded set misses a heavy leaf");
    }
    std::vector<long long> cnt(L + 1, 0);
    for (int v : R) ++cnt[t.depth[v]];
    const Rat per_level = (rat(q) / mu) * B + 1;
    for (int l = 1; l <= L; ++l)
        if (rat(cnt[l]) > per_level * rat(1L << l))
            throw std::logic_error("bottom_cover: level " + std::to_string(l) +
                                   " exceeds the ((q/mu)B+1)*2^l bound");
    return R;
}

RmfcSolveResult big_b_solve(const RmfcInstance& inst) {
    const RootedTree& t = inst.tree;
    RmfcSolveResult out;
    out.lp_budget = 1;
    if (t.leaves.empty()) return out;
    require_doubling_budgets(inst, "big_b_solve");
    const int L = t.max_depth;

    LpSolution root = solve_vertex(build_lp_rmfc_ad(inst, {}, {}));
    if (root.status != LpStatus::Optimal)
        throw std::logic_error("big_b_solve: root LP not optimal");
    const Rat B = root.x[t.n - 1];
    out.lp_budget = B;
    const int h = ilog_iter_floor(L, 1);

    std::vector<Rat> ybot(t.n - 1, Rat(0));
    for (int v = 1; v < t.n; ++v)
        if (t.depth[v] > h) ybot[v - 1] = root.x[v - 1];
    std::vector<Rat> pbot = path_sums(t, ybot);
    std::vector<int> uncovered;  // leaves whose bottom mass is under 1/2
    const Rat half = rat(1, 2);
    for (int u : t.leaves)
        if (pbot[u] < half) uncovered.push_back(u);

    std::vector<int> r1 = bottom_cover(t, ybot, B, half, 1);
    std::set<int> picked(r1.begin(), r1.end());

    if (!uncovered.empty()) {
        // doubled top mass over-covers every uncovered leaf strictly ...
        std::vector<Rat> qv(t.n - 1, Rat(0));
        for (int v = 1; v < t.n; ++v)
            if (t.depth[v] <= h) qv[v - 1] = 2 * root.x[v - 1];
        std::vector<Rat> pq = path_sums(t, qv);
        for (int u : uncovered)
            if (pq[u] <= 1)
                throw std::logic_error("big_b_solve: doubled top mass fails strict cover");
        // ... and saturates to exactly 1 after one deepest-first reduction sweep
        for (int l = h; l >= 1; --l) {
            for (int v : t.levels[l]) {
                if (sgn(qv[v - 1]) == 0) continue;
                std::vector<Rat> cur = path_sums(t, qv);
                bool constrained = false;
                Rat slack;
                for (int u : uncovered) {
                    bool under = false;
                    for (int w = u; w != 0 && !under; w = t.parent[w]) under = (w == v);
                    if (!under) continue;
                    Rat s = cur[u] - 1;
                    if (!constrained || s < slack) slack = s;
                    constrained = true;
                }
                if (!constrained) {
                    qv[v - 1] = 0;
                } else {
                    if (sgn(slack) < 0)
                        throw std::logic_error("big_b_solve: reduction sweep went below 1");
                    qv[v - 1] -= std::min(qv[v - 1], slack);
                }
            }
        }
        std::vector<Rat> pq2 = path_sums(t, qv);
        for (int u : uncovered)
            if (pq2[u] != 1)
                throw std::logic_error("big_b_solve: saturated top mass is not exactly 1");
        std::vector<Rat> qsum = level_sums(t, qv);
        for (int l = 1; l <= h; ++l)
            if (qsum[l] > 2 * B * rat(1L << l))
                throw std::logic_error("big_b_solve: saturated top mass exceeds 2B budgets");

        // re-optimize the top part alone, forcing full coverage of the leaves
        // the bottom rounding may miss
        std::vector<int> var_of(t.n, -1);
        std::vector<int> vert;
        for (int l = 1; l <= h; ++l)
            for (int v : t.levels[l]) {
                var_of[v] = static_cast<int>(vert.size());
                vert.push_back(v);
            }
        Lp top;
        top.num_vars = static_cast<int>(vert.size()) + 1;
        const int bvar = top.num_vars - 1;
        top.maximize = false;
        top.objective.assign(top.num_vars, Rat(0));
        top.objective[bvar] = 1;
        top.var_names.resize(top.num_vars);
        for (size_t i = 0; i < vert.size(); ++i)
            top.var_names[i] = "z" + std::to_string(vert[i]);
        top.var_names[bvar] = "B";
        for (int l = 1; l <= h; ++l) {
            LinearConstraint row;
            for (int v : t.levels[l]) row.terms.push_back({var_of[v], 1});
            row.terms.push_back({bvar, rat(-(1L << l))});
            row.cmp = Cmp::Le;
            row.rhs = 0;
            row.tag = "top budget " + std::to_string(l);
            top.rows.push_back(std::move(row));
        }
        for (int u : uncovered) {
            LinearConstraint row;
            for (int v = u; v != 0; v = t.parent[v])
                if (var_of[v] >= 0) row.terms.push_back({var_of[v], 1});
            row.cmp = Cmp::Eq;
            row.rhs = 1;
            row.tag = "top path " + std::to_string(u);
            top.rows.push_back(std::move(row));
        }
        {
            LinearConstraint row;
            row.terms.push_back({bvar, 1});
            row.cmp = Cmp::Ge;
            row.rhs = 1;
            row.tag = "Bmin";
            top.rows.push_back(std::move(row));
        }
        LpSolution ts = solve_vertex(top);
        if (ts.status != LpStatus::Optimal)
            throw std::logic_error("big_b_solve: top LP not optimal");
        if (ts.x[bvar] > 2 * B)
            throw std::logic_error("big_b_solve: top LP budget exceeds 2B");

        std::vector<Rat> zf(t.n - 1, Rat(0));
        for (size_t i = 0; i < vert.size(); ++i) zf[vert[i] - 1] = ts.x[i];
        TightLoose tl = classify_tight_loose(t, zf, false);
        picked.insert(tl.loose.begin(), tl.loose.end());
        for (int v : vert)
            if (zf[v - 1] == 1) picked.insert(v);
    }

    out.plan.vertices.assign(picked.begin(), picked.end());
    if (!rmfc_feasible(t, out.plan))
        throw std::logic_error("big_b_solve: rounded plan leaves a leaf uncut");
    out.budget = certify_level_budget(inst, out.plan);
    return out;
}

namespace {

struct EnumCtx {
    const RmfcInstance& inst;
    int h = 0;
    long long node_cap = 0;
    long long nodes = 0;
    std::set<std::pair<std::vector<int>, std::vector<int>>> visited;
    std::vector<EnumState> out;
};

void check_clean_pair(const RootedTree& t, const std::vector<int>& A,
                      const std::vector<int>& D) {
    std::vector<int> both;
    std::set_intersection(A.begin(), A.end(), D.begin(), D.end(),
                          std::back_inserter(both));
    if (!both.empty()) throw std::logic_error("enum: A and D overlap");
    for (const std::vector<int>* side : {&A, &D})
        for (int u : *side)
            for (int p = t.parent[u]; p != 0; p = t.parent[p])
                if (!in_sorted(D, p))
                    throw std::logic_error("enum: fixing pair is not clean at " +
                                           std::to_string(u));
}

void enum_rec(EnumCtx& c, std::vector<int> A, std::vector<int> D, long long gamma) {
    if (!c.visited.insert({A, D}).second) return;
    if (++c.nodes > c.node_cap)
        throw EnumerationBudgetExceeded("enum explored more than " +
                                        std::to_string(c.node_cap) + " states");
    const RootedTree& t = c.inst.tree;
    check_clean_pair(t, A, D);

    LpSolution sol = solve_vertex(build_lp_rmfc_ad(c.inst, A, D));
    if (sol.status != LpStatus::Optimal) return;
    Rat B = sol.x[t.n - 1];
    if (!le_log2(B, static_cast<unsigned long>(t.max_depth))) return;

    EnumState st;
    st.A = A;
    st.D = D;
    st.x.assign(sol.x.begin(), sol.x.end() - 1);
    st.B = B;
    c.out.push_back(std::move(st));
    if (gamma == 0) return;

    std::vector<Rat> xbot(t.n - 1, Rat(0));
    for (int v = 1; v < t.n; ++v)
        if (t.depth[v] > c.h) xbot[v - 1] = sol.x[v - 1];
    std::vector<Rat> pbot = path_sums(t, xbot);
    const Rat two_thirds = rat(2, 3);
    std::set<int> frontier;
    for (int u : t.leaves) {
        if (pbot[u] >= two_thirds) continue;
        // topmost still-undecided path vertex within the guessing levels
        std::vector<int> top_path;
        for (int v = u; v != 0; v = t.parent[v])
            if (t.depth[v] <= c.h) top_path.push_back(v);
        int fu = -1;
        for (auto it = top_path.rbegin(); it != top_path.rend(); ++it)
            if (!in_sorted(D, *it)) {
                fu = *it;
                break;
            }
        if (fu < 0)
            throw std::logic_error("enum: leaf " + std::to_string(u) +
                                   " has its whole top path discarded yet lacks bottom mass");
        frontier.insert(fu);
    }
    for (int u : A) frontier.erase(u);
    if (frontier.empty()) return;
    if (rat(static_cast<long>(frontier.size()), 3) >= rat(1L << (c.h + 1)) * B)
        throw std::logic_error("enum: frontier width exceeds the 3*2^(h+1)*B bound");
    for (int u : frontier) {
        enum_rec(c, with_inserted(A, u), D, gamma - 1);
        enum_rec(c, A, with_inserted(D, u), gamma - 1);
    }
}

}  // namespace

std::vector<EnumState> enum_states(const RmfcInstance& inst, std::vector<int> A,
                                   std::vector<int> D, long long gamma,
                                   long long node_cap) {
    require_doubling_budgets(inst, "enum_states");
    std::sort(A.begin(), A.end());
    std::sort(D.begin(), D.end());
    EnumCtx c{inst};
    c.h = std::max(0, ilog_iter_floor(inst.tree.max_depth, 2));
    c.node_cap = node_cap;
    enum_rec(c, std::move(A), std::move(D), gamma);
    return c.out;
}

RmfcSolveResult enum_solve(const RmfcInstance& inst, long long node_cap) {
    const RootedTree& t = inst.tree;
    RmfcSolveResult out;
    out.lp_budget = 1;
    if (t.leaves.empty()) return out;
    require_doubling_budgets(inst, "enum_solve");
    const int L = t.max_depth;
    const int h = std::max(0, ilog_iter_floor(L, 2));
    const long long logL = ilog_iter_floor(L, 1);
    const long long gamma = static_cast<long long>(h) * (1LL << (h + 1)) * logL;

    std::vector<EnumState> triples = enum_states(inst, {}, {}, gamma, node_cap);
    std::sort(triples.begin(), triples.end(),
              [](const EnumState& a, const EnumState& b) {
                  if (a.A.size() != b.A.size()) return a.A.size() < b.A.size();
                  if (a.D.size() != b.D.size()) return a.D.size() < b.D.size();
                  if (a.A != b.A) return a.A < b.A;
                  return a.D < b.D;
              });

    std::vector<int> top_vertices;
    for (int l = 1; l <= h; ++l)
        top_vertices.insert(top_vertices.end(), t.levels[l].begin(), t.levels[l].end());
    std::sort(top_vertices.begin(), top_vertices.end());

    bool have = false;
    for (const EnumState& st : triples) {
        std::vector<int> D2;
        for (int v : top_vertices)
            if (!in_sorted(st.A, v)) D2.push_back(v);
        LpSolution sol = solve_vertex(build_lp_rmfc_ad(inst, st.A, D2));
        if (sol.status != LpStatus::Optimal) continue;
        const Rat Bbar = sol.x[t.n - 1];
        std::vector<Rat> ybot(t.n - 1, Rat(0));
        for (int v = 1; v < t.n; ++v)
            if (t.depth[v] > h) ybot[v - 1] = sol.x[v - 1];
        std::vector<int> R = bottom_cover(t, ybot, Bbar, rat(1), 2);
        std::set<int> picked(R.begin(), R.end());
        picked.insert(st.A.begin(), st.A.end());
        Plan plan;
        plan.vertices.assign(picked.begin(), picked.end());
        if (!rmfc_feasible(t, plan))
            throw std::logic_error("enum_solve: candidate leaves a leaf uncut");
        long long b = certify_level_budget(inst, plan);
        if (!have || b < out.budget) {
            have = true;
            out.plan = std::move(plan);
            out.budget = b;
            out.lp_budget = Bbar;
        }
    }

    // protecting every root child always works; only used when no enumeration
    // candidate does better (for instance when the optimum budget exceeds log L)
    Plan all_first;
    all_first.vertices = t.levels[1];
    std::sort(all_first.vertices.begin(), all_first.vertices.end());
    long long b = certify_level_budget(inst, all_first);
    if (!have || b < out.budget) {
        out.plan = std::move(all_first);
        out.budget = b;
        out.lp_budget = rat(b);
    }
    return out;
}

RmfcPipelineResult rmfc_pipeline(const RootedTree& tree, long long node_cap) {
    RmfcPipelineResult out;
    auto [cinst, trace] = compress_rmfc(tree);
    out.trace = trace;
    if (cinst.tree.leaves.empty()) return out;

    RmfcSolveResult big = big_b_solve(cinst);
    RmfcSolveResult en = enum_solve(cinst, node_cap);
    const bool use_en = en.budget < big.budget;
    const RmfcSolveResult& best = use_en ? en : big;
    out.used_enum = use_en;
    out.compressed_budget = best.budget;

    out.plan = lift_plan(trace, best.plan);
    if (!rmfc_feasible(tree, out.plan))
        throw std::logic_error("rmfc_pipeline: lifted plan leaves a leaf uncut");

    std::vector<long long> cum(tree.max_depth + 1, 0);
    for (int v : out.plan.vertices) ++cum[tree.depth[v]];
    long long budget = 1;
    long long run = 0;
    for (int l = 1; l <= tree.max_depth; ++l) {
        run += cum[l];
        if (run > 0) budget = std::max(budget, ceil_div(run, l));
    }
    if (budget > 2 * best.budget)
        throw std::logic_error("rmfc_pipeline: lift needs more than twice the level budget");
    out.budget = budget;
    return out;
}

}  // namespace firetree
