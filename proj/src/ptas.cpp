#include "firetree/ptas.hpp"

#include <omp.h>

#include <algorithm>
#include <string>

namespace firetree {

std::vector<int> heavy_set(const FfInstance& inst, const Rat& eta) {
    if (eta < 0)
        throw std::invalid_argument("heavy_set: eta must be nonnegative");
    std::vector<long long> sw = subtree_weights(inst.tree, inst.weight);
    std::vector<int> h;
    for (int v = 1; v < inst.tree.n; ++v)
        if (rat(sw[v], 1) >= eta) h.push_back(v);
    return h;
}

HeavyDecomposition compute_q(const FfInstance& inst,
                             const std::vector<int>& heavy, const Rat& eta) {
    const RootedTree& t = inst.tree;
    HeavyDecomposition out;
    out.eta = eta;
    out.heavy = heavy;

    std::vector<char> is_heavy(t.n, 0);
    for (int v : heavy) is_heavy[v] = 1;

    std::vector<char> alive(t.n, 1);
    std::vector<long long> sw(t.n);
    std::vector<char> cur_heavy(t.n), heavy_below(t.n);
    std::vector<int> qbar;
    for (;;) {
        for (int v = 0; v < t.n; ++v) sw[v] = alive[v] ? inst.weight[v] : 0;
        sw[0] = 0;
        for (int d = t.max_depth; d >= 1; --d)
            for (int v : t.levels[d])
                if (alive[v]) sw[t.parent[v]] += sw[v];
        for (int v = 0; v < t.n; ++v) {
            cur_heavy[v] = v != 0 && alive[v] && rat(sw[v], 1) >= eta;
            heavy_below[v] = 0;
        }
        for (int d = t.max_depth; d >= 1; --d)
            for (int v : t.levels[d])
                if (alive[v] && (cur_heavy[v] || heavy_below[v]))
                    heavy_below[t.parent[v]] = 1;
        int pick = -1;
        for (int v = 1; v < t.n && pick == -1; ++v)
            if (cur_heavy[v] && !heavy_below[v]) pick = v;
        if (pick == -1) break;
        qbar.push_back(pick);
        std::vector<int> stack{pick};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            alive[v] = 0;
            for (int c : t.children[v])
                if (alive[c]) stack.push_back(c);
        }
    }

    out.q = qbar;
    for (int v : heavy) {
        int heavy_kids = 0;
        for (int c : t.children[v]) heavy_kids += is_heavy[c];
        if (heavy_kids >= 2) out.q.push_back(v);
    }
    std::sort(out.q.begin(), out.q.end());
    out.q.erase(std::unique(out.q.begin(), out.q.end()), out.q.end());

    std::vector<char> in_q(t.n, 0);
    for (int v : out.q) in_q[v] = 1;
    for (int v : out.q) {
        std::vector<int> path{v};
        for (int p = t.parent[v]; p != 0 && !in_q[p]; p = t.parent[p])
            path.push_back(p);
        out.q_paths.push_back(std::move(path));
    }
    return out;
}

Plan reoptimize_tight(const FfInstance& inst, const std::vector<int>& tight) {
    Plan plan;
    if (tight.empty()) return plan;
    const RootedTree& t = inst.tree;
    for (size_t i = 0; i < tight.size(); ++i)
        for (size_t j = i + 1; j < tight.size(); ++j)
            if (t.is_ancestor_or_self(tight[i], tight[j]) ||
                t.is_ancestor_or_self(tight[j], tight[i]))
                throw std::invalid_argument(
                    "reoptimize_tight: vertices share a root path");

    Lp lp = build_lp_ff_support(inst, tight);
    LpSolution sol = solve_vertex(lp);
    if (sol.status != LpStatus::Optimal)
        throw std::logic_error("reoptimize_tight: restricted LP did not solve");
    for (size_t k = 0; k < tight.size(); ++k) {
        if (sol.x[k] == 1)
            plan.vertices.push_back(tight[k]);
        else if (sol.x[k] != 0)
            throw NonIntegralVertex("reoptimize_tight: variable for vertex " +
                                    std::to_string(tight[k]) + " is " +
                                    rat_str(sol.x[k]));
    }
    plan.normalize();
    return plan;
}

namespace {

struct ZBest {
    bool has = false;
    Rat obj;
    std::uint64_t mask = 0;

    // order: larger objective first, then smaller mask
    void offer(const Rat& o, std::uint64_t m) {
        if (!has || o > obj || (o == obj && m < mask)) {
            has = true;
            obj = o;
            mask = m;
        }
    }
};

}  // namespace

PtasCoreResult ptas_core(const FfInstance& inst, const Rat& eps, int enum_cap,
                         int threads) {
    if (eps <= 0 || eps >= 1)
        throw std::invalid_argument("ptas_core: eps must lie in (0,1)");
    const RootedTree& t = inst.tree;
    PtasCoreResult out;
    long long total = inst.total_weight();
    int L = t.max_depth;
    if (L == 0 || total == 0) return out;  // empty plan is optimal

    Rat eta = eps * eps * rat(total, 12LL * L);
    out.decomp = compute_q(inst, heavy_set(inst, eta), eta);
    int k = static_cast<int>(out.decomp.q.size());
    if (k > enum_cap)
        throw EnumerationBudgetExceeded(
            "ptas_core: |Q| = " + std::to_string(k) +
            " exceeds the enumeration cap " + std::to_string(enum_cap));

    const long long nz = 1LL << k;
    int T = threads >= 1 ? threads : omp_get_max_threads();
    std::vector<ZBest> local(T);
    std::vector<int> local_max_loose(T, 0);
    std::string err;

#pragma omp parallel for schedule(dynamic) num_threads(T)
    for (long long mi = 0; mi < nz; ++mi) {
        int tid = omp_get_thread_num();
        try {
            FfFixings fix{&out.decomp.q_paths,
                          static_cast<std::uint64_t>(mi)};
            LpSolution sol = solve_vertex(build_lp_ff(inst, &fix));
            if (sol.status != LpStatus::Optimal) continue;
            TightLoose tl = classify_tight_loose(t, sol.x, true);
            int nl = static_cast<int>(tl.loose.size());
            local_max_loose[tid] = std::max(local_max_loose[tid], nl);
            if (nl > L)
                throw std::logic_error(
                    "loose-vertex sparsity violated: " + std::to_string(nl) +
                    " loose vertices on " + std::to_string(L) + " levels");
            local[tid].offer(sol.objective, static_cast<std::uint64_t>(mi));
        } catch (const std::exception& e) {
#pragma omp critical
            if (err.empty()) err = e.what();
        }
    }
    if (!err.empty()) throw std::logic_error("ptas_core: " + err);

    ZBest best;
    for (int i = 0; i < T; ++i) {
        out.max_loose = std::max(out.max_loose, local_max_loose[i]);
        if (local[i].has) best.offer(local[i].obj, local[i].mask);
    }
    if (!best.has)
        throw std::logic_error("ptas_core: no feasible guess (Z = empty must be)");
    out.lp_solves = nz;
    out.z_mask = best.mask;
    out.lp_value = best.obj;

    // re-solve the winner and build the certificate
    FfFixings fix{&out.decomp.q_paths, best.mask};
    Lp lp = build_lp_ff(inst, &fix);
    LpSolution sol = solve_vertex(lp);
    if (sol.status != LpStatus::Optimal || sol.objective != best.obj)
        throw std::logic_error("ptas_core: winner re-solve disagreed");
    TightLoose tl = classify_tight_loose(t, sol.x, true);
    out.tight = tl.tight;
    out.loose = tl.loose;

    std::vector<char> is_heavy(t.n, 0);
    for (int v : out.decomp.heavy) is_heavy[v] = 1;
    std::vector<int> path_of(t.n, -1);
    for (size_t i = 0; i < out.decomp.q_paths.size(); ++i)
        for (int v : out.decomp.q_paths[i]) path_of[v] = static_cast<int>(i);

    std::vector<Rat> y = sol.x;
    for (int u : tl.loose) {
        if (!is_heavy[u]) {
            y[u - 1] = 0;
            continue;
        }
        int i = path_of[u];
        if (i < 0)
            throw std::logic_error("ptas_core: heavy vertex on no anchor run");
        int deepest = -1;
        for (int v : out.decomp.q_paths[i])
            if (sol.x[v - 1] > 0 && (deepest == -1 || t.depth[v] > t.depth[deepest]))
                deepest = v;
        if (deepest == -1 || tl.path_sum[deepest] != 1)
            throw std::logic_error("ptas_core: run has no tight receiver");
        y[deepest - 1] += y[u - 1];
        y[u - 1] = 0;
    }

    Rat val_y = 0;
    for (int j = 0; j < lp.num_vars; ++j) val_y += lp.objective[j] * y[j];
    out.cert_gap = sol.objective - val_y;
    out.cert_bound = rat(static_cast<long long>(tl.loose.size()), 1) * eta;
    if (out.cert_gap > out.cert_bound)
        throw std::logic_error("ptas_core: redistribution lost more than |loose|*eta");
    for (const LinearConstraint& row : lp.rows) {
        Rat lhs = 0;
        for (const auto& [var, coeff] : row.terms) lhs += coeff * y[var];
        bool ok = row.cmp == Cmp::Le   ? lhs <= row.rhs
                  : row.cmp == Cmp::Ge ? lhs >= row.rhs
                                       : lhs == row.rhs;
        if (!ok)
            throw std::logic_error("ptas_core: redistributed vector violates " +
                                   row.tag);
    }

    out.plan = reoptimize_tight(inst, tl.tight);
    out.value = saved_weight(inst, out.plan);
    return out;
}

PtasResult ptas_pipeline(const FfInstance& original, const Rat& eps,
                         int enum_cap, int threads) {
    if (eps <= 0 || eps >= 1)
        throw std::invalid_argument("ptas_pipeline: eps must lie in (0,1)");
    if (!original.unit_budgets())
        throw std::invalid_argument(
            "ptas_pipeline: budgets must be 1 per level; reduce general "
            "budgets first");

    PtasResult out;
    out.eps = eps;
    auto [compressed, compress_tr] = compress_ff(original, eps / 3);
    long long lambda = rat_ceil(rat(3, 1) / eps);
    auto [pruned, prune_tr] = prune(compressed, lambda);

    out.core = ptas_core(pruned, eps, enum_cap, threads);
    Plan on_compressed = lift_plan(prune_tr, out.core.plan);
    out.plan = lift_plan(compress_tr, on_compressed);
    out.value = saved_weight(original, out.plan);
    out.compress_trace = std::move(compress_tr);
    out.prune_trace = std::move(prune_tr);

    CheckResult ck = validate_protection(original, out.plan);
    if (!ck.ok)
        throw std::logic_error("ptas_pipeline: lifted plan infeasible: " +
                               ck.reason);
    if (out.value < out.core.value)
        throw std::logic_error("ptas_pipeline: lifting lost value");
    return out;
}

}  // namespace firetree
