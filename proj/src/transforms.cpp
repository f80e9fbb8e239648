#include "firetree/transforms.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace firetree {

namespace {

constexpr long long kMaxTransformedVertices = 10'000'000;

std::string join_longs(const std::vector<long long>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os.str();
}

std::string join_ints(const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os.str();
}

std::vector<int> identity_map(int n) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    return m;
}

struct Contraction {
    RootedTree tree;
    std::vector<long long> weight;  // group sums on the survivors
    std::vector<int> new_to_old;
    std::vector<int> old_to_new;    // every old vertex -> its absorber's new id
};

// Merges every vertex on a non-kept level into its nearest kept ancestor.
// Levels 0 and 1 must be kept; survivors keep their relative id order, so
// the root stays vertex 0.
Contraction contract_levels(const RootedTree& t,
                            const std::vector<long long>& weight,
                            const std::vector<bool>& keep_level) {
    std::vector<int> absorber(t.n);
    absorber[0] = 0;
    for (int d = 1; d <= t.max_depth; ++d)
        for (int v : t.levels[d])
            absorber[v] = keep_level[d] ? v : absorber[t.parent[v]];

    Contraction c;
    c.old_to_new.assign(t.n, -1);
    for (int v = 0; v < t.n; ++v)
        if (absorber[v] == v) {
            c.old_to_new[v] = static_cast<int>(c.new_to_old.size());
            c.new_to_old.push_back(v);
        }
    c.weight.assign(c.new_to_old.size(), 0);
    for (int v = 0; v < t.n; ++v) {
        int a = c.old_to_new[absorber[v]];
        c.weight[a] += weight[v];
        c.old_to_new[v] = a;
    }
    std::vector<int> par(c.new_to_old.size(), -1);
    for (size_t i = 1; i < c.new_to_old.size(); ++i) {
        int v = c.new_to_old[i];
        par[i] = c.old_to_new[absorber[t.parent[v]]];
    }
    c.tree = build_tree(par);
    return c;
}

// New budget vector after contraction: old kept level d becomes the new
// level equal to the number of kept levels in [1, d].
std::vector<long long> remap_budgets(const std::vector<long long>& budget,
                                     const std::vector<bool>& keep_level,
                                     int old_depth, int new_depth) {
    std::vector<long long> out(new_depth + 1, 0);
    int rank = 0;
    for (int d = 1; d <= old_depth; ++d)
        if (keep_level[d]) {
            ++rank;
            if (rank <= new_depth) out[rank] = budget[d];
        }
    return out;
}

}  // namespace

Plan lift_plan(const TransformTrace& trace, const Plan& plan) {
    Plan out;
    for (int v : plan.vertices) {
        if (v < 0 || v >= static_cast<int>(trace.vertex_map.size()))
            throw std::invalid_argument(
                "lift_plan: vertex outside the transformed instance");
        int u = trace.vertex_map[v];
        if (u >= 0) out.vertices.push_back(u);
    }
    out.normalize();
    return out;
}

std::pair<FfInstance, TransformTrace> general_to_unit_budget(
    const FfInstance& inst) {
    const RootedTree& t = inst.tree;
    for (int d = 1; d <= t.max_depth; ++d)
        if (inst.budget[d] <= 0)
            throw std::invalid_argument(
                "general_to_unit_budget: level " + std::to_string(d) +
                " has no budget; contract zero-budget levels first");

    long long new_n = 1;
    for (int v = 1; v < t.n; ++v) new_n += inst.budget[t.depth[v]];
    if (new_n > kMaxTransformedVertices)
        throw std::length_error("general_to_unit_budget: result too large");

    std::vector<int> par(new_n, -1), vmap(new_n, -1);
    std::vector<long long> w(new_n, 0);
    std::vector<int> newid(t.n, 0);
    int next = 1;
    vmap[0] = 0;
    for (int d = 1; d <= t.max_depth; ++d)
        for (int v : t.levels[d]) {
            int p = newid[t.parent[v]];
            for (long long i = 1; i < inst.budget[d]; ++i) {
                par[next] = p;
                vmap[next] = v;
                p = next++;
            }
            par[next] = p;
            vmap[next] = v;
            w[next] = inst.weight[v];
            newid[v] = next++;
        }

    FfInstance out;
    out.tree = build_tree(par);
    out.weight = std::move(w);
    out.budget.assign(out.tree.max_depth + 1, 1);
    out.budget[0] = 0;

    TransformTrace trace;
    trace.kind = TransformKind::UnitBudget;
    trace.vertex_map = std::move(vmap);
    trace.params["orig_n"] = std::to_string(t.n);
    trace.params["new_n"] = std::to_string(out.tree.n);
    return {std::move(out), std::move(trace)};
}

std::pair<FfInstance, TransformTrace> weighted_to_unit_weight(
    const FfInstance& inst, const Rat& delta, const Rat& alpha) {
    const RootedTree& t = inst.tree;
    if (!inst.unit_budgets())
        throw std::invalid_argument(
            "weighted_to_unit_weight requires unit budgets");
    if (delta <= 0 || alpha <= 0 || alpha > 1)
        throw std::invalid_argument(
            "weighted_to_unit_weight needs delta > 0 and alpha in (0, 1]");
    long long wmax = 0;
    for (int v = 1; v < t.n; ++v) wmax = std::max(wmax, inst.weight[v]);
    if (wmax <= 0)
        throw std::invalid_argument(
            "weighted_to_unit_weight requires a positive weight");

    Rat scale = delta * rat(wmax, 2LL * t.n);
    Rat bundle_factor = rat(4LL * t.n, 1) / (alpha * delta);
    std::vector<long long> bundle(t.n, 0);
    long long new_n = t.n;
    for (int v = 1; v < t.n; ++v) {
        long long w1 = rat_floor(rat(inst.weight[v], 1) / scale);
        bundle[v] = rat_floor(bundle_factor * rat(w1, 1));
        new_n += bundle[v];
        if (new_n > kMaxTransformedVertices)
            throw std::length_error("weighted_to_unit_weight: result too large");
    }

    std::vector<int> par(t.parent.begin(), t.parent.end());
    std::vector<int> vmap = identity_map(t.n);
    par.reserve(new_n);
    vmap.reserve(new_n);
    for (int v = 1; v < t.n; ++v)
        for (long long i = 0; i < bundle[v]; ++i) {
            par.push_back(v);
            vmap.push_back(-1);
        }

    FfInstance out;
    out.tree = build_tree(par);
    out.weight.assign(out.tree.n, 1);
    out.weight[0] = 0;
    out.budget.assign(out.tree.max_depth + 1, 1);
    out.budget[0] = 0;

    TransformTrace trace;
    trace.kind = TransformKind::UnitWeight;
    trace.vertex_map = std::move(vmap);
    trace.params["delta"] = rat_str(delta);
    trace.params["alpha"] = rat_str(alpha);
    trace.params["scale"] = rat_str(scale);
    trace.params["orig_n"] = std::to_string(t.n);
    trace.params["new_n"] = std::to_string(out.tree.n);
    return {std::move(out), std::move(trace)};
}

std::pair<FfInstance, TransformTrace> contract_zero_budget_levels(
    const FfInstance& inst) {
    const RootedTree& t = inst.tree;
    std::vector<bool> keep(t.max_depth + 1, true);
    std::vector<long long> removed;
    for (int d = 2; d <= t.max_depth; ++d)
        if (inst.budget[d] == 0) {
            keep[d] = false;
            removed.push_back(d);
        }
    Contraction c = contract_levels(t, inst.weight, keep);

    FfInstance out;
    out.weight = std::move(c.weight);
    out.budget = remap_budgets(inst.budget, keep, t.max_depth,
                               c.tree.max_depth);
    out.tree = std::move(c.tree);

    TransformTrace trace;
    trace.kind = TransformKind::ContractZeroLevels;
    trace.vertex_map = std::move(c.new_to_old);
    trace.params["orig_n"] = std::to_string(t.n);
    trace.params["new_n"] = std::to_string(out.tree.n);
    trace.params["removed_levels"] = join_longs(removed);
    return {std::move(out), std::move(trace)};
}

std::pair<FfInstance, TransformTrace> compress_ff(const FfInstance& inst,
                                                  const Rat& delta) {
    const RootedTree& t = inst.tree;
    if (!inst.unit_budgets())
        throw std::invalid_argument("compress_ff requires unit budgets");
    if (delta <= 0)
        throw std::invalid_argument("compress_ff requires delta > 0");

    int L = t.max_depth;
    if (L == 0) {
        FfInstance out = inst;
        TransformTrace trace;
        trace.kind = TransformKind::CompressFf;
        trace.vertex_map = identity_map(t.n);
        trace.params["delta"] = rat_str(delta);
        trace.params["levels"] = "";
        return {std::move(out), std::move(trace)};
    }

    // geometric level grid 1, ceil(1+delta), ceil((1+delta)^2), ..., plus L
    std::set<long long> grid;
    for (Rat p = 1; rat_ceil(p) <= L; p *= (1 + delta)) grid.insert(rat_ceil(p));
    grid.insert(L);

    std::vector<long long> kept_levels(grid.begin(), grid.end());
    std::vector<long long> pushed(L + 1, 0);
    std::vector<long long> grid_budgets;
    long long prev = 0;
    for (long long l : kept_levels) {
        pushed[l] = l - prev;
        grid_budgets.push_back(l - prev);
        prev = l;
    }

    std::vector<bool> keep(L + 1, false);
    keep[0] = true;
    keep[1] = true;
    for (int d = 2; d <= L; ++d) keep[d] = pushed[d] > 0;
    Contraction c = contract_levels(t, inst.weight, keep);

    FfInstance out;
    out.weight = std::move(c.weight);
    out.budget = remap_budgets(pushed, keep, L, c.tree.max_depth);
    out.tree = std::move(c.tree);

    TransformTrace trace;
    trace.kind = TransformKind::CompressFf;
    trace.vertex_map = std::move(c.new_to_old);
    trace.params["delta"] = rat_str(delta);
    trace.params["levels"] = join_longs(kept_levels);
    trace.params["level_budgets"] = join_longs(grid_budgets);
    trace.params["orig_n"] = std::to_string(t.n);
    trace.params["new_n"] = std::to_string(out.tree.n);
    return {std::move(out), std::move(trace)};
}

std::pair<RmfcInstance, TransformTrace> compress_rmfc(const RootedTree& tree) {
    int L = tree.max_depth;
    if (L <= 1) {
        RmfcInstance out;
        out.tree = tree;
        if (L == 1) out.mult = {0, 2};
        TransformTrace trace;
        trace.kind = TransformKind::CompressRmfc;
        trace.vertex_map = identity_map(tree.n);
        trace.params["orig_n"] = std::to_string(tree.n);
        trace.params["new_n"] = std::to_string(tree.n);
        trace.params["orig_depth"] = std::to_string(L);
        trace.params["padded_depth"] = std::to_string(L);
        trace.params["new_depth"] = std::to_string(L);
        return {std::move(out), std::move(trace)};
    }

    int lg = static_cast<int>(ilog2_floor(static_cast<unsigned long>(L)));
    if ((1LL << lg) < L) ++lg;
    long long Lpad = 1LL << lg;

    // hang a path from the root down to the padded depth
    std::vector<int> par(tree.parent.begin(), tree.parent.end());
    if (Lpad > L) {
        int prev = 0;
        for (long long i = 0; i < Lpad; ++i) {
            par.push_back(prev);
            prev = static_cast<int>(par.size()) - 1;
        }
    }
    RootedTree aug = build_tree(par);

    std::vector<long long> leaf_w(aug.n, 0);
    for (int v : aug.leaves) leaf_w[v] = 1;

    std::vector<bool> keep(Lpad + 1, false);
    keep[0] = true;
    for (int j = 1; j <= lg; ++j) keep[(1LL << j) - 1] = true;
    Contraction c = contract_levels(aug, leaf_w, keep);

    // everything strictly below a vertex that absorbed a leaf is redundant
    std::vector<bool> drop(c.tree.n, false);
    for (int d = 1; d <= c.tree.max_depth; ++d)
        for (int v : c.tree.levels[d]) {
            int p = c.tree.parent[v];
            drop[v] = drop[p] || c.weight[p] > 0;
        }

    std::vector<int> survivors;
    std::vector<int> pos(c.tree.n, -1);
    for (int v = 0; v < c.tree.n; ++v)
        if (!drop[v]) {
            pos[v] = static_cast<int>(survivors.size());
            survivors.push_back(v);
        }
    std::vector<int> fpar(survivors.size(), -1);
    std::vector<int> vmap(survivors.size(), -1);
    for (size_t i = 0; i < survivors.size(); ++i) {
        int v = survivors[i];
        if (v != 0) fpar[i] = pos[c.tree.parent[v]];
        int old_aug = c.new_to_old[v];
        vmap[i] = old_aug < tree.n ? old_aug : -1;
    }

    RmfcInstance out;
    out.tree = build_tree(fpar);
    out.mult.assign(out.tree.max_depth + 1, 0);
    for (int l = 1; l <= out.tree.max_depth; ++l) out.mult[l] = 1LL << l;

    TransformTrace trace;
    trace.kind = TransformKind::CompressRmfc;
    trace.vertex_map = std::move(vmap);
    trace.params["orig_n"] = std::to_string(tree.n);
    trace.params["new_n"] = std::to_string(out.tree.n);
    trace.params["orig_depth"] = std::to_string(L);
    trace.params["padded_depth"] = std::to_string(Lpad);
    trace.params["new_depth"] = std::to_string(out.tree.max_depth);
    return {std::move(out), std::move(trace)};
}

std::vector<int> prune_picks(const FfInstance& inst, long long lambda) {
    if (lambda < 1)
        throw std::invalid_argument("prune needs lambda >= 1");
    const RootedTree& t = inst.tree;
    std::vector<long long> sw = subtree_weights(t, inst.weight);
    std::vector<char> covered(t.n, 0);  // some ancestor (or self) picked
    std::vector<int> picks;
    for (int d = 1; d <= t.max_depth; ++d) {
        std::vector<int> cand;
        for (int v : t.levels[d]) {
            covered[v] = covered[t.parent[v]];
            if (!covered[v]) cand.push_back(v);
        }
        long long cap = lambda * inst.budget[d];
        if (cap < static_cast<long long>(cand.size())) {
            std::sort(cand.begin(), cand.end(), [&](int a, int b) {
                if (sw[a] != sw[b]) return sw[a] > sw[b];
                return a < b;
            });
            cand.resize(cap);
        }
        for (int v : cand) {
            covered[v] = 1;
            picks.push_back(v);
        }
    }
    std::sort(picks.begin(), picks.end());
    return picks;
}

std::pair<FfInstance, TransformTrace> prune(const FfInstance& inst,
                                            long long lambda) {
    const RootedTree& t = inst.tree;
    std::vector<int> picks = prune_picks(inst, lambda);

    std::vector<char> picked(t.n, 0), in_sub(t.n, 0), keep(t.n, 0);
    for (int v : picks) picked[v] = 1;
    keep[0] = 1;
    for (int d = 1; d <= t.max_depth; ++d)
        for (int v : t.levels[d])
            in_sub[v] = picked[v] || in_sub[t.parent[v]];
    for (int v : picks)
        for (int u = v; u != -1 && !keep[u]; u = t.parent[u]) keep[u] = 1;
    for (int v = 0; v < t.n; ++v) keep[v] |= in_sub[v];

    std::vector<int> vmap;
    std::vector<int> newid(t.n, -1);
    for (int v = 0; v < t.n; ++v)
        if (keep[v]) {
            newid[v] = static_cast<int>(vmap.size());
            vmap.push_back(v);
        }
    std::vector<int> par(vmap.size(), -1);
    std::vector<long long> w(vmap.size(), 0);
    for (size_t i = 1; i < vmap.size(); ++i) {
        int v = vmap[i];
        par[i] = newid[t.parent[v]];
        if (in_sub[v]) w[i] = inst.weight[v];
    }

    FfInstance out;
    out.tree = build_tree(par);
    out.weight = std::move(w);
    out.budget.assign(out.tree.max_depth + 1, 0);
    for (int d = 1; d <= out.tree.max_depth; ++d) out.budget[d] = inst.budget[d];

    TransformTrace trace;
    trace.kind = TransformKind::Prune;
    trace.vertex_map = std::move(vmap);
    trace.params["lambda"] = std::to_string(lambda);
    trace.params["picks"] = join_ints(picks);
    trace.params["orig_n"] = std::to_string(t.n);
    trace.params["new_n"] = std::to_string(out.tree.n);
    return {std::move(out), std::move(trace)};
}

}  // namespace firetree
