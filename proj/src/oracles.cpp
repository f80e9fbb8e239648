#include "firetree/oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>

#include "firetree/transforms.hpp"

namespace firetree {

namespace {

void require_size(int n, int max_n, const char* what) {
    if (n > max_n)
        throw InstanceTooLarge(std::string(what) + ": n = " + std::to_string(n) +
                               " exceeds the exhaustive-search cap " +
                               std::to_string(max_n));
}

Plan mask_to_plan(std::uint64_t mask) {
    Plan p;
    for (int b = 0; mask >> b; ++b)
        if ((mask >> b) & 1) p.vertices.push_back(b + 1);
    return p;
}

// Shared scratch for the mask sweeps below; vertex b+1 <-> bit b.
struct MaskScan {
    const RootedTree& t;
    std::vector<int> level_count;
    std::vector<char> saved;

    explicit MaskScan(const RootedTree& tree)
        : t(tree), level_count(tree.max_depth + 1, 0), saved(tree.n, 0) {}

    void load(std::uint64_t mask) {
        std::fill(level_count.begin(), level_count.end(), 0);
        saved[0] = 0;
        for (int d = 1; d <= t.max_depth; ++d)
            for (int v : t.levels[d]) {
                bool picked = (mask >> (v - 1)) & 1;
                if (picked) ++level_count[d];
                saved[v] = picked || saved[t.parent[v]];
            }
    }

    bool within_cumulative(const std::vector<long long>& cum) const {
        long long used = 0;
        for (int d = 1; d <= t.max_depth; ++d) {
            used += level_count[d];
            if (used > cum[d]) return false;
        }
        return true;
    }

    bool within_per_level(long long B, const std::vector<long long>& mult) const {
        for (int d = 1; d <= t.max_depth; ++d)
            if (level_count[d] > B * mult[d]) return false;
        return true;
    }

    bool cuts_all_leaves() const {
        for (int v : t.leaves)
            if (!saved[v]) return false;
        return true;
    }

    long long saved_value(const std::vector<long long>& weight) const {
        long long s = 0;
        for (int v = 1; v < t.n; ++v)
            if (saved[v]) s += weight[v];
        return s;
    }
};

}  // namespace

FfExact brute_force_ff(const FfInstance& inst, int max_n) {
    const RootedTree& t = inst.tree;
    require_size(t.n, max_n, "brute_force_ff");
    std::vector<long long> cum(t.max_depth + 1, 0);
    for (int d = 1; d <= t.max_depth; ++d) cum[d] = cum[d - 1] + inst.budget[d];

    FfExact best;
    std::uint64_t best_mask = 0;
    MaskScan scan(t);
    std::uint64_t total = 1ull << (t.n - 1);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        scan.load(mask);
        if (!scan.within_cumulative(cum)) continue;
        long long val = scan.saved_value(inst.weight);
        if (mask == 0 || val > best.value) {
            best.value = val;
            best_mask = mask;
        }
    }
    best.plan = mask_to_plan(best_mask);
    best.nodes = static_cast<long long>(total);
    return best;
}

namespace {

std::optional<Plan> first_cutting_mask(const RootedTree& t, long long* nodes,
                                       const std::function<bool(const MaskScan&)>&
                                           budget_ok) {
    MaskScan scan(t);
    std::uint64_t total = 1ull << (t.n - 1);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (nodes) ++*nodes;
        scan.load(mask);
        if (!budget_ok(scan)) continue;
        if (scan.cuts_all_leaves()) return mask_to_plan(mask);
    }
    return std::nullopt;
}

RmfcExact search_min_budget(
    const RootedTree& t, long long hi,
    const std::function<std::optional<Plan>(long long, long long*)>& attempt) {
    RmfcExact out;
    long long lo = 1;
    std::optional<Plan> witness = attempt(hi, &out.nodes);
    while (lo < hi) {
        long long mid = lo + (hi - lo) / 2;
        std::optional<Plan> p = attempt(mid, &out.nodes);
        if (p) {
            witness = std::move(p);
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    out.b_opt = lo;
    out.plan = std::move(*witness);
    return out;
}

}  // namespace

std::optional<Plan> rmfc_feasible_at_uniform(const RootedTree& tree,
                                             long long B, int max_n) {
    require_size(tree.n, max_n, "rmfc_feasible_at_uniform");
    std::vector<long long> cum(tree.max_depth + 1, 0);
    for (int d = 1; d <= tree.max_depth; ++d) cum[d] = B * d;
    return first_cutting_mask(tree, nullptr, [&](const MaskScan& s) {
        return s.within_cumulative(cum);
    });
}

std::optional<Plan> rmfc_feasible_at(const RmfcInstance& inst, long long B,
                                     int max_n) {
    require_size(inst.tree.n, max_n, "rmfc_feasible_at");
    return first_cutting_mask(inst.tree, nullptr, [&](const MaskScan& s) {
        return s.within_per_level(B, inst.mult);
    });
}

RmfcExact brute_force_rmfc(const RootedTree& tree, int max_n) {
    require_size(tree.n, max_n, "brute_force_rmfc");
    long long hi =
        std::max<long long>(1, tree.max_depth >= 1
                                   ? static_cast<long long>(tree.levels[1].size())
                                   : 1);
    std::vector<long long> cum(tree.max_depth + 1, 0);
    return search_min_budget(
        tree, hi, [&](long long B, long long* nodes) -> std::optional<Plan> {
            for (int d = 1; d <= tree.max_depth; ++d) cum[d] = B * d;
            return first_cutting_mask(tree, nodes, [&](const MaskScan& s) {
                return s.within_cumulative(cum);
            });
        });
}

RmfcExact brute_force_rmfc(const RmfcInstance& inst, int max_n) {
    const RootedTree& t = inst.tree;
    require_size(t.n, max_n, "brute_force_rmfc");
    long long hi = 1;
    if (t.max_depth >= 1) {
        long long k = static_cast<long long>(t.levels[1].size());
        long long m = inst.mult[1];
        hi = std::max<long long>(1, (k + m - 1) / m);
    }
    return search_min_budget(
        t, hi, [&](long long B, long long* nodes) -> std::optional<Plan> {
            return first_cutting_mask(t, nodes, [&](const MaskScan& s) {
                return s.within_per_level(B, inst.mult);
            });
        });
}

GreedyResult greedy_hartnell_li(const FfInstance& inst) {
    GreedyResult out;
    out.plan.vertices = prune_picks(inst, 1);
    out.plan.normalize();
    out.value = saved_weight(inst, out.plan);
    return out;
}

PendantExact brute_force_ff_pendant(const FfInstance& inst, int base_n,
                                    int max_base_n) {
    const RootedTree& t = inst.tree;
    if (base_n < 1 || base_n > t.n)
        throw std::invalid_argument("brute_force_ff_pendant: bad base size");
    require_size(base_n, max_base_n, "brute_force_ff_pendant");
    if (!inst.unit_budgets())
        throw std::invalid_argument("brute_force_ff_pendant: budgets must be 1");
    for (int v = 1; v < t.n; ++v)
        if (inst.weight[v] != 1)
            throw std::invalid_argument("brute_force_ff_pendant: weights must be 1");

    std::vector<std::vector<int>> pendants(base_n);
    std::vector<long long> bundle(base_n, 0);
    for (int v = base_n; v < t.n; ++v) {
        int p = t.parent[v];
        if (p >= base_n || !t.is_leaf(v))
            throw std::invalid_argument(
                "brute_force_ff_pendant: vertex " + std::to_string(v) +
                " is not a pendant leaf of a base vertex");
        pendants[p].push_back(v);
        ++bundle[p];
    }
    for (int v = 1; v < base_n; ++v)
        if (t.parent[v] >= base_n)
            throw std::invalid_argument(
                "brute_force_ff_pendant: base vertex parented outside the base");

    int L = t.max_depth;  // pendant of v sits at depth[v] + 1 <= L
    const long long kNoState = -1;
    std::vector<char> saved(base_n, 0);
    std::vector<long long> picked_at(L + 1, 0), burned_bundle(L + 1, 0);
    // dp[l][u]: best pendant fill using levels 1..l with u protections total
    std::vector<std::vector<long long>> dp(L + 1,
                                           std::vector<long long>(L + 1, kNoState));

    std::uint64_t total = 1ull << (base_n - 1);
    PendantExact best;
    best.value = -1;
    std::uint64_t best_mask = 0;

    auto run_dp = [&](std::uint64_t mask) -> long long {
        std::fill(picked_at.begin(), picked_at.end(), 0);
        std::fill(burned_bundle.begin(), burned_bundle.end(), 0);
        long long base_val = 0;
        saved[0] = 0;
        for (int d = 1; d <= t.max_depth; ++d)
            for (int v : t.levels[d]) {
                if (v >= base_n) continue;
                bool picked = (mask >> (v - 1)) & 1;
                if (picked) ++picked_at[d];
                saved[v] = picked || saved[t.parent[v]];
                if (saved[v])
                    base_val += 1 + bundle[v];
                else if (d + 1 <= L)
                    burned_bundle[d + 1] += bundle[v];
            }
        for (auto& row : dp) std::fill(row.begin(), row.end(), kNoState);
        dp[0][0] = 0;
        for (int l = 1; l <= L; ++l)
            for (int u = 0; u <= l - 1; ++u) {
                if (dp[l - 1][u] == kNoState) continue;
                long long after_base = u + picked_at[l];
                if (after_base > l) continue;
                long long pmax = std::min<long long>(burned_bundle[l],
                                                     l - after_base);
                for (long long p = 0; p <= pmax; ++p) {
                    long long& cell = dp[l][after_base + p];
                    if (cell < dp[l - 1][u] + p) cell = dp[l - 1][u] + p;
                }
            }
        long long fill = kNoState;
        for (int u = 0; u <= L; ++u) fill = std::max(fill, dp[L][u]);
        return fill == kNoState ? kNoState : base_val + fill;
    };

    for (std::uint64_t mask = 0; mask < total; ++mask) {
        long long val = run_dp(mask);
        if (val > best.value) {
            best.value = val;
            best_mask = mask;
        }
    }
    best.nodes = static_cast<long long>(total);

    // rebuild the winning schedule and turn the fill counts into leaf ids
    run_dp(best_mask);
    std::vector<long long> fill_at(L + 1, 0);
    {
        int u = 0;
        long long bestv = kNoState;
        for (int c = 0; c <= L; ++c)
            if (dp[L][c] > bestv) {
                bestv = dp[L][c];
                u = c;
            }
        for (int l = L; l >= 1; --l) {
            bool found = false;
            for (int up = 0; up <= l - 1 && !found; ++up) {
                if (dp[l - 1][up] == kNoState) continue;
                long long p = u - up - picked_at[l];
                if (p < 0 || p > burned_bundle[l]) continue;
                if (dp[l - 1][up] + p == dp[l][u]) {
                    fill_at[l] = p;
                    u = up;
                    found = true;
                }
            }
        }
    }
    best.plan = mask_to_plan(best_mask);
    for (int l = 1; l <= L; ++l) {
        long long need = fill_at[l];
        if (need == 0) continue;
        for (int v : t.levels[l - 1]) {
            if (v >= base_n || need == 0) break;
            if (v >= 1 && !saved[v] && ((best_mask >> (v - 1)) & 1) == 0) {
                long long take = std::min<long long>(need, bundle[v]);
                for (long long i = 0; i < take; ++i)
                    best.plan.vertices.push_back(pendants[v][i]);
                need -= take;
            }
        }
    }
    best.plan.normalize();
    return best;
}

}  // namespace firetree
