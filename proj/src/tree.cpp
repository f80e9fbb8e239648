#include "firetree/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace firetree {

bool RootedTree::is_ancestor_or_self(int anc, int v) const {
    while (v != -1) {
        if (v == anc) return true;
        v = parent[v];
    }
    return false;
}

RootedTree build_tree(const std::vector<int>& parent) {
    const int n = static_cast<int>(parent.size());
    if (n < 1) throw std::invalid_argument("tree needs at least the root");
    if (parent[0] != -1)
        throw std::invalid_argument("vertex 0 must be the root (parent -1)");

    RootedTree t;
    t.n = n;
    t.parent = parent;
    t.children.assign(n, {});
    for (int v = 1; v < n; ++v) {
        if (parent[v] < 0 || parent[v] >= n)
            throw std::invalid_argument("parent out of range at vertex " +
                                        std::to_string(v));
        if (parent[v] == v)
            throw std::invalid_argument("self-parent at vertex " +
                                        std::to_string(v));
        t.children[parent[v]].push_back(v);
    }

    // depths via BFS from the root; anything unreached sits on a parent cycle
    t.depth.assign(n, -1);
    t.depth[0] = 0;
    std::vector<int> queue = {0};
    for (size_t i = 0; i < queue.size(); ++i) {
        int u = queue[i];
        for (int c : t.children[u]) {
            t.depth[c] = t.depth[u] + 1;
            queue.push_back(c);
        }
    }
    if (static_cast<int>(queue.size()) != n)
        throw std::invalid_argument("parent vector contains a cycle");

    t.max_depth = *std::max_element(t.depth.begin(), t.depth.end());
    t.levels.assign(t.max_depth + 1, {});
    for (int v = 0; v < n; ++v) t.levels[t.depth[v]].push_back(v);
    for (int v = 1; v < n; ++v)
        if (t.children[v].empty()) t.leaves.push_back(v);
    if (n == 1) t.leaves = {};  // a lone root has nothing to burn or save
    return t;
}

long long FfInstance::total_weight() const {
    long long s = 0;
    for (int v = 1; v < tree.n; ++v) s += weight[v];
    return s;
}

bool FfInstance::unit_budgets() const {
    for (int l = 1; l <= tree.max_depth; ++l)
        if (budget[l] != 1) return false;
    return true;
}

long long RmfcInstance::mult_at(int level) const {
    if (level < 1 || level >= static_cast<int>(mult.size()))
        throw std::out_of_range("multiplier level out of range");
    return mult[level];
}

std::vector<long long> subtree_weights(const RootedTree& t,
                                       const std::vector<long long>& weight) {
    std::vector<long long> acc(weight.begin(), weight.begin() + t.n);
    // children have larger BFS depth, so a reverse sweep over levels
    // accumulates bottom-up
    for (int d = t.max_depth; d >= 1; --d)
        for (int v : t.levels[d]) acc[t.parent[v]] += acc[v];
    return acc;
}

void Plan::normalize() {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()),
                   vertices.end());
}

namespace {

CheckResult check_vertices(const RootedTree& t, const Plan& plan) {
    std::vector<char> seen(t.n, 0);
    for (int v : plan.vertices) {
        if (v <= 0 || v >= t.n)
            return {false, "plan contains invalid vertex " + std::to_string(v)};
        if (seen[v])
            return {false, "plan repeats vertex " + std::to_string(v)};
        seen[v] = 1;
    }
    return {true, ""};
}

}  // namespace

CheckResult validate_protection(const FfInstance& inst, const Plan& plan) {
    const RootedTree& t = inst.tree;
    if (auto c = check_vertices(t, plan); !c.ok) return c;
    std::vector<long long> picked(t.max_depth + 1, 0);
    for (int v : plan.vertices) ++picked[t.depth[v]];
    long long used = 0, avail = 0;
    for (int l = 1; l <= t.max_depth; ++l) {
        used += picked[l];
        avail += inst.budget[l];
        if (used > avail)
            return {false, "cumulative budget exceeded at level " +
                               std::to_string(l) + " (" + std::to_string(used) +
                               " > " + std::to_string(avail) + ")"};
    }
    return {true, ""};
}

CheckResult validate_protection(const RmfcInstance& inst, const Plan& plan,
                                long long B) {
    const RootedTree& t = inst.tree;
    if (auto c = check_vertices(t, plan); !c.ok) return c;
    std::vector<long long> picked(t.max_depth + 1, 0);
    for (int v : plan.vertices) ++picked[t.depth[v]];
    for (int l = 1; l <= t.max_depth; ++l) {
        if (picked[l] > B * inst.mult[l])
            return {false, "level " + std::to_string(l) + " holds " +
                               std::to_string(picked[l]) + " > B*mult = " +
                               std::to_string(B * inst.mult[l])};
    }
    return {true, ""};
}

CheckResult validate_protection_uniform(const RootedTree& t, long long B,
                                        const Plan& plan) {
    if (auto c = check_vertices(t, plan); !c.ok) return c;
    std::vector<long long> picked(t.max_depth + 1, 0);
    for (int v : plan.vertices) ++picked[t.depth[v]];
    long long used = 0;
    for (int l = 1; l <= t.max_depth; ++l) {
        used += picked[l];
        if (used > B * l)
            return {false, "cumulative uniform budget exceeded at level " +
                               std::to_string(l)};
    }
    return {true, ""};
}

long long saved_weight(const RootedTree& t, const std::vector<long long>& weight,
                       const Plan& plan) {
    std::vector<char> prot(t.n, 0);
    for (int v : plan.vertices) prot.at(v) = 1;
    long long total = 0;
    std::vector<char> saved(t.n, 0);
    for (int d = 1; d <= t.max_depth; ++d)
        for (int v : t.levels[d]) {
            saved[v] = prot[v] || saved[t.parent[v]];
            if (saved[v]) total += weight[v];
        }
    return total;
}

long long saved_weight(const FfInstance& inst, const Plan& plan) {
    return saved_weight(inst.tree, inst.weight, plan);
}

bool rmfc_feasible(const RootedTree& t, const Plan& plan) {
    std::vector<char> prot(t.n, 0);
    for (int v : plan.vertices) prot.at(v) = 1;
    std::vector<char> cut(t.n, 0);
    for (int d = 1; d <= t.max_depth; ++d)
        for (int v : t.levels[d]) cut[v] = prot[v] || cut[t.parent[v]];
    for (int u : t.leaves)
        if (!cut[u]) return false;
    return true;
}

}  // namespace firetree
