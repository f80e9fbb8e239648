#include "corpus.hpp"

#include <random>

namespace corpus {

using firetree::FfInstance;
using firetree::RootedTree;

namespace {

struct Ref {
    int size;
    int idx;
};

// non-increasing (size, idx) sequences summing to `remaining`, each one a
// multiset of canonical subtrees
void choose_children(const std::vector<std::vector<std::vector<int>>>& by_size,
                     int remaining, Ref bound, std::vector<Ref>& chosen,
                     std::vector<std::vector<Ref>>& out) {
    if (remaining == 0) {
        out.push_back(chosen);
        return;
    }
    int top = std::min(remaining, bound.size);
    for (int s = top; s >= 1; --s) {
        int hi = (s == bound.size) ? bound.idx
                                   : static_cast<int>(by_size[s].size()) - 1;
        for (int i = hi; i >= 0; --i) {
            chosen.push_back({s, i});
            choose_children(by_size, remaining - s, {s, i}, chosen, out);
            chosen.pop_back();
        }
    }
}

std::vector<int> compose(const std::vector<std::vector<std::vector<int>>>& by_size,
                         const std::vector<Ref>& children, int n) {
    std::vector<int> parent(n);
    parent[0] = -1;
    int offset = 1;
    for (const Ref& c : children) {
        const std::vector<int>& sub = by_size[c.size][c.idx];
        for (int j = 0; j < c.size; ++j)
            parent[offset + j] = (j == 0) ? 0 : offset + sub[j];
        offset += c.size;
    }
    return parent;
}

}  // namespace

std::vector<RootedTree> exhaustive_trees(int max_n) {
    std::vector<std::vector<std::vector<int>>> by_size(max_n + 1);
    if (max_n >= 1) by_size[1] = {{-1}};
    for (int n = 2; n <= max_n; ++n) {
        std::vector<std::vector<Ref>> multisets;
        std::vector<Ref> chosen;
        Ref bound{n - 1, static_cast<int>(by_size[n - 1].size()) - 1};
        choose_children(by_size, n - 1, bound, chosen, multisets);
        for (const std::vector<Ref>& ms : multisets)
            by_size[n].push_back(compose(by_size, ms, n));
    }
    std::vector<RootedTree> trees;
    for (int n = 1; n <= max_n; ++n)
        for (const std::vector<int>& parent : by_size[n])
            trees.push_back(firetree::build_tree(parent));
    return trees;
}

std::vector<WeightedTree> random_trees(int count, int max_n, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::vector<WeightedTree> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        int n = 2 + static_cast<int>(rng() % static_cast<unsigned long long>(max_n - 1));
        std::vector<int> parent(n);
        parent[0] = -1;
        for (int v = 1; v < n; ++v)
            parent[v] = static_cast<int>(rng() % static_cast<unsigned long long>(v));
        WeightedTree wt;
        wt.tree = firetree::build_tree(parent);
        wt.weight.assign(n, 0);
        for (int v = 1; v < n; ++v)
            wt.weight[v] = static_cast<long long>(rng() % 11);
        out.push_back(std::move(wt));
    }
    return out;
}

std::vector<FfInstance> random_budgeted(int count, int max_n, long long max_budget,
                                        unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::vector<FfInstance> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        int n = 3 + static_cast<int>(rng() % static_cast<unsigned long long>(max_n - 2));
        std::vector<int> parent(n);
        parent[0] = -1;
        for (int v = 1; v < n; ++v)
            parent[v] = static_cast<int>(rng() % static_cast<unsigned long long>(v));
        FfInstance inst;
        inst.tree = firetree::build_tree(parent);
        inst.weight.assign(n, 0);
        for (int v = 1; v < n; ++v)
            inst.weight[v] = static_cast<long long>(rng() % 11);
        inst.budget.assign(inst.tree.max_depth + 1, 0);
        for (int l = 1; l <= inst.tree.max_depth; ++l)
            inst.budget[l] =
                1 + static_cast<long long>(rng() % static_cast<unsigned long long>(max_budget));
        out.push_back(std::move(inst));
    }
    return out;
}

FfInstance unit_budget_instance(const RootedTree& t, const std::vector<long long>& weight) {
    FfInstance inst;
    inst.tree = t;
    inst.weight = weight;
    inst.budget.assign(t.max_depth + 1, 1);
    if (!inst.budget.empty()) inst.budget[0] = 0;
    return inst;
}

FfInstance all_ones_instance(const RootedTree& t) {
    std::vector<long long> w(t.n, 1);
    w[0] = 0;
    return unit_budget_instance(t, w);
}

}  // namespace corpus
