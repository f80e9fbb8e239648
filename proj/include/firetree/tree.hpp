#pragma once

#include <string>
#include <vector>

#include "firetree/rational.hpp"

namespace firetree {

// Rooted tree on vertices 0..n-1 with vertex 0 as the root. Levels are
// distances from the root; level 0 is just the root.
struct RootedTree {
    int n = 0;
    std::vector<int> parent;                  // parent[0] == -1
    std::vector<std::vector<int>> children;   // ascending ids
    std::vector<int> depth;
    std::vector<std::vector<int>> levels;     // levels[d], ascending ids
    std::vector<int> leaves;                  // ascending ids
    int max_depth = 0;

    bool is_leaf(int v) const { return children[v].empty(); }
    // walks parent pointers; fine at the sizes this project handles
    bool is_ancestor_or_self(int anc, int v) const;
};

// Validates and indexes a parent vector (parent[0] must be -1, every other
// entry must point at an existing vertex and all vertices must reach the
// root). Throws std::invalid_argument otherwise.
RootedTree build_tree(const std::vector<int>& parent);

// Firefighter instance: per-vertex weights, per-level budgets. weight[0]
// (the root) takes no part in any objective; budget[0] is unused padding so
// budget[l] is the budget of level l.
struct FfInstance {
    RootedTree tree;
    std::vector<long long> weight;
    std::vector<long long> budget;

    long long total_weight() const;
    bool unit_budgets() const;
};

// RMFC instance parameterized by the uniform budget B: level l admits
// B * mult[l] protected vertices. mult is all-ones for an original instance
// and 2^l for a compressed one.
struct RmfcInstance {
    RootedTree tree;
    std::vector<long long> mult;

    long long mult_at(int level) const;
};

// For every vertex u, total weight of the subtree rooted at u.
std::vector<long long> subtree_weights(const RootedTree& t,
                                       const std::vector<long long>& weight);

// A protection set. Vertices are pairwise distinct, never the root; for the
// firefighter reading, a vertex is protected no later than its own level
// (which the cumulative budget check below encodes).
struct Plan {
    std::vector<int> vertices;  // kept sorted ascending

    void normalize();
};

struct CheckResult {
    bool ok = false;
    std::string reason;  // empty iff ok
};

// Cumulative firefighter check: |S ∩ V_{<=l}| <= sum_{i<=l} budget[i] for
// every level l. Equivalent to the existence of a protection schedule.
CheckResult validate_protection(const FfInstance& inst, const Plan& plan);

// Per-level RMFC check: |S ∩ V_l| <= B * mult[l] for every level l.
CheckResult validate_protection(const RmfcInstance& inst, const Plan& plan,
                                long long B);

// Uniform-budget RMFC check on a bare tree, cumulative form:
// |S ∩ V_{<=l}| <= B * l for every level l.
CheckResult validate_protection_uniform(const RootedTree& t, long long B,
                                        const Plan& plan);

// Weight of all vertices separated from the root by the plan (union of the
// protected vertices' subtrees; overlaps counted once).
long long saved_weight(const RootedTree& t, const std::vector<long long>& weight,
                       const Plan& plan);
long long saved_weight(const FfInstance& inst, const Plan& plan);

// True iff every leaf has a protected vertex on its root path (the plan cuts
// all leaves off the root, ignoring budgets).
bool rmfc_feasible(const RootedTree& t, const Plan& plan);

}  // namespace firetree
