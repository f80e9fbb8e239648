#pragma once

#include <optional>
#include <stdexcept>

#include "firetree/tree.hpp"

namespace firetree {

struct InstanceTooLarge : std::length_error {
    using std::length_error::length_error;
};

struct FfExact {
    long long value = 0;
    Plan plan;
    long long nodes = 0;  // candidate sets examined
};

struct RmfcExact {
    long long b_opt = 1;
    Plan plan;
    long long nodes = 0;
};

// Exact maximum saved weight by exhausting all protection sets that satisfy
// the cumulative budgets. Ties go to the first set in ascending-bitmask
// order, which is automatically free of redundant picks.
FfExact brute_force_ff(const FfInstance& inst, int max_n = 16);

// Smallest integer B >= 1 for which some protection set cuts every leaf off
// the root, by binary search over B with exhaustive feasibility checks.
// Uniform model: cumulative budget B*l; multiplier model: per-level
// B*mult[l].
RmfcExact brute_force_rmfc(const RootedTree& tree, int max_n = 16);
RmfcExact brute_force_rmfc(const RmfcInstance& inst, int max_n = 16);

// First (ascending-bitmask) plan that cuts all leaves within the stated
// budget, or nullopt if none exists.
std::optional<Plan> rmfc_feasible_at(const RmfcInstance& inst, long long B,
                                     int max_n = 16);
std::optional<Plan> rmfc_feasible_at_uniform(const RootedTree& tree,
                                             long long B, int max_n = 16);

struct GreedyResult {
    long long value = 0;
    Plan plan;
};

// Level-by-level greedy: at each level protect the budget[l] heaviest-subtree
// vertices not already cut off, ties by smaller id. A 1/2-approximation.
GreedyResult greedy_hartnell_li(const FfInstance& inst);

struct PendantExact {
    long long value = 0;
    Plan plan;
    long long nodes = 0;
};

// Exact optimum for bundle instances: a base tree on ids 0..base_n-1 plus
// pendant leaves hanging off base vertices, all weights and budgets one.
// Exhausts base protection sets; pendant picks are filled in by a small
// schedule DP, since pendants of a burned vertex are worth exactly one each
// and pendants of a saved vertex are worth nothing.
PendantExact brute_force_ff_pendant(const FfInstance& inst, int base_n,
                                    int max_base_n = 16);

}  // namespace firetree
