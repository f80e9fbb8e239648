#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "firetree/rational.hpp"
#include "firetree/tree.hpp"

namespace firetree {

enum class TransformKind {
    UnitBudget,
    UnitWeight,
    ContractZeroLevels,
    CompressFf,
    CompressRmfc,
    Prune,
};

// Enough bookkeeping to pull a plan on the transformed instance back to the
// instance it came from. vertex_map[v'] is the source vertex standing in for
// v', or -1 for vertices with no source counterpart (attached unit-weight
// leaves, padding chains). params carries human-readable parameters.
struct TransformTrace {
    TransformKind kind = TransformKind::UnitBudget;
    std::vector<int> vertex_map;
    std::map<std::string, std::string> params;
};

// Maps every protected vertex through vertex_map, dropping the unmapped
// ones. This is the correct lift for every transform in this module.
Plan lift_plan(const TransformTrace& trace, const Plan& plan);

// Subdivides the edge into each level-l vertex into budget[l] edges and sets
// all budgets to one; the new instance has the same optimum. Zero-weight
// subdivision vertices map back to the vertex below them. Throws
// std::invalid_argument on a zero-budget level (contract those first).
std::pair<FfInstance, TransformTrace> general_to_unit_budget(
    const FfInstance& inst);

// Scales weights down to O(n/delta) and then replaces them by bundles of
// unit-weight pendant leaves. Any alpha-approximate solution of the result
// lifts (by dropping non-source vertices) to a (1-delta)*alpha-approximate
// solution of the input. Requires unit budgets and a nonzero total weight.
std::pair<FfInstance, TransformTrace> weighted_to_unit_weight(
    const FfInstance& inst, const Rat& delta, const Rat& alpha);

// Removes every level l >= 2 with budget[l] == 0 by merging its vertices
// into their parents, adding weights. Value-preserving in both directions.
std::pair<FfInstance, TransformTrace> contract_zero_budget_levels(
    const FfInstance& inst);

// Unit-budget input; keeps budget only on a geometrically spaced level set
// (each kept level receives the budget of the skipped levels above it) and
// contracts the rest. Optimum drops by at most a (1-delta) factor and plans
// lift with identical value.
std::pair<FfInstance, TransformTrace> compress_ff(const FfInstance& inst,
                                                  const Rat& delta);

// RMFC depth reduction: pads depth to a power of two with a root chain,
// keeps levels 2^j - 1 (pushing budgets up), contracts the rest, and cuts
// everything below a vertex that absorbed a leaf. The result is solved with
// level budgets B * 2^l; solutions lift to uniform budget 2B on the input.
std::pair<RmfcInstance, TransformTrace> compress_rmfc(const RootedTree& tree);

// Keeps, per level, the lambda * budget[l] unblocked vertices with heaviest
// subtrees plus their root paths; path vertices outside the kept subtrees
// get weight zero. Loses at most a 1/lambda fraction of the optimum, and the
// kept weight is at least a 1/lambda fraction of the new optimum.
std::pair<FfInstance, TransformTrace> prune(const FfInstance& inst,
                                            long long lambda);

// The per-level greedy picks behind prune (ties by smaller id); exposed for
// the greedy baseline and for tests.
std::vector<int> prune_picks(const FfInstance& inst, long long lambda);

}  // namespace firetree
