#pragma once

#include <vector>

#include "firetree/lp.hpp"
#include "firetree/ptas.hpp"
#include "firetree/transforms.hpp"
#include "firetree/tree.hpp"

namespace firetree {

// Fractional vectors here are variable-indexed like LpSolution::x:
// entry u-1 belongs to vertex u.

// Rounds the slice of x living on levels (floor(log^(k) L), floor(log^(k-1) L)]
// into a vertex set R that hits every leaf path carrying at least eta of
// x-mass, with |R ∩ V_l| <= ((1/eta)B + 1) * 2^l per level.
// Requires supp(x) inside the slice and x within the doubling budgets B * 2^l.
// Returns an empty set when the slice is empty (floor(log^(k) L) >= floor(log^(k-1) L)).
std::vector<int> slice_cover(const RootedTree& tree, const std::vector<Rat>& x,
                             const Rat& B, const Rat& eta, int k);

// Splits levels (floor(log^(q) L), L] into q nested slices, covers each with
// slice_cover at eta = mu/q, and returns the union R. R hits every leaf whose
// path carries x-mass at least mu, and |R ∩ V_l| <= ((q/mu)B + 1) * 2^l.
std::vector<int> bottom_cover(const RootedTree& tree, const std::vector<Rat>& x,
                              const Rat& B, const Rat& mu, int q);

struct RmfcSolveResult {
    Plan plan;               // protection set on the instance's tree
    long long budget = 1;    // smallest integer B with plan inside B * mult_l per level
    Rat lp_budget;           // fractional LP budget the construction started from
};

// Rounds the root LP of inst into a protection set whose integer budget is at
// most 3 * max(log L, B_OPT). Strong when the optimum budget is large.
RmfcSolveResult big_b_solve(const RmfcInstance& inst);

// One explored node of the guided enumeration: fixings (A = protected,
// D = discarded) in the top levels, plus the LP(A, D) vertex solution.
struct EnumState {
    std::vector<int> A;
    std::vector<int> D;
    std::vector<Rat> x;   // variable-indexed, without the budget variable
    Rat B;                // LP(A, D) optimum budget
};

// Recursive guided enumeration over clean fixing pairs in levels <= floor(log^(2) L).
// Branches on the frontier F_x of topmost undecided path vertices of leaves
// whose bottom x-mass is under 2/3, up to depth gamma. States are memoized;
// exceeding node_cap explored states throws EnumerationBudgetExceeded.
std::vector<EnumState> enum_states(const RmfcInstance& inst, std::vector<int> A,
                                   std::vector<int> D, long long gamma,
                                   long long node_cap = 1'000'000);

// Runs enum_states from the empty fixing pair, re-solves each triple with the
// whole top undecided region discarded, rounds the bottom part with
// bottom_cover(mu=1, q=2), and keeps the cheapest resulting protection set.
// When B_OPT <= log L the returned budget is at most 6 * B_OPT.
RmfcSolveResult enum_solve(const RmfcInstance& inst, long long node_cap = 1'000'000);

struct RmfcPipelineResult {
    Plan plan;                      // protection set on the original tree
    long long budget = 1;           // smallest uniform integer budget certifying plan
    long long compressed_budget = 1;
    bool used_enum = false;
    TransformTrace trace;
};

// Full solver: compress the tree, run both big_b_solve and enum_solve, keep
// the cheaper plan, and lift it back. The certified uniform budget is at most
// 12 * B_OPT of the original instance.
RmfcPipelineResult rmfc_pipeline(const RootedTree& tree, long long node_cap = 1'000'000);

}  // namespace firetree
