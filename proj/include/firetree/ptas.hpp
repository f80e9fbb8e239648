#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "firetree/lp.hpp"
#include "firetree/rational.hpp"
#include "firetree/transforms.hpp"
#include "firetree/tree.hpp"

namespace firetree {

struct EnumerationBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A basic solution that should have been 0/1 was not; indicates a solver or
// precondition bug, never an input problem.
struct NonIntegralVertex : std::logic_error {
    using std::logic_error::logic_error;
};

// eta-threshold decomposition of an instance: the heavy vertices, the
// enumeration anchors Q, and the vertical heavy-tree runs hanging above each
// anchor. The runs partition the heavy set.
struct HeavyDecomposition {
    Rat eta;
    std::vector<int> heavy;                 // ascending
    std::vector<int> q;                     // ascending
    std::vector<std::vector<int>> q_paths;  // q_paths[i] starts at q[i], runs upward
};

// {u : w(T_u) >= eta}, ascending.
std::vector<int> heavy_set(const FfInstance& inst, const Rat& eta);

// Peels smallest-id leaves of the (recomputed) heavy tree, removing their
// subtrees, until no heavy vertex remains; q is the peeled vertices plus
// every vertex with two or more heavy children.
HeavyDecomposition compute_q(const FfInstance& inst,
                             const std::vector<int>& heavy, const Rat& eta);

// Optimal plan among the given pairwise-incomparable vertices: solves the
// LP restricted to them, whose vertices are all 0/1, and reads off the
// support. Throws NonIntegralVertex if the solver returns a fraction.
Plan reoptimize_tight(const FfInstance& inst, const std::vector<int>& tight);

struct PtasCoreResult {
    Plan plan;
    long long value = 0;
    Rat lp_value;              // best LP optimum over the enumeration
    std::uint64_t z_mask = 0;  // chosen Z as bits over decomp.q indices
    HeavyDecomposition decomp;
    std::vector<int> tight, loose;  // classification of the winning solution
    Rat cert_gap;    // val(x) - val(y) for the redistributed vector y
    Rat cert_bound;  // |loose| * eta; cert_gap <= cert_bound always
    int max_loose = 0;         // largest loose count seen across the enumeration
    long long lp_solves = 0;
};

// For each Z subseteq Q solves the path-fixed LP, takes the best (ties to
// the smallest mask), certifies the rounding gap, and re-optimizes over the
// tight vertices into an integral plan. threads <= 0 picks the OpenMP
// default; threads == 1 is the serial reference path.
PtasCoreResult ptas_core(const FfInstance& inst, const Rat& eps,
                         int enum_cap = 20, int threads = 0);

struct PtasResult {
    Plan plan;  // on the input instance
    long long value = 0;
    Rat eps;
    PtasCoreResult core;  // plan/value live on the transformed instance
    TransformTrace compress_trace, prune_trace;
};

// Full pipeline on a unit-budget instance: compress with delta = eps/3,
// prune with lambda = ceil(3/eps), run the core, and lift the plan back.
// Final value is at least (1 - eps) times the optimum.
PtasResult ptas_pipeline(const FfInstance& original, const Rat& eps,
                         int enum_cap = 20, int threads = 0);

}  // namespace firetree
