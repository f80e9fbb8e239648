#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "firetree/rational.hpp"
#include "firetree/tree.hpp"

namespace firetree {

enum class Cmp { Le, Ge, Eq };

struct LinearConstraint {
    std::vector<std::pair<int, Rat>> terms;  // (variable, coefficient)
    Cmp cmp = Cmp::Le;
    Rat rhs;
    std::string tag;  // human-readable row name for dumps and certificates
};

// All variables are implicitly >= 0.
struct Lp {
    int num_vars = 0;
    bool maximize = false;
    std::vector<Rat> objective;
    std::vector<LinearConstraint> rows;
    std::vector<std::string> var_names;  // optional; used by dump()

    // One constraint per line with exact rationals; for --dump-lp debugging.
    std::string dump() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

// An optimal *vertex* of the feasible region, plus the active-set
// certificate: every listed row holds with equality at x and every listed
// variable is zero there. The certificate always spans num_vars linearly
// independent constraints (checked by active_set_rank in the tests), which
// is what makes x a vertex, and the sparsity arguments downstream valid.
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rat> x;
    Rat objective;
    std::vector<int> tight_rows;
    std::vector<int> zero_vars;
};

// Exact two-phase primal simplex with Bland's pivoting rule (lowest eligible
// index enters; lowest basis index leaves on ratio ties). Deterministic:
// identical inputs give identical solutions, bit for bit.
LpSolution solve_vertex(const Lp& lp);

// Rank of the certificate's constraint normals; num_vars iff x is a vertex.
int active_set_rank(const Lp& lp, const LpSolution& sol);

// Thrown when a solution routes more than a unit of protection across some
// root path that the model requires to stay within 1.
struct PathOverloaded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidFixing : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Optional side constraints for the firefighter LP: q_paths[i] is a vertex
// set whose x-sum gets fixed to 1 when bit i of one_mask is set and to 0
// otherwise. Pass nullptr for the plain relaxation.
struct FfFixings {
    const std::vector<std::vector<int>>* q_paths = nullptr;
    std::uint64_t one_mask = 0;
};

// max sum_u w(T_u) x_u  s.t.  x(P_u) <= 1 per leaf u,
// x(V_{<=l}) <= B_1+...+B_l per level l, x >= 0. Variable u-1 is vertex u.
Lp build_lp_ff(const FfInstance& inst, const FfFixings* fix = nullptr);

// Variant with the variable set restricted to `support` (all other vertices
// dropped from every row); used for re-optimizing over tight vertices.
Lp build_lp_ff_support(const FfInstance& inst, const std::vector<int>& support);

// min B  s.t.  x(V_l) <= mult_l * B per level, x(P_u) >= 1 per leaf,
// B >= 1, x(u) = 1 on A, x(u) = 0 on D, x >= 0.
// Variable u-1 is vertex u; variable n-1 is B.
Lp build_lp_rmfc_ad(const RmfcInstance& inst, const std::vector<int>& A,
                    const std::vector<int>& D);

struct TightLoose {
    std::vector<int> tight;      // x(u) > 0 and x(P_u) = 1, ascending
    std::vector<int> loose;      // x(u) > 0 and x(P_u) < 1, ascending
    std::vector<Rat> path_sum;   // x(P_u) for every vertex (index 0 unused)
};

// x is indexed by variable (vertex u at index u-1). With require_packed,
// any path sum above 1 throws PathOverloaded; pass false for covering-side
// solutions where paths may legitimately exceed 1.
TightLoose classify_tight_loose(const RootedTree& t, const std::vector<Rat>& x,
                                bool require_packed = true);

}  // namespace firetree
