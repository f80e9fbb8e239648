#include "firetree/lp.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace firetree {

namespace {

std::string var_name(const Lp& lp, int j) {
    if (j < static_cast<int>(lp.var_names.size()) && !lp.var_names[j].empty())
        return lp.var_names[j];
    return "x" + std::to_string(j);
}

}  // namespace

std::string Lp::dump() const {
    std::ostringstream os;
    os << (maximize ? "max" : "min");
    bool first = true;
    for (int j = 0; j < num_vars; ++j) {
        if (sgn(objective[j]) == 0) continue;
        os << (first ? " " : " + ") << rat_str(objective[j]) << "*"
           << var_name(*this, j);
        first = false;
    }
    if (first) os << " 0";
    os << "\n";
    for (const auto& row : rows) {
        os << row.tag << ":";
        bool f = true;
        for (const auto& [j, c] : row.terms) {
            os << (f ? " " : " + ") << rat_str(c) << "*" << var_name(*this, j);
            f = false;
        }
        if (f) os << " 0";
        os << (row.cmp == Cmp::Le ? " <= " : row.cmp == Cmp::Ge ? " >= " : " = ")
           << rat_str(row.rhs) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Two-phase dense simplex over exact rationals.
//
// Column layout: structural variables, then one slack per inequality row,
// then (phase 1 only) one artificial per row lacking a natural basic column.
// Bland's rule on both phases rules out cycling, and the final basis is a
// basic feasible solution, i.e. a vertex of the polyhedron.
// ---------------------------------------------------------------------------
LpSolution solve_vertex(const Lp& lp) {
    const int n = lp.num_vars;
    const int m = static_cast<int>(lp.rows.size());

    // dense rows + rhs
    std::vector<std::vector<Rat>> A(m, std::vector<Rat>(n));
    std::vector<Rat> b(m);
    for (int i = 0; i < m; ++i) {
        for (const auto& [j, c] : lp.rows[i].terms) {
            if (j < 0 || j >= n)
                throw std::invalid_argument("LP row references unknown variable");
            A[i][j] += c;
        }
        b[i] = lp.rows[i].rhs;
    }

    // slacks
    int nslack = 0;
    std::vector<int> slack_col(m, -1);
    for (int i = 0; i < m; ++i)
        if (lp.rows[i].cmp != Cmp::Eq) slack_col[i] = n + nslack++;
    int ncols = n + nslack;
    for (int i = 0; i < m; ++i) {
        A[i].resize(ncols);
        if (slack_col[i] >= 0)
            A[i][slack_col[i]] = (lp.rows[i].cmp == Cmp::Le) ? 1 : -1;
    }
    // make every rhs nonnegative so the initial basis is feasible
    for (int i = 0; i < m; ++i)
        if (sgn(b[i]) < 0) {
            for (auto& v : A[i]) v = -v;
            b[i] = -b[i];
        }

    // initial basis: the row's slack if it survived sign-fixing with +1,
    // otherwise an artificial
    std::vector<int> basis(m, -1);
    int art_start = ncols;
    for (int i = 0; i < m; ++i) {
        if (slack_col[i] >= 0 && A[i][slack_col[i]] == 1) {
            basis[i] = slack_col[i];
        } else {
            int col = ncols++;
            for (auto& row : A) row.resize(ncols);
            A[i][col] = 1;
            basis[i] = col;
        }
    }

    std::vector<char> in_basis(ncols, 0);
    for (int i = 0; i < m; ++i) in_basis[basis[i]] = 1;

    int nrows = m;
    auto pivot = [&](int pr, int pc, std::vector<Rat>& red) {
        Rat pv = A[pr][pc];
        for (int j = 0; j < ncols; ++j) A[pr][j] /= pv;
        b[pr] /= pv;
        for (int i = 0; i < nrows; ++i) {
            if (i == pr || sgn(A[i][pc]) == 0) continue;
            Rat f = A[i][pc];
            for (int j = 0; j < ncols; ++j) A[i][j] -= f * A[pr][j];
            b[i] -= f * b[pr];
        }
        if (sgn(red[pc]) != 0) {
            Rat f = red[pc];
            for (int j = 0; j < ncols; ++j) red[j] -= f * A[pr][j];
        }
        in_basis[basis[pr]] = 0;
        basis[pr] = pc;
        in_basis[pc] = 1;
    };

    // minimizes cost over the current tableau; false means unbounded
    auto run_simplex = [&](const std::vector<Rat>& cost) {
        std::vector<Rat> red = cost;
        for (int i = 0; i < nrows; ++i) {
            if (sgn(cost[basis[i]]) == 0) continue;
            Rat f = cost[basis[i]];
            for (int j = 0; j < ncols; ++j) red[j] -= f * A[i][j];
        }
        while (true) {
            int enter = -1;
            for (int j = 0; j < ncols; ++j)
                if (!in_basis[j] && sgn(red[j]) < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rat best;
            for (int i = 0; i < nrows; ++i) {
                if (sgn(A[i][enter]) <= 0) continue;
                Rat ratio = b[i] / A[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter, red);
        }
    };

    LpSolution sol;

    if (ncols > art_start) {
        std::vector<Rat> phase1(ncols);
        for (int j = art_start; j < ncols; ++j) phase1[j] = 1;
        bool bounded = run_simplex(phase1);
        assert(bounded);  // phase 1 objective is bounded below by zero
        (void)bounded;
        Rat infeas = 0;
        for (int i = 0; i < nrows; ++i)
            if (basis[i] >= art_start) infeas += b[i];
        if (sgn(infeas) > 0) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // kick degenerate artificials out of the basis; a row with no real
        // coefficients left is redundant and gets dropped
        for (int i = 0; i < nrows;) {
            if (basis[i] < art_start) {
                ++i;
                continue;
            }
            int pc = -1;
            for (int j = 0; j < art_start; ++j)
                if (!in_basis[j] && sgn(A[i][j]) != 0) {
                    pc = j;
                    break;
                }
            if (pc >= 0) {
                std::vector<Rat> dummy(ncols);
                pivot(i, pc, dummy);
                ++i;
            } else {
                in_basis[basis[i]] = 0;
                A.erase(A.begin() + i);
                b.erase(b.begin() + i);
                basis.erase(basis.begin() + i);
                --nrows;
            }
        }
        for (auto& row : A) row.resize(art_start);
        ncols = art_start;
        in_basis.resize(ncols);
    }

    std::vector<Rat> phase2(ncols);
    for (int j = 0; j < n; ++j)
        phase2[j] = lp.maximize ? -lp.objective[j] : lp.objective[j];
    if (!run_simplex(phase2)) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x.assign(n, Rat(0));
    for (int i = 0; i < nrows; ++i)
        if (basis[i] < n) sol.x[basis[i]] = b[i];
    sol.objective = 0;
    for (int j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];

    for (int i = 0; i < m; ++i) {
        Rat lhs = 0;
        for (const auto& [j, c] : lp.rows[i].terms) lhs += c * sol.x[j];
        if (lhs == lp.rows[i].rhs) sol.tight_rows.push_back(i);
    }
    for (int j = 0; j < n; ++j)
        if (sgn(sol.x[j]) == 0) sol.zero_vars.push_back(j);
    return sol;
}

int active_set_rank(const Lp& lp, const LpSolution& sol) {
    std::vector<std::vector<Rat>> mat;
    for (int i : sol.tight_rows) {
        std::vector<Rat> row(lp.num_vars);
        for (const auto& [j, c] : lp.rows[i].terms) row[j] += c;
        mat.push_back(std::move(row));
    }
    for (int j : sol.zero_vars) {
        std::vector<Rat> row(lp.num_vars);
        row[j] = 1;
        mat.push_back(std::move(row));
    }
    int rank = 0;
    for (int col = 0; col < lp.num_vars && rank < static_cast<int>(mat.size());
         ++col) {
        int piv = -1;
        for (int i = rank; i < static_cast<int>(mat.size()); ++i)
            if (sgn(mat[i][col]) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(mat[rank], mat[piv]);
        for (int i = rank + 1; i < static_cast<int>(mat.size()); ++i) {
            if (sgn(mat[i][col]) == 0) continue;
            Rat f = mat[i][col] / mat[rank][col];
            for (int j = col; j < lp.num_vars; ++j)
                mat[i][j] -= f * mat[rank][j];
        }
        ++rank;
    }
    return rank;
}

// ---------------------------------------------------------------------------
// Model builders
// ---------------------------------------------------------------------------

Lp build_lp_ff(const FfInstance& inst, const FfFixings* fix) {
    const RootedTree& t = inst.tree;
    Lp lp;
    lp.num_vars = t.n - 1;
    lp.maximize = true;
    auto wT = subtree_weights(t, inst.weight);
    lp.objective.resize(lp.num_vars);
    lp.var_names.resize(lp.num_vars);
    for (int u = 1; u < t.n; ++u) {
        lp.objective[u - 1] = Rat(static_cast<long>(wT[u]));
        lp.var_names[u - 1] = "x" + std::to_string(u);
    }

    for (int u : t.leaves) {
        LinearConstraint row;
        for (int v = u; v != 0; v = t.parent[v]) row.terms.push_back({v - 1, 1});
        row.cmp = Cmp::Le;
        row.rhs = 1;
        row.tag = "path " + std::to_string(u);
        lp.rows.push_back(std::move(row));
    }

    std::vector<std::pair<int, Rat>> prefix;
    long long acc = 0;
    for (int l = 1; l <= t.max_depth; ++l) {
        for (int v : t.levels[l]) prefix.push_back({v - 1, 1});
        acc += inst.budget[l];
        LinearConstraint row;
        row.terms = prefix;
        row.cmp = Cmp::Le;
        row.rhs = Rat(static_cast<long>(acc));
        row.tag = "budget " + std::to_string(l);
        lp.rows.push_back(std::move(row));
    }

    if (fix && fix->q_paths) {
        const auto& paths = *fix->q_paths;
        if (paths.size() < 64 && (fix->one_mask >> paths.size()) != 0)
            throw InvalidFixing("fixing mask selects a nonexistent path");
        for (size_t i = 0; i < paths.size(); ++i) {
            LinearConstraint row;
            for (int v : paths[i]) {
                if (v <= 0 || v >= t.n)
                    throw InvalidFixing("fixing path contains invalid vertex");
                row.terms.push_back({v - 1, 1});
            }
            row.cmp = Cmp::Eq;
            row.rhs = (fix->one_mask >> i) & 1 ? 1 : 0;
            row.tag = "qpath " + std::to_string(i);
            lp.rows.push_back(std::move(row));
        }
    }
    return lp;
}

Lp build_lp_ff_support(const FfInstance& inst, const std::vector<int>& support) {
    const RootedTree& t = inst.tree;
    std::vector<int> var_of(t.n, -1);
    for (size_t k = 0; k < support.size(); ++k) {
        int u = support[k];
        if (u <= 0 || u >= t.n)
            throw std::invalid_argument("support contains invalid vertex");
        if (var_of[u] != -1)
            throw std::invalid_argument("support contains a repeated vertex");
        var_of[u] = static_cast<int>(k);
    }

    Lp full = build_lp_ff(inst);
    Lp lp;
    lp.num_vars = static_cast<int>(support.size());
    lp.maximize = true;
    lp.objective.resize(lp.num_vars);
    lp.var_names.resize(lp.num_vars);
    for (size_t k = 0; k < support.size(); ++k) {
        lp.objective[k] = full.objective[support[k] - 1];
        lp.var_names[k] = "x" + std::to_string(support[k]);
    }
    for (auto& row : full.rows) {
        LinearConstraint out;
        for (const auto& [j, c] : row.terms)
            if (var_of[j + 1] >= 0) out.terms.push_back({var_of[j + 1], c});
        if (out.terms.empty()) continue;
        out.cmp = row.cmp;
        out.rhs = row.rhs;
        out.tag = row.tag;
        lp.rows.push_back(std::move(out));
    }
    return lp;
}

Lp build_lp_rmfc_ad(const RmfcInstance& inst, const std::vector<int>& A,
                    const std::vector<int>& D) {
    const RootedTree& t = inst.tree;
    Lp lp;
    lp.num_vars = t.n;  // x_1..x_{n-1} at indices 0..n-2, B at index n-1
    const int bvar = t.n - 1;
    lp.maximize = false;
    lp.objective.assign(lp.num_vars, Rat(0));
    lp.objective[bvar] = 1;
    lp.var_names.resize(lp.num_vars);
    for (int u = 1; u < t.n; ++u) lp.var_names[u - 1] = "x" + std::to_string(u);
    lp.var_names[bvar] = "B";

    for (int l = 1; l <= t.max_depth; ++l) {
        LinearConstraint row;
        for (int v : t.levels[l]) row.terms.push_back({v - 1, 1});
        row.terms.push_back({bvar, Rat(static_cast<long>(-inst.mult[l]))});
        row.cmp = Cmp::Le;
        row.rhs = 0;
        row.tag = "budget " + std::to_string(l);
        lp.rows.push_back(std::move(row));
    }
    for (int u : t.leaves) {
        LinearConstraint row;
        for (int v = u; v != 0; v = t.parent[v]) row.terms.push_back({v - 1, 1});
        row.cmp = Cmp::Ge;
        row.rhs = 1;
        row.tag = "path " + std::to_string(u);
        lp.rows.push_back(std::move(row));
    }
    {
        LinearConstraint row;
        row.terms.push_back({bvar, 1});
        row.cmp = Cmp::Ge;
        row.rhs = 1;
        row.tag = "Bmin";
        lp.rows.push_back(std::move(row));
    }

    std::vector<char> in_a(t.n, 0);
    for (int u : A) {
        if (u <= 0 || u >= t.n) throw InvalidFixing("A contains invalid vertex");
        in_a[u] = 1;
        LinearConstraint row;
        row.terms.push_back({u - 1, 1});
        row.cmp = Cmp::Eq;
        row.rhs = 1;
        row.tag = "fixA " + std::to_string(u);
        lp.rows.push_back(std::move(row));
    }
    for (int u : D) {
        if (u <= 0 || u >= t.n) throw InvalidFixing("D contains invalid vertex");
        if (in_a[u]) throw InvalidFixing("A and D overlap at " + std::to_string(u));
        LinearConstraint row;
        row.terms.push_back({u - 1, 1});
        row.cmp = Cmp::Eq;
        row.rhs = 0;
        row.tag = "fixD " + std::to_string(u);
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

TightLoose classify_tight_loose(const RootedTree& t, const std::vector<Rat>& x,
                                bool require_packed) {
    if (static_cast<int>(x.size()) < t.n - 1)
        throw std::invalid_argument("solution vector shorter than vertex count");
    TightLoose out;
    out.path_sum.assign(t.n, Rat(0));
    for (int d = 1; d <= t.max_depth; ++d)
        for (int v : t.levels[d])
            out.path_sum[v] = out.path_sum[t.parent[v]] + x[v - 1];
    for (int v = 1; v < t.n; ++v) {
        if (sgn(x[v - 1]) <= 0) continue;
        if (out.path_sum[v] < 1)
            out.loose.push_back(v);
        else if (out.path_sum[v] == 1)
            out.tight.push_back(v);
        else if (require_packed)
            throw PathOverloaded("x(P_u) > 1 at vertex " + std::to_string(v));
        // path sums above 1 are possible for covering solutions; such
        // vertices are neither tight nor loose
    }
    return out;
}

}  // namespace firetree
