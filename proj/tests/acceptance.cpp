// Acceptance gate: twelve guarantee checks, one PASS/FAIL line each.
// The process exit code equals the number of failed checks.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "firetree/io.hpp"
#include "firetree/oracles.hpp"
#include "firetree/ptas.hpp"
#include "firetree/rmfc.hpp"
#include "firetree/transforms.hpp"

using namespace firetree;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    long long checked = 0;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

void report(int id, const char* name, const Outcome& o, int& fails) {
    if (o.pass) {
        std::printf("PASS %2d %s (%lld checks)\n", id, name, o.checked);
    } else {
        std::printf("FAIL %2d %s (%lld checks): %s\n", id, name, o.checked,
                    o.detail.c_str());
        ++fails;
    }
    std::fflush(stdout);
}

// Shared FF corpus: every tree with n <= 9 plus 200 seeded random trees with
// n <= 12, unit budgets, integer weights in [0,10].
std::vector<FfInstance> ff_corpus() {
    std::vector<FfInstance> out;
    std::mt19937_64 rng(101);
    for (const RootedTree& t : corpus::exhaustive_trees(9)) {
        std::vector<long long> w(t.n, 0);
        for (int v = 1; v < t.n; ++v) w[v] = static_cast<long long>(rng() % 11);
        out.push_back(corpus::unit_budget_instance(t, w));
    }
    for (const auto& wt : corpus::random_trees(200, 12, 202))
        out.push_back(corpus::unit_budget_instance(wt.tree, wt.weight));
    return out;
}

std::vector<RootedTree> tree_corpus() {
    std::vector<RootedTree> out = corpus::exhaustive_trees(9);
    for (const auto& wt : corpus::random_trees(200, 12, 202))
        out.push_back(wt.tree);
    return out;
}

FfInstance transformed_instance(const FfInstance& inst, const Rat& eps) {
    auto comp = compress_ff(inst, eps / 3);
    long long lambda = rat_ceil(Rat(3) / eps);
    return prune(comp.first, lambda).first;
}

std::string cli_path() {
    if (const char* p = std::getenv("FIRETREE_CLI_PATH")) return p;
#ifdef FIRETREE_CLI_PATH
    return FIRETREE_CLI_PATH;
#else
    return "";
#endif
}

bool run_cli_ok(const std::string& args) {
    int st = std::system((cli_path() + " " + args).c_str());
    return st != -1 && WIFEXITED(st) && WEXITSTATUS(st) == 0;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main() {
    int fails = 0;
    const Rat eps = rat(1, 2);

    std::vector<FfInstance> ffc = ff_corpus();
    std::vector<RootedTree> trees = tree_corpus();

    // 1: the eps = 1/2 pipeline keeps at least half the brute-force optimum.
    // 3 and 4 reuse the per-run data collected here.
    Outcome c1, c3, c4;
    for (const FfInstance& inst : ffc) {
        ++c1.checked;
        long long opt = 0;
        PtasResult res;
        try {
            opt = brute_force_ff(inst).value;
            res = ptas_pipeline(inst, eps);
        } catch (const std::exception& e) {
            c1.fail(std::string("exception: ") + e.what());
            continue;
        }
        if (!validate_protection(inst, res.plan).ok)
            c1.fail("returned plan violates the budgets");
        if (saved_weight(inst, res.plan) != res.value)
            c1.fail("reported value disagrees with the plan");
        if (2 * res.value < opt)
            c1.fail("value " + std::to_string(res.value) + " below half of " +
                    std::to_string(opt));

        FfInstance tr = transformed_instance(inst, eps);
        ++c3.checked;
        if (res.core.max_loose > tr.tree.max_depth)
            c3.fail("loose count " + std::to_string(res.core.max_loose) +
                    " exceeds depth " + std::to_string(tr.tree.max_depth));
        if (!res.core.tight.empty()) {
            ++c4.checked;
            try {
                LpSolution sup =
                    solve_vertex(build_lp_ff_support(tr, res.core.tight));
                if (sup.status != LpStatus::Optimal) c4.fail("support LP not optimal");
                for (const Rat& xi : sup.x)
                    if (xi != 0 && xi != 1) c4.fail("fractional support coordinate");
                (void)reoptimize_tight(tr, res.core.tight);
            } catch (const NonIntegralVertex& e) {
                c4.fail(std::string("non-integral re-solve: ") + e.what());
            } catch (const std::exception& e) {
                c4.fail(std::string("exception: ") + e.what());
            }
        }
    }
    report(1, "ptas value >= half the optimum", c1, fails);

    // 2: the rmfc solver stays within 12x the optimum; 9 piggybacks on the
    // same corpus with the compressed instances.
    Outcome c2, c9;
    for (const RootedTree& t : trees) {
        ++c2.checked;
        try {
            long long b_opt = brute_force_rmfc(t).b_opt;
            RmfcPipelineResult r = rmfc_pipeline(t);
            if (!rmfc_feasible(t, r.plan)) c2.fail("plan leaves a leaf connected");
            if (!validate_protection_uniform(t, r.budget, r.plan).ok)
                c2.fail("plan exceeds its own budget");
            if (r.budget > 12 * b_opt)
                c2.fail("budget " + std::to_string(r.budget) + " above 12 * " +
                        std::to_string(b_opt));
        } catch (const std::exception& e) {
            c2.fail(std::string("exception: ") + e.what());
        }

        if (t.leaves.empty()) continue;
        ++c9.checked;
        try {
            auto comp = compress_rmfc(t);
            if (comp.first.tree.leaves.empty()) continue;
            RmfcSolveResult big = big_b_solve(comp.first);
            long long b_opt_c = brute_force_rmfc(comp.first).b_opt;
            long long lc = comp.first.tree.max_depth;
            bool within = big.budget <= 3 * b_opt_c ||
                          (big.budget < 60 && (1LL << big.budget) <= lc * lc * lc);
            if (!within)
                c9.fail("budget " + std::to_string(big.budget) + " above 3*max(log " +
                        std::to_string(lc) + ", " + std::to_string(b_opt_c) + ")");
        } catch (const std::exception& e) {
            c9.fail(std::string("exception: ") + e.what());
        }
    }
    report(2, "rmfc budget <= 12x the optimum", c2, fails);

    // 3: vertex solutions of the relaxation have at most L loose vertices;
    // fresh random instances on top of the in-run data from 1.
    for (const auto& wt : corpus::random_trees(200, 12, 303)) {
        FfInstance inst = corpus::unit_budget_instance(wt.tree, wt.weight);
        ++c3.checked;
        try {
            LpSolution sol = solve_vertex(build_lp_ff(inst));
            if (sol.status != LpStatus::Optimal) {
                c3.fail("relaxation not optimal");
                continue;
            }
            auto cls = classify_tight_loose(inst.tree, sol.x);
            if (static_cast<int>(cls.loose.size()) > inst.tree.max_depth)
                c3.fail("loose count exceeds depth");
        } catch (const std::exception& e) {
            c3.fail(std::string("exception: ") + e.what());
        }
    }
    report(3, "loose vertices never outnumber the levels", c3, fails);
    report(4, "tight re-optimization is always 0/1", c4, fails);

    // 5: level compression loses at most a delta fraction and lifts exactly.
    Outcome c5;
    for (const auto& wt : corpus::random_trees(100, 12, 404)) {
        FfInstance inst = corpus::unit_budget_instance(wt.tree, wt.weight);
        for (Rat delta : {rat(1, 3), rat(1, 2)}) {
            ++c5.checked;
            try {
                auto [comp, trace] = compress_ff(inst, delta);
                long long opt = brute_force_ff(inst).value;
                FfExact small = brute_force_ff(comp);
                if (rat(small.value, 1) < (1 - delta) * rat(opt, 1))
                    c5.fail("compressed optimum below (1-delta) of original");
                Plan lifted = lift_plan(trace, small.plan);
                if (!validate_protection(inst, lifted).ok)
                    c5.fail("lifted plan violates the budgets");
                if (saved_weight(inst, lifted) != small.value)
                    c5.fail("lifted plan changes value");
            } catch (const std::exception& e) {
                c5.fail(std::string("exception: ") + e.what());
            }
        }
    }
    report(5, "level compression keeps a 1-delta fraction", c5, fails);

    // 6: rmfc compression stays feasible at the optimum and lifts at twice
    // the budget.
    Outcome c6;
    for (const auto& wt : corpus::random_trees(100, 12, 505)) {
        const RootedTree& t = wt.tree;
        if (t.leaves.empty()) continue;
        ++c6.checked;
        try {
            long long b_opt = brute_force_rmfc(t).b_opt;
            auto [comp, trace] = compress_rmfc(t);
            auto plan = rmfc_feasible_at(comp, b_opt, 18);
            if (!plan.has_value()) {
                c6.fail("compressed instance infeasible at the optimum");
                continue;
            }
            Plan lifted = lift_plan(trace, *plan);
            if (!rmfc_feasible(t, lifted)) c6.fail("lifted plan misses a leaf");
            if (!validate_protection_uniform(t, 2 * b_opt, lifted).ok)
                c6.fail("lifted plan exceeds twice the budget");
        } catch (const std::exception& e) {
            c6.fail(std::string("exception: ") + e.what());
        }
    }
    report(6, "rmfc compression feasible at opt, lifts at 2x", c6, fails);

    // 7: pruning obeys both loss bounds.
    Outcome c7;
    for (const auto& wt : corpus::random_trees(100, 12, 606)) {
        FfInstance inst = corpus::unit_budget_instance(wt.tree, wt.weight);
        long long opt = 0;
        try {
            opt = brute_force_ff(inst).value;
        } catch (const std::exception& e) {
            ++c7.checked;
            c7.fail(std::string("exception: ") + e.what());
            continue;
        }
        for (long long lambda : {2LL, 3LL}) {
            ++c7.checked;
            try {
                auto [pruned, trace] = prune(inst, lambda);
                long long popt = brute_force_ff(pruned).value;
                long long kept = 0;
                for (long long w : pruned.weight) kept += w;
                if (lambda * popt < (lambda - 1) * opt)
                    c7.fail("pruned optimum below the 1-1/lambda bound");
                if (lambda * popt < kept)
                    c7.fail("pruned optimum below kept-weight / lambda");
            } catch (const std::exception& e) {
                c7.fail(std::string("exception: ") + e.what());
            }
        }
    }
    report(7, "pruning keeps both lower bounds", c7, fails);

    // 8: rounding the bottom of a compressed LP solution hits every heavy
    // leaf within the per-level allowance.
    Outcome c8;
    {
        int used = 0;
        for (const auto& wt : corpus::random_trees(160, 12, 707)) {
            if (used >= 100) break;
            if (wt.tree.leaves.empty()) continue;
            auto comp = compress_rmfc(wt.tree).first;
            const RootedTree& t = comp.tree;
            if (t.leaves.empty() || t.max_depth < 1) continue;
            ++used;
            LpSolution sol = solve_vertex(build_lp_rmfc_ad(comp, {}, {}));
            if (sol.status != LpStatus::Optimal) {
                ++c8.checked;
                c8.fail("compressed relaxation not optimal");
                continue;
            }
            std::vector<Rat> x(sol.x.begin(), sol.x.end() - 1);
            Rat B = sol.x.back();
            struct MuQ { Rat mu; int q; };
            for (const MuQ& p : {MuQ{Rat(1), 1}, MuQ{Rat(1), 2}, MuQ{rat(1, 2), 1}}) {
                ++c8.checked;
                try {
                    long long h = static_cast<long long>(ilog_iter_floor(
                        static_cast<unsigned long>(t.max_depth), p.q));
                    std::vector<Rat> xb = x;
                    for (int v = 1; v < t.n; ++v)
                        if (t.depth[v] <= h) xb[v - 1] = 0;
                    std::vector<Rat> psum(t.n, Rat(0));
                    for (int d = 1; d <= t.max_depth; ++d)
                        for (int v : t.levels[d])
                            psum[v] = psum[t.parent[v]] + xb[v - 1];
                    std::vector<int> R = bottom_cover(t, xb, B, p.mu, p.q);
                    std::set<int> rs(R.begin(), R.end());
                    for (int u : t.leaves) {
                        if (psum[u] < p.mu) continue;
                        bool hit = false;
                        for (int v = u; v != 0; v = t.parent[v])
                            if (rs.count(v)) { hit = true; break; }
                        if (!hit) c8.fail("heavy leaf left uncovered");
                    }
                    for (int l = 1; l <= t.max_depth; ++l) {
                        long long cnt = 0;
                        for (int v : R)
                            if (t.depth[v] == l) ++cnt;
                        Rat cap = (rat(p.q, 1) / p.mu * B + 1) * rat(1LL << l, 1);
                        if (rat(cnt, 1) > cap) c8.fail("per-level allowance exceeded");
                    }
                } catch (const std::exception& e) {
                    c8.fail(std::string("exception: ") + e.what());
                }
            }
        }
    }
    report(8, "bottom cover hits heavy leaves within allowance", c8, fails);
    report(9, "large-budget rounding within 3x max(log L, opt)", c9, fails);

    // 10: the budget and weight reductions keep their guarantees.
    Outcome c10;
    for (const FfInstance& inst : corpus::random_budgeted(50, 7, 2, 808)) {
        ++c10.checked;
        try {
            auto [unit, trace] = general_to_unit_budget(inst);
            long long a = brute_force_ff(inst).value;
            FfExact b = brute_force_ff(unit);
            if (a != b.value) c10.fail("unit-budget rewrite changed the optimum");
            Plan lifted = lift_plan(trace, b.plan);
            if (!validate_protection(inst, lifted).ok)
                c10.fail("lifted unit-budget plan infeasible");
            if (saved_weight(inst, lifted) != b.value)
                c10.fail("lifted unit-budget plan changes value");
        } catch (const std::exception& e) {
            c10.fail(std::string("exception: ") + e.what());
        }
    }
    for (const auto& wt : corpus::random_trees(50, 8, 909)) {
        FfInstance inst = corpus::unit_budget_instance(wt.tree, wt.weight);
        if (inst.tree.n < 2) continue;
        if (inst.total_weight() == 0) inst.weight[1] = 1;
        ++c10.checked;
        try {
            auto [unitw, trace] = weighted_to_unit_weight(inst, rat(1, 2), Rat(1));
            PendantExact ex = brute_force_ff_pendant(unitw, inst.tree.n);
            Plan lifted = lift_plan(trace, ex.plan);
            if (!validate_protection(inst, lifted).ok)
                c10.fail("lifted unit-weight plan infeasible");
            long long opt = brute_force_ff(inst).value;
            if (2 * saved_weight(inst, lifted) < opt)
                c10.fail("lifted unit-weight plan below half the optimum");
        } catch (const std::exception& e) {
            c10.fail(std::string("exception: ") + e.what());
        }
    }
    report(10, "budget and weight reductions keep their guarantees", c10, fails);

    // 11: greedy saves at least half the optimum on every small tree.
    Outcome c11;
    {
        std::mt19937_64 rng(1010);
        for (const RootedTree& t : corpus::exhaustive_trees(9)) {
            if (t.n < 2) continue;
            std::vector<long long> unit(t.n, 1), rnd(t.n, 0);
            unit[0] = 0;
            for (int v = 1; v < t.n; ++v)
                rnd[v] = static_cast<long long>(rng() % 11);
            for (const auto& w : {unit, rnd}) {
                ++c11.checked;
                try {
                    FfInstance inst = corpus::unit_budget_instance(t, w);
                    long long opt = brute_force_ff(inst).value;
                    if (2 * greedy_hartnell_li(inst).value < opt)
                        c11.fail("greedy below half the optimum");
                } catch (const std::exception& e) {
                    c11.fail(std::string("exception: ") + e.what());
                }
            }
        }
    }
    report(11, "greedy saves at least half the optimum", c11, fails);

    // 12: identical invocations produce byte-identical result files, at
    // thread counts 1 and 4.
    Outcome c12;
    if (cli_path().empty()) {
        c12.fail("FIRETREE_CLI_PATH is not set");
    } else {
        fs::path dir = fs::temp_directory_path() / "firetree_acceptance";
        fs::create_directories(dir);
        auto p = [&](const char* name) { return (dir / name).string(); };
        struct Case { const char* gen; const char* solve; };
        std::vector<Case> cases = {
            {"gen --seed 33 --n 12 --shape random --kind ff -o ",
             "solve-ff "},
            {"gen --seed 34 --n 12 --shape binary --kind ff -o ",
             "solve-ff "},
            {"gen --seed 35 --n 12 --shape random --kind rmfc -o ",
             "solve-rmfc "},
        };
        int idx = 0;
        for (const Case& cs : cases) {
            ++idx;
            ++c12.checked;
            std::string inst = p(("inst" + std::to_string(idx) + ".json").c_str());
            std::string a = p(("a" + std::to_string(idx) + ".json").c_str());
            std::string b = p(("b" + std::to_string(idx) + ".json").c_str());
            std::string c = p(("c" + std::to_string(idx) + ".json").c_str());
            bool ok = run_cli_ok(cs.gen + inst) &&
                      run_cli_ok(cs.solve + inst + " --threads 1 -o " + a) &&
                      run_cli_ok(cs.solve + inst + " --threads 1 -o " + b) &&
                      run_cli_ok(cs.solve + inst + " --threads 4 -o " + c);
            if (!ok) {
                c12.fail("a CLI invocation failed");
                continue;
            }
            std::string ra = slurp(a);
            if (ra.empty() || ra != slurp(b))
                c12.fail("re-run output differs");
            if (ra != slurp(c))
                c12.fail("thread count changed the output");
        }
    }
    report(12, "re-runs are byte-identical across thread counts", c12, fails);

    std::printf("%d of 12 criteria failed\n", fails);
    return fails;
}
