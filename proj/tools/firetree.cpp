#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "firetree/io.hpp"
#include "firetree/oracles.hpp"
#include "firetree/ptas.hpp"
#include "firetree/rmfc.hpp"
#include "firetree/transforms.hpp"

namespace ft = firetree;

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kInputError = 2;
constexpr int kResourceCap = 3;

int resolve_threads(int flag_threads) {
    if (const char* env = std::getenv("FIRETREE_THREADS")) {
        try {
            return std::stoi(env);
        } catch (...) {
            throw ft::ParseError("FIRETREE_THREADS must be an integer");
        }
    }
    return flag_threads;
}

void output_json(const ft::Json& j, const std::string& out_path) {
    if (!out_path.empty())
        ft::save_json(out_path, j);
    else
        std::cout << j.dump(2) << "\n";
}

std::string ratio_str(long long achieved, long long reference) {
    if (reference == 0) return "1";
    return ft::rat_str(ft::rat(static_cast<long>(achieved), static_cast<long>(reference)));
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

ft::InstanceDoc make_instance(unsigned long long seed, int n, const std::string& shape,
                              const std::string& kind) {
    if (n < 2) throw ft::ParseError("gen needs n >= 2");
    std::mt19937_64 rng(seed);
    std::vector<int> parent(n);
    parent[0] = -1;
    for (int v = 1; v < n; ++v) {
        if (shape == "path")
            parent[v] = v - 1;
        else if (shape == "spider")
            parent[v] = 0;
        else if (shape == "binary")
            parent[v] = (v - 1) / 2;
        else if (shape == "random")
            parent[v] = static_cast<int>(rng() % static_cast<unsigned long long>(v));
        else
            throw ft::ParseError("unknown shape: " + shape);
    }
    ft::InstanceDoc doc;
    doc.kind = kind;
    doc.tree = ft::build_tree(parent);
    if (kind == "ff") {
        doc.weights.assign(n, 0);
        for (int v = 1; v < n; ++v)
            doc.weights[v] = static_cast<long long>(rng() % 11);
        doc.budgets.assign(doc.tree.max_depth + 1, 1);
        doc.budgets[0] = 0;
    } else if (kind == "rmfc") {
        doc.budget_model = "uniform";
    } else {
        throw ft::ParseError("kind must be ff or rmfc");
    }
    return doc;
}

long long smallest_uniform_budget(const ft::RootedTree& t, const ft::Plan& plan) {
    std::vector<long long> cnt(t.max_depth + 1, 0);
    for (int v : plan.vertices) ++cnt[t.depth[v]];
    long long best = 1, run = 0;
    for (int l = 1; l <= t.max_depth; ++l) {
        run += cnt[l];
        if (run > 0) best = std::max(best, (run + l - 1) / l);
    }
    return best;
}

long long smallest_pow2_budget(const ft::RmfcInstance& inst, const ft::Plan& plan) {
    const ft::RootedTree& t = inst.tree;
    std::vector<long long> cnt(t.max_depth + 1, 0);
    for (int v : plan.vertices) ++cnt[t.depth[v]];
    long long best = 1;
    for (int l = 1; l <= t.max_depth; ++l)
        if (cnt[l] > 0)
            best = std::max(best, (cnt[l] + inst.mult_at(l) - 1) / inst.mult_at(l));
    return best;
}

struct CsvRow {
    std::string instance;
    int n = 0;
    int L = 0;
    std::string eps = "-";
    std::string algorithm;
    long long value = 0;
    std::string exact = "";
    std::string ratio = "";
    double millis = 0;
};

void print_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << "instance,n,L,eps,algorithm,value,exact,ratio,millis\n";
    for (const CsvRow& r : rows)
        os << r.instance << "," << r.n << "," << r.L << "," << r.eps << ","
           << r.algorithm << "," << r.value << "," << r.exact << "," << r.ratio << ","
           << r.millis << "\n";
}

int run_solve_ff(const std::string& file, const std::string& eps_str, bool exact,
                 bool greedy, bool emit_csv, int threads, int enum_cap,
                 const std::string& out_path) {
    ft::InstanceDoc doc = ft::instance_from_json(ft::load_json(file));
    if (doc.kind != "ff") throw ft::ParseError("solve-ff needs an ff instance");
    ft::FfInstance orig = doc.to_ff();
    ft::Rat eps = ft::parse_rat(eps_str);

    ft::FfInstance work = orig;
    std::vector<ft::TransformTrace> pre;
    if (!orig.unit_budgets()) {
        auto [contracted, tr1] = ft::contract_zero_budget_levels(orig);
        auto [unit, tr2] = ft::general_to_unit_budget(contracted);
        work = std::move(unit);
        pre = {std::move(tr1), std::move(tr2)};
    }

    auto t0 = std::chrono::steady_clock::now();
    ft::PtasResult res = ft::ptas_pipeline(work, eps, enum_cap, resolve_threads(threads));
    double ms = elapsed_ms(t0);

    ft::Plan plan = res.plan;
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) plan = ft::lift_plan(*it, plan);
    long long value = ft::saved_weight(orig, plan);
    ft::CheckResult chk = ft::validate_protection(orig, plan);
    if (!chk.ok) throw std::logic_error("solver produced an infeasible plan: " + chk.reason);

    long long exact_value = 0;
    if (exact) exact_value = ft::brute_force_ff(orig).value;

    if (emit_csv) {
        std::vector<CsvRow> rows;
        CsvRow r{file, orig.tree.n, orig.tree.max_depth, ft::rat_str(eps), "ptas",
                 value, "", "", ms};
        if (exact) {
            r.exact = std::to_string(exact_value);
            r.ratio = ratio_str(value, exact_value);
        }
        rows.push_back(r);
        if (greedy) {
            auto g0 = std::chrono::steady_clock::now();
            ft::GreedyResult g = ft::greedy_hartnell_li(orig);
            CsvRow gr{file, orig.tree.n, orig.tree.max_depth, "-", "greedy",
                      g.value, "", "", elapsed_ms(g0)};
            if (exact) {
                gr.exact = std::to_string(exact_value);
                gr.ratio = ratio_str(g.value, exact_value);
            }
            rows.push_back(gr);
        }
        print_csv(std::cout, rows);
        return kOk;
    }

    ft::Json out;
    out["value"] = value;
    out["plan"] = plan.vertices;
    out["lp_value"] = ft::rat_str(res.core.lp_value);
    if (greedy) {
        ft::GreedyResult g = ft::greedy_hartnell_li(orig);
        out["greedy_value"] = g.value;
        out["greedy_plan"] = g.plan.vertices;
    }
    if (exact) {
        out["exact_value"] = exact_value;
        out["ratio_vs_exact"] = ratio_str(value, exact_value);
    }
    output_json(out, out_path);
    return kOk;
}

int run_solve_rmfc(const std::string& file, bool exact, bool emit_csv,
                   long long node_cap, const std::string& out_path) {
    ft::InstanceDoc doc = ft::instance_from_json(ft::load_json(file));
    if (doc.kind != "rmfc") throw ft::ParseError("solve-rmfc needs an rmfc instance");
    if (doc.budget_model != "uniform")
        throw ft::ParseError("solve-rmfc expects the uniform budget model; "
                             "pow2 files are transform artifacts");

    auto t0 = std::chrono::steady_clock::now();
    ft::RmfcPipelineResult res = ft::rmfc_pipeline(doc.tree, node_cap);
    double ms = elapsed_ms(t0);

    long long b_opt = 0;
    if (exact) b_opt = ft::brute_force_rmfc(doc.tree).b_opt;

    if (emit_csv) {
        CsvRow r{file, doc.tree.n, doc.tree.max_depth, "-", "rmfc-pipeline",
                 res.budget, "", "", ms};
        if (exact) {
            r.exact = std::to_string(b_opt);
            r.ratio = ratio_str(res.budget, b_opt);
        }
        print_csv(std::cout, {r});
        return kOk;
    }

    ft::Json out;
    out["budget"] = res.budget;
    out["plan"] = res.plan.vertices;
    if (exact) {
        out["b_opt"] = b_opt;
        out["ratio"] = ratio_str(res.budget, b_opt);
    }
    output_json(out, out_path);
    return kOk;
}

int run_transform(const std::string& file, const std::string& which,
                  const std::string& delta_str, const std::string& alpha_str,
                  long long lambda, const std::string& out_path,
                  const std::string& trace_path) {
    ft::InstanceDoc doc = ft::instance_from_json(ft::load_json(file));
    ft::InstanceDoc result;
    ft::TransformTrace trace;

    if (which == "compress-rmfc") {
        if (doc.kind != "rmfc") throw ft::ParseError("compress-rmfc needs an rmfc instance");
        if (doc.budget_model != "uniform")
            throw ft::ParseError("compress-rmfc needs the uniform budget model");
        auto [rinst, tr] = ft::compress_rmfc(doc.tree);
        result.kind = "rmfc";
        result.tree = rinst.tree;
        result.budget_model = "pow2";
        trace = std::move(tr);
    } else {
        if (doc.kind != "ff") throw ft::ParseError(which + " needs an ff instance");
        ft::FfInstance inst = doc.to_ff();
        std::pair<ft::FfInstance, ft::TransformTrace> r;
        try {
            if (which == "unit-budget") {
                r = ft::general_to_unit_budget(inst);
            } else if (which == "unit-weight") {
                r = ft::weighted_to_unit_weight(inst, ft::parse_rat(delta_str),
                                                ft::parse_rat(alpha_str));
            } else if (which == "compress-ff") {
                r = ft::compress_ff(inst, ft::parse_rat(delta_str));
            } else if (which == "prune") {
                r = ft::prune(inst, lambda);
            } else {
                throw ft::ParseError("unknown transform: " + which);
            }
        } catch (const std::invalid_argument& e) {
            throw ft::ParseError(e.what());
        }
        result.kind = "ff";
        result.tree = r.first.tree;
        result.weights = r.first.weight;
        result.budgets = r.first.budget;
        trace = std::move(r.second);
    }

    if (!trace_path.empty()) ft::save_json(trace_path, ft::trace_to_json(trace));
    output_json(ft::instance_to_json(result), out_path);
    return kOk;
}

int run_lift(const std::string& trace_path, const std::string& plan_path,
             const std::string& out_path) {
    ft::TransformTrace trace = ft::trace_from_json(ft::load_json(trace_path));
    ft::PlanDoc pd = ft::plan_from_json(ft::load_json(plan_path));
    ft::Plan lifted;
    try {
        lifted = ft::lift_plan(trace, pd.plan);
    } catch (const std::exception& e) {
        throw ft::ParseError(std::string("cannot lift plan: ") + e.what());
    }
    output_json(ft::plan_to_json(lifted, pd.budget), out_path);
    return kOk;
}

int run_check(const std::string& inst_path, const std::string& plan_path,
              const std::string& out_path) {
    ft::InstanceDoc doc = ft::instance_from_json(ft::load_json(inst_path));
    ft::PlanDoc pd = ft::plan_from_json(ft::load_json(plan_path), &doc.tree);

    ft::Json out;
    bool ok = false;
    if (doc.kind == "ff") {
        ft::FfInstance inst = doc.to_ff();
        ft::CheckResult chk = ft::validate_protection(inst, pd.plan);
        ok = chk.ok;
        out["feasible"] = ok;
        out["value"] = ft::saved_weight(inst, pd.plan);
        if (!ok) out["reason"] = chk.reason;
    } else if (doc.budget_model == "pow2") {
        ft::RmfcInstance inst = doc.to_rmfc_pow2();
        long long B = pd.budget ? *pd.budget : smallest_pow2_budget(inst, pd.plan);
        ft::CheckResult chk = ft::validate_protection(inst, pd.plan, B);
        ok = chk.ok && ft::rmfc_feasible(inst.tree, pd.plan);
        out["feasible"] = ok;
        out["budget"] = B;
        if (!chk.ok)
            out["reason"] = chk.reason;
        else if (!ok)
            out["reason"] = "some leaf is not cut off from the root";
    } else {
        long long B = pd.budget ? *pd.budget : smallest_uniform_budget(doc.tree, pd.plan);
        ft::CheckResult chk = ft::validate_protection_uniform(doc.tree, B, pd.plan);
        ok = chk.ok && ft::rmfc_feasible(doc.tree, pd.plan);
        out["feasible"] = ok;
        out["budget"] = B;
        if (!chk.ok)
            out["reason"] = chk.reason;
        else if (!ok)
            out["reason"] = "some leaf is not cut off from the root";
    }
    output_json(out, out_path);
    return ok ? kOk : kInfeasible;
}

int run_bench(unsigned long long seed, int count, int nmax, const std::string& kind,
              const std::string& out_path) {
    if (count < 1 || nmax < 4) throw ft::ParseError("bench needs count >= 1 and nmax >= 4");
    std::vector<CsvRow> rows;
    for (int i = 0; i < count; ++i) {
        int n = 4 + (i % (nmax - 3));
        unsigned long long s = seed + static_cast<unsigned long long>(i);
        if (kind == "ff" || kind == "both") {
            ft::InstanceDoc doc = make_instance(s, n, "random", "ff");
            ft::FfInstance inst = doc.to_ff();
            std::string name = "ff-" + std::to_string(s);
            long long exact = ft::brute_force_ff(inst).value;
            auto t0 = std::chrono::steady_clock::now();
            ft::PtasResult res = ft::ptas_pipeline(inst, ft::rat(1, 2));
            rows.push_back({name, n, inst.tree.max_depth, "1/2", "ptas", res.value,
                            std::to_string(exact), ratio_str(res.value, exact),
                            elapsed_ms(t0)});
            auto t1 = std::chrono::steady_clock::now();
            ft::GreedyResult g = ft::greedy_hartnell_li(inst);
            rows.push_back({name, n, inst.tree.max_depth, "-", "greedy", g.value,
                            std::to_string(exact), ratio_str(g.value, exact),
                            elapsed_ms(t1)});
        }
        if (kind == "rmfc" || kind == "both") {
            ft::InstanceDoc doc = make_instance(s, n, "random", "rmfc");
            std::string name = "rmfc-" + std::to_string(s);
            long long b_opt = ft::brute_force_rmfc(doc.tree).b_opt;
            auto t0 = std::chrono::steady_clock::now();
            ft::RmfcPipelineResult res = ft::rmfc_pipeline(doc.tree);
            rows.push_back({name, n, doc.tree.max_depth, "-", "rmfc-pipeline",
                            res.budget, std::to_string(b_opt),
                            ratio_str(res.budget, b_opt), elapsed_ms(t0)});
        }
    }
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw ft::ParseError("cannot write " + out_path);
        print_csv(f, rows);
    } else {
        print_csv(std::cout, rows);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"firefighter PTAS and RMFC solver toolkit"};
    app.require_subcommand(1);
    int rc = kOk;

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    unsigned long long gen_seed = 1;
    int gen_n = 8;
    std::string gen_shape = "random", gen_kind = "ff", gen_out;
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--n", gen_n, "number of vertices (root included)");
    gen->add_option("--shape", gen_shape, "random|spider|path|binary");
    gen->add_option("--kind", gen_kind, "ff|rmfc");
    gen->add_option("-o,--out", gen_out, "output file (stdout if absent)");
    gen->callback([&] {
        output_json(ft::instance_to_json(make_instance(gen_seed, gen_n, gen_shape, gen_kind)),
                    gen_out);
    });

    // solve-ff
    auto* sff = app.add_subcommand("solve-ff", "run the firefighter PTAS");
    std::string sff_file, sff_eps = "1/2", sff_out;
    bool sff_exact = false, sff_greedy = false, sff_csv = false;
    int sff_threads = 0, sff_cap = 20;
    sff->add_option("file", sff_file, "instance file")->required();
    sff->add_option("--eps", sff_eps, "approximation parameter in (0,1)");
    sff->add_flag("--exact", sff_exact, "also run the brute-force oracle");
    sff->add_flag("--greedy", sff_greedy, "also run the greedy baseline");
    sff->add_flag("--emit-csv", sff_csv, "print a CSV row instead of JSON");
    sff->add_option("--threads", sff_threads, "OpenMP threads (0 = default)");
    sff->add_option("--enum-cap", sff_cap, "largest |Q| to enumerate");
    sff->add_option("-o,--out", sff_out, "result file (stdout if absent)");
    sff->callback([&] {
        rc = run_solve_ff(sff_file, sff_eps, sff_exact, sff_greedy, sff_csv,
                          sff_threads, sff_cap, sff_out);
    });

    // solve-rmfc
    auto* srm = app.add_subcommand("solve-rmfc", "run the RMFC 12-approximation");
    std::string srm_file, srm_out;
    bool srm_exact = false, srm_csv = false;
    int srm_threads = 0;
    long long srm_cap = 1'000'000;
    srm->add_option("file", srm_file, "instance file")->required();
    srm->add_flag("--exact", srm_exact, "also run the brute-force oracle");
    srm->add_flag("--emit-csv", srm_csv, "print a CSV row instead of JSON");
    srm->add_option("--threads", srm_threads, "accepted for symmetry; solver is serial");
    srm->add_option("--enum-cap", srm_cap, "guided-enumeration node cap");
    srm->add_option("-o,--out", srm_out, "result file (stdout if absent)");
    srm->callback([&] {
        (void)srm_threads;
        rc = run_solve_rmfc(srm_file, srm_exact, srm_csv, srm_cap, srm_out);
    });

    // transform
    auto* tra = app.add_subcommand("transform", "apply one instance transform");
    std::string tra_file, tra_which, tra_delta = "1/2", tra_alpha = "1", tra_out,
                tra_trace;
    long long tra_lambda = 2;
    tra->add_option("file", tra_file, "instance file")->required();
    tra->add_option("--which", tra_which,
                    "unit-budget|unit-weight|compress-ff|compress-rmfc|prune")
        ->required();
    tra->add_option("--delta", tra_delta, "grid / scaling parameter");
    tra->add_option("--alpha", tra_alpha, "unit-weight guarantee parameter");
    tra->add_option("--lambda", tra_lambda, "prune aggressiveness (integer >= 1)");
    tra->add_option("-o,--out", tra_out, "transformed instance file (stdout if absent)");
    tra->add_option("--trace", tra_trace, "trace file for later lifting");
    tra->callback([&] {
        rc = run_transform(tra_file, tra_which, tra_delta, tra_alpha, tra_lambda,
                           tra_out, tra_trace);
    });

    // lift
    auto* lif = app.add_subcommand("lift", "map a plan back through a transform trace");
    std::string lif_trace, lif_plan, lif_out;
    lif->add_option("--trace", lif_trace, "trace file")->required();
    lif->add_option("--plan", lif_plan, "plan file")->required();
    lif->add_option("-o,--out", lif_out, "lifted plan file (stdout if absent)");
    lif->callback([&] { rc = run_lift(lif_trace, lif_plan, lif_out); });

    // check
    auto* chk = app.add_subcommand("check", "validate a plan against an instance");
    std::string chk_inst, chk_plan, chk_out;
    chk->add_option("instance", chk_inst, "instance file")->required();
    chk->add_option("plan", chk_plan, "plan file")->required();
    chk->add_option("-o,--out", chk_out, "verdict file (stdout if absent)");
    chk->callback([&] { rc = run_check(chk_inst, chk_plan, chk_out); });

    // bench
    auto* ben = app.add_subcommand("bench", "benchmark table over generated instances");
    unsigned long long ben_seed = 1;
    int ben_count = 5, ben_nmax = 12;
    std::string ben_kind = "both", ben_out;
    ben->add_option("--seed", ben_seed, "base RNG seed");
    ben->add_option("--count", ben_count, "instances per kind");
    ben->add_option("--nmax", ben_nmax, "largest instance size");
    ben->add_option("--kind", ben_kind, "ff|rmfc|both");
    ben->add_option("-o,--out", ben_out, "CSV file (stdout if absent)");
    ben->callback([&] { rc = run_bench(ben_seed, ben_count, ben_nmax, ben_kind, ben_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    } catch (const ft::EnumerationBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResourceCap;
    } catch (const ft::InstanceTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ft::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return rc;
}
