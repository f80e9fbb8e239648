// Compares the serial reference enumeration (threads = 1) against the
// OpenMP-parallel kernel. The instances are built so the anchor count, and
// with it the number of path-fixed LP solves, equals the leg count exactly:
// each leg is a 3-vertex chain whose bottom carries nearly all the weight,
// so the bottom is the leg's only anchor, and light filler leaves keep the
// heaviness threshold between the bottom weights and everything else.
// Results must agree bit for bit; the last column says whether they did.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "firetree/ptas.hpp"
#include "firetree/tree.hpp"

using namespace firetree;

namespace {

FfInstance anchor_spider(int legs, int fillers) {
    std::vector<int> parent{-1};
    std::vector<long long> weight{0};
    for (int i = 0; i < legs; ++i) {
        int top = static_cast<int>(parent.size());
        parent.push_back(0);
        weight.push_back(1);
        parent.push_back(top);
        weight.push_back(1);
        parent.push_back(top + 1);
        weight.push_back(55 + i % 11);
    }
    for (int i = 0; i < fillers; ++i) {
        parent.push_back(0);
        weight.push_back(1);
    }
    FfInstance inst;
    inst.tree = build_tree(parent);
    inst.weight = std::move(weight);
    inst.budget.assign(inst.tree.max_depth + 1, 1);
    inst.budget[0] = 0;
    return inst;
}

double run_ms(const FfInstance& inst, const Rat& eps, int threads,
              PtasCoreResult& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = ptas_core(inst, eps, 24, threads);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int max_legs = argc > 1 ? std::atoi(argv[1]) : 10;
    const Rat eps = rat(1, 2);

    std::printf("omp max threads: %d\n", omp_get_max_threads());
    std::printf("%-12s %4s %4s %7s %7s %12s %12s %8s %6s\n", "instance", "n",
                "|Q|", "solves", "value", "serial_ms", "parallel_ms", "speedup",
                "match");
    for (int legs = 6; legs <= max_legs; legs += 2) {
        FfInstance inst = anchor_spider(legs, 24);
        PtasCoreResult serial, parallel;
        double ms_s = run_ms(inst, eps, 1, serial);
        double ms_p = run_ms(inst, eps, 0, parallel);
        bool match = serial.value == parallel.value &&
                     serial.z_mask == parallel.z_mask &&
                     serial.lp_value == parallel.lp_value &&
                     serial.plan.vertices == parallel.plan.vertices;
        char name[32];
        std::snprintf(name, sizeof name, "spider-%d", legs);
        std::printf("%-12s %4d %4zu %7lld %7lld %12.2f %12.2f %8.2f %6s\n",
                    name, inst.tree.n, serial.decomp.q.size(), serial.lp_solves,
                    serial.value, ms_s, ms_p, ms_p > 0 ? ms_s / ms_p : 0.0,
                    match ? "yes" : "NO");
        if (!match) return 1;
    }
    return 0;
}
