// Serial vs OpenMP timings for the data-parallel kernels. Each pair must agree
// bit for bit; a mismatch makes the program exit 1.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "fpr/fpr.hpp"
#include "fpr/zoo.hpp"

using namespace fpr;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
    }
    return best;
}

bool report(const char* name, double serial, double parallel, bool same) {
    std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, same ? "match" : "MISMATCH");
    return same;
}

}  // namespace

int main(int argc, char** argv) {
    int reps = 3;
    if (argc > 1) reps = std::max(1, std::atoi(argv[1]));
    std::printf("threads %d, best of %d\n", max_threads(), reps);
    bool ok = true;

    {
        std::int64_t a = 0, b = 0;
        const double ts = seconds([&] { a = least_region_one_sided(constants::sqrt2(), 1e-6, kDefaultTMax, Exec::Serial); }, reps);
        const double tp = seconds([&] { b = least_region_one_sided(constants::sqrt2(), 1e-6, kDefaultTMax, Exec::Parallel); }, reps);
        ok &= report("one-sided scan", ts, tp, a == b);
    }

    {
        const auto f = zoo::f2();
        FprConfig cfg;
        cfg.theta = normalize_theta(f.spec, {0.05, 0.05, 0.0375});
        const Region g = find_levels_auto(f.spec, cfg).region;
        LevelSet a, b;
        cfg.exec = Exec::Serial;
        const double ts = seconds([&] { a = find_levels(f.spec, g, cfg); }, reps);
        cfg.exec = Exec::Parallel;
        const double tp = seconds([&] { b = find_levels(f.spec, g, cfg); }, reps);
        bool same = a.levels.size() == b.levels.size();
        for (std::size_t i = 0; same && i < a.levels.size(); ++i)
            for (std::size_t j = 0; j < a.levels[i].size(); ++j) same &= a.levels[i][j].offset == b.levels[i][j].offset;
        ok &= report("level search (f2)", ts, tp, same);
    }

    const auto f1 = zoo::f1();
    FprConfig tcfg;
    tcfg.theta = normalize_theta(f1.spec, {0.1, 0.075});
    tcfg.region = Region{{0}, {20000}};
    NodeTable ta, tb;
    {
        tcfg.exec = Exec::Serial;
        const double ts = seconds([&] { ta = build_node_table(f1, tcfg); }, reps);
        tcfg.exec = Exec::Parallel;
        const double tp = seconds([&] { tb = build_node_table(f1, tcfg); }, reps);
        bool same = ta.nodes.size() == tb.nodes.size();
        for (std::size_t i = 0; same && i < ta.nodes.size(); ++i)
            same &= ta.nodes[i].offset == tb.nodes[i].offset && ta.nodes[i].value == tb.nodes[i].value;
        ok &= report("node table (f1)", ts, tp, same);
    }

    {
        std::vector<double> xs(1 << 20);
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 1e6 + 80.0 * static_cast<double>(i) / xs.size();
        std::vector<double> a, b;
        const double ts = seconds([&] { a = recover_many(ta, xs, Exec::Serial); }, reps);
        const double tp = seconds([&] { b = recover_many(ta, xs, Exec::Parallel); }, reps);
        ok &= report("batch recovery (f1)", ts, tp, std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    }

    return ok ? 0 : 1;
}
