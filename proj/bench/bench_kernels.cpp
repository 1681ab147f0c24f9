// Serial reference vs OpenMP kernels: wall time and output equality.
// usage: bench_kernels [n] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>

#include "ahr/ah_index.hpp"
#include "ahr/synthetic.hpp"

using namespace ahr;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double timed(F&& f) {
    auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void row(const char* kernel, double serial, double parallel, bool same) {
    std::printf("%-22s %10.3f %10.3f %8.2fx  %s\n", kernel, serial, parallel, parallel > 0 ? serial / parallel : 0.0,
                same ? "identical" : "DIFFERENT");
}

std::string bytes(const AhHierarchy& H) {
    std::stringstream s;
    write_ah(H, s);
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    NodeId n = argc > 1 ? NodeId(std::strtoul(argv[1], nullptr, 10)) : 10000;
    int threads = argc > 2 ? std::atoi(argv[2]) : threads_from_env();
    if (threads > 0) set_threads(threads);

    RoadNetwork net = perturb(random_planar(n, 1), 2, 1);
    GridHierarchy g = build_grids(net);
    std::printf("n=%u m=%zu h=%d threads=%d\n", net.n(), net.m(), g.h(), max_threads());
    std::printf("%-22s %10s %10s %9s\n", "kernel", "serial_s", "omp_s", "speedup");

    std::vector<ArcKey> as, ap;
    double s = timed([&] { as = arterial_edges_at_level(g, net, 1, Exec::Serial); });
    double p = timed([&] { ap = arterial_edges_at_level(g, net, 1, Exec::Parallel); });
    row("arterial_edges L1", s, p, as == ap);

    CoreTrace ts, tp;
    s = timed([&] { ts = select_cores(net, g, Exec::Serial); });
    p = timed([&] { tp = select_cores(net, g, Exec::Parallel); });
    row("select_cores", s, p, ts.level == tp.level && ts.cover == tp.cover);

    CoreAssignment c = rank_and_downgrade(ts, kDefaultSeed);
    AhHierarchy hs, hp;
    s = timed([&] { hs = build_shortcuts(net, g, c, Exec::Serial); });
    p = timed([&] { hp = build_shortcuts(net, g, c, Exec::Parallel); });
    row("build_shortcuts", s, p, bytes(hs) == bytes(hp));

    std::mt19937_64 rng(3);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (int i = 0; i < 20000; ++i) pairs.push_back({NodeId(draw_below(rng, n)), NodeId(draw_below(rng, n))});
    std::vector<PathWeight> ds(pairs.size()), dp(pairs.size());
    s = timed([&] {
        for (size_t i = 0; i < pairs.size(); ++i) ds[i] = hs.distance(pairs[i].first, pairs[i].second);
    });
    p = timed([&] {
#pragma omp parallel for schedule(dynamic, 64)
        for (int64_t i = 0; i < int64_t(pairs.size()); ++i)
            dp[size_t(i)] = hs.distance(pairs[size_t(i)].first, pairs[size_t(i)].second);
    });
    row("query batch (20k)", s, p, ds == dp);
    return 0;
}
