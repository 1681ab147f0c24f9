#include <doctest.h>

#include <algorithm>
#include <functional>

#include "fixtures.hpp"

using namespace ahr;
using fx::v;

namespace {

RegionGraph fixture_region_graph(const RoadNetwork& net, const GridHierarchy& g) {
    CellIndex cells(g, 1);
    return RegionGraph(g, net, cells, fx::paper_region());
}

const SpanningPathRecord* find_record(const std::vector<SpanningPathRecord>& recs, NodeId s, NodeId t, Axis a) {
    for (const auto& r : recs)
        if (r.axis == a && r.path.nodes.front() == s && r.path.nodes.back() == t) return &r;
    return nullptr;
}

// Minimum over all simple paths whose interior stays inside the region and
// which use at most one edge between inside and outside, by enumeration.
PathWeight brute_local(const RegionGraph& rg, int s, int t) {
    PathWeight best = PathWeight::infinity();
    std::vector<char> on(rg.nodes.size(), 0);
    std::function<void(int, PathWeight, int)> dfs = [&](int x, PathWeight w, int boundary) {
        if (x == t) {
            if (w < best) best = w;
            return;
        }
        if (!rg.inside[x] && x != s) return;
        for (const auto& a : rg.out[x]) {
            if (on[a.to]) continue;
            if (!rg.inside[a.to] && a.to != t) continue;
            int nb = boundary + (rg.inside[x] != rg.inside[a.to]);
            if (nb > 1 || (!rg.inside[x] && !rg.inside[a.to])) continue;
            on[a.to] = 1;
            dfs(a.to, w + a.w, nb);
            on[a.to] = 0;
        }
    };
    on[s] = 1;
    dfs(s, PathWeight{}, 0);
    return best;
}

}  // namespace

TEST_CASE("spanning paths of the fixture region") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    RegionGraph rg = fixture_region_graph(net, g);
    CHECK(rg.nodes.size() == 11);
    auto recs = spanning_paths(rg);

    auto* a = find_record(recs, v(9), v(8), Axis::WestEast);
    REQUIRE(a != nullptr);
    CHECK(a->path.nodes == std::vector<NodeId>{v(9), v(6), v(10), v(8)});
    CHECK(a->path.weight.length == 6);
    CHECK(a->arterial_edge == ArcKey{v(6), v(10)});

    auto* b = find_record(recs, v(11), v(4), Axis::WestEast);
    REQUIRE(b != nullptr);
    CHECK(b->path.nodes == std::vector<NodeId>{v(11), v(7), v(4)});
    CHECK(b->arterial_edge == ArcKey{v(11), v(7)});

    auto we = arterial_edges(rg, Axis::WestEast);
    CHECK(std::find(we.begin(), we.end(), ArcKey{v(6), v(10)}) != we.end());
    CHECK(std::find(we.begin(), we.end(), ArcKey{v(11), v(7)}) != we.end());
    for (const auto& e : we) CHECK(rg.crosses(rg.local.at(e.tail), rg.local.at(e.head), Axis::WestEast));
    CHECK(is_spanning_path(g, net, fx::paper_region(), a->path.nodes, Axis::WestEast));
    CHECK(!is_spanning_path(g, net, fx::paper_region(), {v(9), v(5), v(8)}, Axis::WestEast));
}

TEST_CASE("local sweep matches exhaustive enumeration") {
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        RoadNetwork net = perturb(random_planar(40, seed), 2, seed);
        GridHierarchy g = build_grids(net);
        int level = std::max(1, g.h() - 1);
        CellIndex cells(g, level);
        auto regions = g.regions_4x4(level, true);
        for (size_t i = 0; i < regions.size(); i += 3) {
            RegionGraph rg(g, net, cells, regions[i]);
            if (rg.nodes.size() > 14) continue;
            for (int s = 0; s < int(rg.nodes.size()); ++s) {
                LocalTree T = local_sweep(rg, s, Direction::Forward);
                for (int t = 0; t < int(rg.nodes.size()); ++t) {
                    if (t == s) continue;
                    PathWeight want = brute_local(rg, s, t);
                    PathWeight got = T.dist[T.best_state(t)];
                    CHECK(got == want);
                    if (!got.is_infinite()) {
                        auto p = T.path_to(rg, t, Direction::Forward);
                        CHECK(path_weight(net, p) == got);
                    }
                }
            }
        }
    }
}

TEST_CASE("backward sweep mirrors forward distances") {
    RoadNetwork net = perturb(random_planar(60, 3), 2, 3);
    GridHierarchy g = build_grids(net);
    CellIndex cells(g, 1);
    for (const Region& r : g.regions_4x4(1, true)) {
        RegionGraph rg(g, net, cells, r);
        const int L = int(rg.nodes.size());
        for (int t = 0; t < L; ++t) {
            if (!rg.inside[t]) continue;
            LocalTree B = local_sweep(rg, t, Direction::Backward);
            for (int s = 0; s < L; ++s) {
                if (!rg.inside[s]) continue;
                LocalTree F = local_sweep(rg, s, Direction::Forward);
                CHECK(F.dist[F.best_state(t)] == B.dist[B.best_state(s)]);
            }
        }
        break;
    }
}

TEST_CASE("avenue grids have few arterial edges") {
    const std::vector<int> rows = {0, 7, 15, 22, 31}, cols = {0, 5, 13, 20, 31};
    RoadNetwork net = perturb(avenue_network(32, 32, rows, cols, 5), 2, 5);
    ArterialProfile p = arterial_profile(net, {3, 4, 5, 6});
    REQUIRE(p.rows.size() == 4);
    for (const auto& s : p.rows) {
        CHECK(s.regions > 0);
        CHECK(s.max <= std::max(rows.size(), cols.size()));
        CHECK(s.q90 <= s.q99);
        CHECK(s.q99 <= s.max);
        CHECK(s.mean <= double(s.max));
    }
}

TEST_CASE("a single avenue per axis gives one arterial segment") {
    RoadNetwork net = perturb(avenue_network(32, 32, {11}, {19}, 2), 2, 2);
    ArterialProfile p = arterial_profile(net, {4, 5});
    for (const auto& s : p.rows) CHECK(s.max == 1);
}

TEST_CASE("profile skips out-of-range resolutions") {
    RoadNetwork net = random_planar(80, 2);
    ArterialProfile p = arterial_profile(net, {1, 4, 99});
    CHECK(p.rows.size() == 1);
    CHECK(p.skipped == std::vector<int>{1, 99});
    std::string csv = profile_csv(p);
    CHECK(csv.rfind("r,regions,max,mean,q90,q99\n", 0) == 0);
    CHECK(profile_csv(arterial_profile(net, {})) == "r,regions,max,mean,q90,q99\n");
}

TEST_CASE("serial and parallel arterial edges agree") {
    RoadNetwork net = perturb(random_planar(500, 4), 2, 4);
    GridHierarchy g = build_grids(net);
    for (int i = 1; i <= g.h(); ++i)
        CHECK(arterial_edges_at_level(g, net, i, Exec::Serial) == arterial_edges_at_level(g, net, i, Exec::Parallel));
}

TEST_CASE("sliding window yields spanning paths") {
    RoadNetwork net = perturb(random_planar(600, 6), 2, 6);
    GridHierarchy g = build_grids(net);
    auto pairs = fx::random_pairs(net.n(), 80, 6);
    int checked = 0;
    for (auto [s, t] : pairs) {
        auto path = dijkstra(net, s, t).path;
        for (int level = 1; level <= g.h(); ++level) {
            if (path.size() < 2 || g.same_3x3_region(s, t, level)) continue;
            // the whole path must escape every 3x3 block at this level
            SlidingWindowResult w;
            try {
                w = sliding_window(g, path, level);
            } catch (const ContractError&) {
                continue;
            }
            CHECK(is_spanning_path(g, net, w.region, w.subpath, w.axis));
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("sliding window rejects local paths") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    CHECK_THROWS_AS(sliding_window(g, {v(9), v(6)}, 1), ContractError);
    CHECK_THROWS_AS(sliding_window(g, {}, 1), ContractError);
    auto w = sliding_window(g, {v(9), v(6), v(10), v(8)}, 1);
    CHECK(w.subpath == std::vector<NodeId>{v(9), v(6), v(10), v(8)});
    CHECK(w.axis == Axis::WestEast);
}

TEST_CASE("uniqueness check") {
    RoadNetwork ties = tie_heavy(30, 1);
    CHECK(!local_paths_unique(build_grids(ties), ties));
    RoadNetwork p = perturb(ties, 2, 1);
    CHECK(local_paths_unique(build_grids(p), p));
}
