#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"

using namespace ahr;
using fx::v;

namespace {

CoreAssignment ranked_by_level(const std::vector<int>& level) {
    CoreAssignment c;
    c.level = level;
    std::vector<NodeId> order(level.size());
    std::iota(order.begin(), order.end(), NodeId(0));
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return level[a] < level[b]; });
    c.rank.assign(level.size(), 0);
    for (NodeId i = 0; i < order.size(); ++i) c.rank[order[i]] = i;
    return c;
}

struct Built {
    RoadNetwork net;
    AhHierarchy index;
};

Built build_random(NodeId n, uint64_t seed) {
    Built b;
    b.net = perturb(random_planar(n, seed), 2, seed);
    AhOptions o;
    o.seed = seed;
    b.index = build_ah(b.net, o);
    return b;
}

}  // namespace

TEST_CASE("greedy vertex cover") {
    std::vector<ArcKey> e = {{0, 1}, {1, 0}, {0, 2}, {3, 0}, {4, 5}};
    CHECK(greedy_vertex_cover(e) == std::vector<NodeId>{0, 4});
    CHECK(greedy_vertex_cover({}).empty());
    // a path a-b-c-d: b and c tie, smaller id first, then c still has d
    CHECK(greedy_vertex_cover({{1, 2}, {2, 3}, {3, 4}}) == std::vector<NodeId>{2, 3});
}

TEST_CASE("fixture query with supplied cores") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    CoreAssignment c = ranked_by_level(fx::paper_levels());
    REQUIRE(c.rank[v(11)] > c.rank[v(10)]);
    AhHierarchy H = build_shortcuts(net, g, c, Exec::Serial);
    QueryTrace tr;
    QueryStats st;
    PathWeight d = H.distance(v(1), v(10), &st, &tr);
    CHECK(d.length == 7);
    CHECK(tr.settled[0].size() <= 3);
    CHECK(tr.settled[1].size() <= 3);
    auto p = H.shortest_path(v(1), v(10));
    CHECK(p.nodes == dijkstra(net, v(1), v(10)).path);

    auto ap = all_pairs_small(net);
    for (NodeId s = 0; s < net.n(); ++s)
        for (NodeId t = 0; t < net.n(); ++t) CHECK(H.distance(s, t) == ap[s][t]);
}

TEST_CASE("nested shortcuts unpack recursively") {
    RoadNetwork net = path_network({1, 2, 3, 4, 5});
    AhHierarchy H;
    H.coords = net.coords();
    H.grid = GridHierarchy(1, {0, 0}, 8, H.coords);
    H.cores.level.assign(6, 0);
    H.cores.rank = {3, 0, 1, 5, 2, 4};
    H.border_level.assign(6, 0);
    for (const auto& e : net.edges()) H.edges.push_back({e.tail, e.head, e.w});
    auto shortcut = [&](int a, int b, NodeId via) {
        AhShortcut s;
        s.tail = v(a);
        s.head = v(b);
        s.via = via;
        s.kind = ShortcutKind::LevelEdge;
        s.w = path_weight(net, [&] {
            std::vector<NodeId> p;
            for (int i = a; i <= b; ++i) p.push_back(v(i));
            return p;
        }());
        H.edges.push_back(s);
    };
    shortcut(1, 4, v(2));
    shortcut(2, 4, v(3));
    shortcut(4, 6, v(5));
    H.finalize();

    auto r = H.shortest_path(v(1), v(6));
    CHECK(r.distance.length == 15);
    CHECK(r.nodes == std::vector<NodeId>{v(1), v(2), v(3), v(4), v(5), v(6)});
    CHECK(r.hierarchy_hops == 2);
    CHECK(r.substitutions == 3);
}

TEST_CASE("AH matches Dijkstra on random graphs") {
    for (uint64_t seed : {1, 2, 3}) {
        Built b = build_random(1500, seed);
        const AhHierarchy& H = b.index;
        for (auto [s, t] : fx::random_pairs(b.net.n(), 200, seed)) {
            SearchResult ref = dijkstra(b.net, s, t);
            auto r = H.shortest_path(s, t);
            CHECK(r.distance == ref.distance);
            CHECK(r.nodes == ref.path);
            if (r.nodes.size() >= 2) CHECK(r.substitutions + 1 <= 2 * (r.nodes.size() - 1));
        }
        CHECK(count_level_violations(H, b.net, fx::random_pairs(b.net.n(), 200, seed + 100)) == 0);
    }
}

TEST_CASE("every shortcut unpacks to its own weight") {
    Built b = build_random(800, 4);
    const AhHierarchy& H = b.index;
    size_t nontrivial = 0;
    for (uint32_t i = 0; i < H.edges.size(); ++i) {
        const auto& e = H.edges[i];
        std::vector<NodeId> p{e.tail};
        uint64_t subs = 0;
        H.unpack(i, p, &subs);
        CHECK(p.back() == e.head);
        REQUIRE(is_graph_path(b.net, p));
        CHECK(path_weight(b.net, p) == e.w);
        CHECK(subs + 1 <= 2 * (p.size() - 1));
        nontrivial += e.via != kNoNode;
    }
    CHECK(nontrivial > 0);
}

TEST_CASE("ranks and levels") {
    RoadNetwork net = perturb(random_planar(1000, 7), 2, 7);
    GridHierarchy g = build_grids(net);
    CoreTrace tr = select_cores(net, g);
    CHECK(tr.h == g.h());
    CHECK(tr.overlay_nodes.size() == size_t(g.h()));
    CHECK(tr.overlay_nodes[0] == net.n());
    CoreAssignment c = rank_and_downgrade(tr, 7);
    std::vector<uint32_t> r = c.rank;
    std::sort(r.begin(), r.end());
    for (uint32_t i = 0; i < r.size(); ++i) REQUIRE(r[i] == i);
    for (NodeId a = 0; a < net.n(); ++a) {
        CHECK(c.level[a] >= 0);
        CHECK(c.level[a] <= g.h());
    }
    // higher level, higher rank
    for (const auto& e : net.edges())
        if (c.level[e.tail] < c.level[e.head]) CHECK(c.rank[e.tail] < c.rank[e.head]);
    // every pseudo-arterial edge has an endpoint at its level
    for (int L = 1; L <= g.h(); ++L)
        for (const auto& e : tr.pseudo[size_t(L)]) CHECK(std::max(c.level[e.tail], c.level[e.head]) >= L);
    CHECK(rank_and_downgrade(tr, 7).rank == c.rank);
}

TEST_CASE("s == t and range checks") {
    Built b = build_random(300, 5);
    CHECK(b.index.distance(4, 4).length == 0);
    auto r = b.index.shortest_path(4, 4);
    CHECK(r.nodes == std::vector<NodeId>{4});
    CHECK(r.substitutions == 0);
    CHECK_THROWS_AS(b.index.distance(0, b.net.n()), ContractError);
}

TEST_CASE("build report") {
    RoadNetwork net = random_planar(500, 6);
    AhBuildReport rep;
    AhHierarchy H = build_ah(net, {}, &rep);
    CHECK(rep.perturbed);
    CHECK(H.k == 2);
    CHECK(rep.original_edges == net.m());
    size_t total = rep.original_edges + rep.level_edges + rep.connectivity_edges + rep.elevating_edges +
                   rep.elevating_aux_edges;
    CHECK(total == H.edges.size());
    size_t nodes = 0;
    for (size_t x : rep.nodes_per_level) nodes += x;
    CHECK(nodes == net.n());
    CHECK(rep.memory_bytes > 0);
    CHECK(rep.to_string().find("levels 0:") == 0);
}

TEST_CASE("index snapshot round trip") {
    Built b = build_random(600, 8);
    std::stringstream buf;
    write_ah(b.index, buf);
    const std::string bytes = buf.str();
    AhHierarchy R = read_ah(buf);
    std::stringstream again;
    write_ah(R, again);
    CHECK(again.str() == bytes);
    CHECK(R.base_network() == b.net);
    for (auto [s, t] : fx::random_pairs(b.net.n(), 100, 8)) CHECK(R.distance(s, t) == b.index.distance(s, t));

    std::string bad = bytes;
    bad[0] = 'Z';
    std::stringstream junk(bad);
    CHECK_THROWS_AS(read_ah(junk), ParseError);
    std::stringstream cut(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS(read_ah(cut));
}

TEST_CASE("builds are deterministic") {
    RoadNetwork net = random_planar(700, 9);
    std::stringstream a, b;
    write_ah(build_ah(net), a);
    write_ah(build_ah(net), b);
    CHECK(a.str() == b.str());
}
