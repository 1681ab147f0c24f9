#include <doctest.h>

#include "fixtures.hpp"

using namespace ahr;
using fx::v;

TEST_CASE("oracles agree on the fixture") {
    RoadNetwork net = fx::paper_network();
    SearchResult r = dijkstra(net, v(9), v(8));
    CHECK(r.distance.length == 6);
    CHECK(r.path == std::vector<NodeId>{v(9), v(6), v(10), v(8)});
    CHECK(bidirectional_dijkstra(net, v(9), v(8)).distance.length == 6);
    CHECK(bellman_ford(net, v(9))[v(8)].length == 6);
    CHECK(dijkstra(net, v(11), v(4)).path == std::vector<NodeId>{v(11), v(7), v(4)});
}

TEST_CASE("s == t") {
    RoadNetwork net = fx::paper_network();
    SearchResult r = dijkstra(net, v(3), v(3));
    CHECK(r.distance.length == 0);
    CHECK(r.path == std::vector<NodeId>{v(3)});
    CHECK(bidirectional_dijkstra(net, v(3), v(3)).distance.length == 0);
}

TEST_CASE("unreachable target") {
    std::vector<Edge> e = {{0, 1, {}}};
    e[0].w.length = 1;
    RoadNetwork net = RoadNetwork::build({{0, 0}, {1, 0}}, e);
    CHECK(dijkstra(net, 1, 0).distance.is_infinite());
    CHECK(dijkstra(net, 1, 0).path.empty());
    CHECK(bidirectional_dijkstra(net, 1, 0).distance.is_infinite());
}

TEST_CASE("Dijkstra, bidirectional and Bellman-Ford match on random graphs") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        RoadNetwork net = perturb(random_planar(300, seed), 2, seed);
        for (NodeId s : {NodeId(0), NodeId(17), NodeId(123)}) {
            auto bf = bellman_ford(net, s);
            auto tree = dijkstra_tree(net, s);
            for (NodeId t = 0; t < net.n(); t += 7) {
                CHECK(tree.dist[t] == bf[t]);
                SearchResult bi = bidirectional_dijkstra(net, s, t);
                CHECK(bi.distance == bf[t]);
                // with perturbed weights the shortest path is unique
                CHECK(bi.path == tree.path_to(t));
                CHECK(path_weight(net, bi.path) == bi.distance);
            }
        }
    }
}

TEST_CASE("backward tree mirrors forward distances") {
    RoadNetwork net = random_planar(200, 9);
    auto bw = dijkstra_tree(net, 5, true);
    for (NodeId s = 0; s < net.n(); s += 11) CHECK(dijkstra(net, s, NodeId(5)).distance == bw.dist[s]);
}

TEST_CASE("all pairs on small graphs") {
    RoadNetwork net = fx::paper_network();
    auto d = all_pairs_small(net);
    CHECK(d[v(1)][v(10)].length == 7);
    CHECK(d[v(8)][v(11)].length == 4);
    for (NodeId s = 0; s < net.n(); ++s) CHECK(d[s][s].length == 0);
    CHECK_THROWS_AS(all_pairs_small(random_planar(100, 1)), ContractError);
}

TEST_CASE("bidirectional search settles no more than unidirectional on far pairs") {
    RoadNetwork net = manhattan_grid(GridSpec{30, 30}, 1);
    SearchResult uni = dijkstra(net, 0, net.n() - 1);
    SearchResult bi = bidirectional_dijkstra(net, 0, net.n() - 1);
    CHECK(uni.distance == bi.distance);
    CHECK(bi.settled <= uni.settled);
}
