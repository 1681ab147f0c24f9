#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"

using namespace ahr;

namespace {

PathWeight pw(double len, std::initializer_list<uint64_t> nu) {
    PathWeight w;
    w.length = len;
    w.k = uint8_t(nu.size());
    int i = 0;
    for (uint64_t x : nu) w.nuance[i++] = x;
    return w;
}

RoadNetwork two_nodes(Coord a, Coord b, double w = 1) {
    std::vector<Edge> e = {{0, 1, PathWeight{}}, {1, 0, PathWeight{}}};
    e[0].w.length = e[1].w.length = w;
    return RoadNetwork::build({a, b}, e);
}

}  // namespace

TEST_CASE("minimal DIMACS pair") {
    std::istringstream gr("c tiny\np sp 2 2\na 1 2 5\na 2 1 5\n");
    std::istringstream co("p aux sp co 2\nv 1 10 20\nv 2 13 24\n");
    RoadNetwork net = parse_dimacs(gr, co);
    CHECK(net.n() == 2);
    CHECK(net.m() == 2);
    CHECK(net.d_max() == 4);
    CHECK(net.edge(0).w.length == 5);
}

TEST_CASE("DIMACS errors carry file and line") {
    std::istringstream gr("p sp 2 1\na 1 x 5\n");
    std::istringstream co("p aux sp co 2\nv 1 0 0\nv 2 1 1\n");
    try {
        parse_dimacs(gr, co);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("gr:2") != std::string::npos);
    }
    std::istringstream gr2("p sp 3 1\na 1 2 5\n");
    std::istringstream co2("p aux sp co 2\nv 1 0 0\nv 2 1 1\n");
    CHECK_THROWS_AS(parse_dimacs(gr2, co2), ValidationError);
}

TEST_CASE("Manhattan grid survives a DIMACS round trip") {
    GridSpec spec;
    RoadNetwork net = manhattan_grid(spec, 3);
    std::stringstream gr, co;
    write_dimacs(net, gr, co);
    RoadNetwork back = parse_dimacs(gr, co);
    CHECK(back == net);
    CHECK(back.n() == 100);
}

TEST_CASE("binary snapshot round trip, plain and perturbed") {
    RoadNetwork net = random_planar(300, 5);
    for (const RoadNetwork& x : {net, perturb(net, 2, 9)}) {
        std::stringstream buf;
        write_snapshot(x, buf);
        CHECK(read_snapshot(buf) == x);
    }
    std::stringstream junk("XXXX....");
    CHECK_THROWS_AS(read_snapshot(junk), ParseError);
}

TEST_CASE("ingestion drops self-loops and keeps the shorter parallel arc") {
    std::vector<Edge> e(4);
    e[0] = {0, 1, {}};
    e[0].w.length = 5;
    e[1] = {0, 1, {}};
    e[1].w.length = 3;
    e[2] = {1, 1, {}};
    e[2].w.length = 1;
    e[3] = {1, 0, {}};
    e[3].w.length = 2;
    RoadNetwork net = RoadNetwork::build({{0, 0}, {1, 0}}, e);
    CHECK(net.m() == 2);
    CHECK(net.edge(net.find_edge(0, 1)).w.length == 3);
}

TEST_CASE("perturbation range arithmetic") {
    // 32 * 10 * 100^3 * C(4,2)
    unsigned __int128 tau = perturbation_tau(100, 4, 10);
    CHECK(uint64_t(tau) == 1920000000ULL);
    CHECK(perturbation_tau_prime(tau, 2) == 43818);
    CHECK(perturbation_tau_prime(tau, 1) == 1920000000ULL);
    CHECK(perturbation_tau_prime(1, 3) == 1);
}

TEST_CASE("degenerate nuance range gives all-zero nuances") {
    RoadNetwork net = random_planar(50, 2);
    RoadNetwork p = perturb_with_range(net, 1, 1, 7);
    for (const auto& e : p.edges()) CHECK(e.w.nuance[0] == 0);
}

TEST_CASE("perturbation is seeded and bounded") {
    RoadNetwork net = random_planar(200, 4);
    RoadNetwork a = perturb(net, 2, 11), b = perturb(net, 2, 11), c = perturb(net, 2, 12);
    CHECK(a == b);
    CHECK(!(a == c));
    CHECK(a.k() == 2);
    for (const auto& e : a.edges()) {
        CHECK(e.w.nuance[0] < a.tau_prime());
        CHECK(e.w.nuance[1] < a.tau_prime());
        CHECK(e.w.nuance[2] == 0);
    }
    CHECK_THROWS_AS(perturb(net, 5, 1), ContractError);
}

TEST_CASE("path weight order") {
    CHECK(compare_path_weights(pw(10, {99, 99}), pw(11, {0, 0})) < 0);
    CHECK(compare_path_weights(pw(10, {3, 7}), pw(10, {3, 9})) < 0);
    CHECK(compare_path_weights(pw(10, {3, 9}), pw(10, {3, 7})) > 0);
    PathWeight x = pw(4, {1, 2});
    CHECK(compare_path_weights(x, x) == 0);
    std::vector<NodeId> s1 = {0, 1, 2}, s2 = {0, 3, 2};
    CHECK(compare_path_weights(x, x, &s1, &s2) < 0);
    CHECK_THROWS_AS(compare_path_weights(x, pw(4, {1})), ContractError);
}

TEST_CASE("grid depth") {
    CHECK(compute_h(two_nodes({0, 0}, {5, 5})) == 1);

    // equator-scale spread with unit spacing somewhere
    std::vector<Coord> c = {{0, 0}, {1, 0}, {4e7, 0}};
    std::vector<Edge> e;
    for (NodeId i = 0; i + 1 < 3; ++i) {
        e.push_back({i, i + 1, {}});
        e.back().w.length = 1;
    }
    RoadNetwork eq = RoadNetwork::build(c, e);
    int h = compute_h(eq);
    CHECK(h <= 26);
    CHECK(h <= int(std::ceil(std::log2(eq.d_max() / eq.d_min()))));

    // coincident nodes are moved apart, not merged
    std::vector<Coord> many(8, Coord{0, 0});
    many.push_back({64, 0});
    std::vector<Edge> me;
    for (NodeId i = 0; i + 1 < many.size(); ++i) {
        me.push_back({i, i + 1, {}});
        me.back().w.length = 1;
    }
    RoadNetwork snapped = RoadNetwork::build(many, me);
    CHECK(snapped.n() == 9);
    CHECK(snapped.snapped_nodes() == 7);
    CHECK(snapped.d_min() > 0);
}

TEST_CASE("h never exceeds the log of the spread on generated inputs") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        RoadNetwork net = random_planar(500, seed);
        CHECK(compute_h(net) <= int(std::ceil(std::log2(net.d_max() / net.d_min()))));
    }
}

TEST_CASE("path helpers") {
    RoadNetwork net = path_network({3, 4});
    CHECK(is_graph_path(net, {0, 1, 2}));
    CHECK(!is_graph_path(net, {0, 2}));
    CHECK(path_weight(net, {0, 1, 2}).length == 7);
    CHECK(net.weakly_connected());
}
