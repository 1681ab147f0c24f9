#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"

using namespace ahr;
using fx::v;

namespace {

std::vector<SegmentRef> all_segments(const RoadNetwork& net) {
    std::vector<SegmentRef> s;
    for (const auto& e : net.edges()) s.push_back({e.tail, e.head});
    return s;
}

bool has(const std::vector<NodeId>& xs, NodeId x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); }

}  // namespace

TEST_CASE("cell geometry of the fixture grid") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    CHECK(g.cells_per_side(1) == 8);
    CHECK(g.cells_per_side(2) == 4);
    CHECK(g.cell_side(1) == 2);
    CHECK(g.cell_of(v(1), 1) == CellCoord{1, 0, 3});
    CHECK(g.cell_of(v(8), 1) == CellCoord{1, 3, 1});
    CHECK(g.cell_of(v(8), 2) == CellCoord{2, 1, 0});
    Rect r = g.cell_rect({1, 3, 1});
    CHECK(r.x0 == 6);
    CHECK(r.y1 == 4);
}

TEST_CASE("4x4 regions on an 8x8 grid") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    CHECK(g.regions_4x4(1, false).size() == 25);
    // every node sits in the lower-left quarter, so anchors must reach it
    auto ne = g.regions_4x4(1, true);
    CHECK(ne.size() == 16);
    CHECK(g.regions_4x4(2, false).size() == 1);
}

TEST_CASE("region anatomy") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    RegionAnatomy a = anatomy(g, fx::paper_region());
    CHECK(a.west.x0 == 0);
    CHECK(a.west.x1 == 0);
    CHECK(a.east.x0 == 3);
    CHECK(a.center.x0 == 1);
    CHECK(a.center.x1 == 2);
    CHECK(a.center.y0 == 1);
    CHECK(a.bisector_x == 4);
    CHECK(a.bisector_y == 4);
}

TEST_CASE("border nodes of the fixture region") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    auto b = border_nodes(g, net, fx::paper_region(), all_segments(net));
    for (int i : {1, 2, 9, 11, 3, 4, 7, 8}) CHECK_MESSAGE(has(b, v(i)), "v" << i);
    CHECK(!has(b, v(6)));
    CHECK(!has(b, v(10)));
}

TEST_CASE("segment against rectangle boundary") {
    Rect r{0, 0, 4, 4};
    CHECK(segment_touches_rect_boundary({1, 1}, {5, 1}, r));
    CHECK(!segment_touches_rect_boundary({1, 1}, {2, 2}, r));
    CHECK(segment_touches_rect_boundary({-1, 2}, {5, 2}, r));
    CHECK(!segment_touches_rect_boundary({5, 5}, {6, 7}, r));
}

TEST_CASE("3x3 co-cover and separation level") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    CHECK(!g.same_3x3_region(v(1), v(3), 1));
    CHECK(g.same_3x3_region(v(1), v(3), 2));
    CHECK(g.same_3x3_region(v(9), v(10), 1));
    CHECK(separation_level(g, v(1), v(3)) == 1);
    CHECK(separation_level(g, v(1), v(11)) == 0);
    CHECK(separation_level(g, v(5), v(5)) == 0);
}

TEST_CASE("border levels") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    auto J = border_levels(g, net);
    CHECK(J[v(1)] == 1);
    CHECK(J[v(11)] == 2);
    for (int x : J) CHECK(x <= g.h());
}

TEST_CASE("5x5 region around a node") {
    RoadNetwork net = fx::paper_network();
    GridHierarchy g = fx::paper_grid(net);
    Region r = g.region_5x5_around(v(8), 1);
    CHECK(r.ax == 1);
    CHECK(r.w == 5);
    CHECK(r.ay == 0);
    CHECK(r.hgt == 4);  // clipped at the grid edge
    CHECK(r.contains(g.cell_of(v(8), 1)));
}

TEST_CASE("padded root square covers the input") {
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        RoadNetwork net = random_planar(400, seed);
        GridHierarchy g = build_grids(net);
        CHECK(g.h() == compute_h(net));
        CHECK(g.root_side() >= net.d_max());
        for (NodeId u = 0; u < net.n(); ++u) {
            CellCoord c = g.cell_of(u, g.h());
            CHECK(c.cx >= 0);
            CHECK(c.cx < g.cells_per_side(g.h()));
            CHECK(c.cy < g.cells_per_side(g.h()));
        }
        // distinct nodes never share a level-1 cell
        std::vector<std::pair<int64_t, int64_t>> cells;
        for (NodeId u = 0; u < net.n(); ++u) cells.push_back({g.cell_of(u, 1).cx, g.cell_of(u, 1).cy});
        std::sort(cells.begin(), cells.end());
        CHECK(std::adjacent_find(cells.begin(), cells.end()) == cells.end());
    }
}

TEST_CASE("two nodes give a single level") {
    std::vector<Edge> e = {{0, 1, {}}, {1, 0, {}}};
    e[0].w.length = e[1].w.length = 3;
    RoadNetwork net = RoadNetwork::build({{0, 0}, {3, 0}}, e);
    GridHierarchy g = build_grids(net);
    CHECK(g.h() == 1);
    CHECK(separation_level(g, 0, 1) == 0);
}
