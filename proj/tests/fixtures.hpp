#pragma once

#include <vector>

#include "ahr/ah_index.hpp"
#include "ahr/baseline_oracle.hpp"
#include "ahr/synthetic.hpp"

namespace fx {

using namespace ahr;

// v1..v11 map to ids 0..10
constexpr NodeId v(int i) { return NodeId(i - 1); }

// Eleven-node two-way network. On paper_grid() the level-1 region anchored
// at (0,0) has v9, v11 in its west strip and v4, v8 in its east strip;
// v6, v10 sit in the centre. Cell (c,r) has centre (2c+1, 2r+1).
inline RoadNetwork paper_network(int k = 0) {
    auto at = [](int c, int r) { return Coord{2.0 * c + 1, 2.0 * r + 1}; };
    std::vector<Coord> co = {at(0, 3), at(0, 0), at(3, 0), at(3, 3), at(1, 0), at(1, 1),
                             at(2, 3), at(3, 1), at(0, 1), at(2, 1), at(0, 2)};
    struct E {
        int a, b;
        double w;
    };
    const E es[] = {{1, 11, 1}, {11, 9, 3}, {11, 7, 2}, {7, 8, 2}, {7, 4, 1}, {8, 3, 1},
                    {8, 10, 2}, {8, 5, 4},  {9, 5, 3},  {9, 6, 2}, {9, 2, 1}, {6, 10, 2}};
    std::vector<Edge> edges;
    for (const auto& e : es) {
        edges.push_back({v(e.a), v(e.b), PathWeight{}});
        edges.back().w.length = e.w;
        edges.push_back({v(e.b), v(e.a), PathWeight{}});
        edges.back().w.length = e.w;
    }
    return RoadNetwork::build(co, edges, k);
}

// h = 2, level-1 cells of side 2, level-2 cells of side 4
inline GridHierarchy paper_grid(const RoadNetwork& net) { return GridHierarchy(2, {0, 0}, 16, net.coords()); }

// Three-level hierarchy: v10, v11 on top, v7, v8, v9 in the middle.
inline std::vector<int> paper_levels() {
    std::vector<int> lv(11, 0);
    lv[v(10)] = lv[v(11)] = 2;
    lv[v(7)] = lv[v(8)] = lv[v(9)] = 1;
    return lv;
}

inline Region paper_region() { return Region{1, 0, 0, 4, 4}; }

inline std::vector<std::pair<NodeId, NodeId>> random_pairs(NodeId n, size_t count, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<NodeId, NodeId>> out;
    for (size_t i = 0; i < count; ++i) out.push_back({NodeId(draw_below(rng, n)), NodeId(draw_below(rng, n))});
    return out;
}

}  // namespace fx
