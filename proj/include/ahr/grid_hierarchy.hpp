#pragma once

#include <vector>

#include "ahr/road_graph.hpp"

namespace ahr {

struct CellCoord {
    int level = 1;
    int64_t cx = 0;
    int64_t cy = 0;
    bool operator==(const CellCoord&) const = default;
};

struct Region {
    int level = 1;
    int64_t ax = 0;  // lower-left cell
    int64_t ay = 0;
    int64_t w = 4;
    int64_t hgt = 4;
    bool contains(const CellCoord& c) const {
        return c.cx >= ax && c.cx < ax + w && c.cy >= ay && c.cy < ay + hgt;
    }
    bool operator==(const Region&) const = default;
};

struct CellRange {
    int64_t x0, x1, y0, y1;  // inclusive
};

struct RegionAnatomy {
    CellRange west, east, south, north, center;
    double bisector_x = 0;  // vertical bisector
    double bisector_y = 0;  // horizontal bisector
};

struct Rect {
    double x0, y0, x1, y1;
};

// Square root grid padded so its side is d_min * 4 * 2^k.
struct RootSquare {
    Coord origin;
    double side = 0;
};
RootSquare root_square(const RoadNetwork& net);

class GridHierarchy {
public:
    GridHierarchy() = default;
    // explicit geometry; used by profiling grids and by snapshots
    GridHierarchy(int h, Coord origin, double root_side, const std::vector<Coord>& coords);

    int h() const { return h_; }
    Coord origin() const { return origin_; }
    double root_side() const { return root_side_; }
    int64_t cells_per_side(int i) const { return int64_t(1) << (h_ + 2 - i); }
    double cell_side(int i) const { return root_side_ / double(cells_per_side(i)); }

    CellCoord cell_of(NodeId v, int i) const {
        return {i, fine_x_[v] >> (i - 1), fine_y_[v] >> (i - 1)};
    }
    CellCoord cell_of_point(Coord p, int i) const;
    Rect cell_rect(const CellCoord& c) const;
    Rect region_rect(const Region& r) const;

    // all in-bounds 4x4 anchors; with nonempty_only, only regions holding a node
    std::vector<Region> regions_4x4(int i, bool nonempty_only) const;
    std::vector<Region> regions_4x4_over(int i, const std::vector<NodeId>& nodes) const;
    bool same_3x3_region(NodeId a, NodeId b, int i) const;
    Region region_5x5_around(NodeId v, int i) const;
    NodeId n() const { return NodeId(fine_x_.size()); }

private:
    int h_ = 0;
    Coord origin_;
    double root_side_ = 0;
    std::vector<int64_t> fine_x_, fine_y_;  // level-1 cell indices
};

GridHierarchy build_grids(const RoadNetwork& net);

RegionAnatomy anatomy(const GridHierarchy& g, const Region& r);

// Definition-2 border test against an explicit edge list.
struct SegmentRef {
    NodeId a, b;
};
std::vector<NodeId> border_nodes(const GridHierarchy& g, const RoadNetwork& net, const Region& r,
                                 const std::vector<SegmentRef>& graph_view);
bool segment_touches_rect_boundary(Coord p, Coord q, const Rect& r);

// Largest level whose grid separates the two nodes' cells by more than a 3x3
// block; 0 when every level co-covers them.
int separation_level(const GridHierarchy& g, NodeId s, NodeId t);

// Coarsest level j at which v is an endpoint of an edge whose endpoints lie
// in different cells; 0 if none.
std::vector<int> border_levels(const GridHierarchy& g, const RoadNetwork& net);

}  // namespace ahr
