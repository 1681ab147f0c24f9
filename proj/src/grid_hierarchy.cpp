#include "ahr/grid_hierarchy.hpp"

#include <algorithm>
#include <bit>

namespace ahr {

namespace {

int64_t fine_index(double v, double o, double s, int64_t cells) {
    auto c = int64_t(std::floor((v - o) / s));
    return std::clamp<int64_t>(c, 0, cells - 1);
}

}  // namespace

RootSquare root_square(const RoadNetwork& net) {
    if (net.n() < 2) throw ValidationError("grid needs at least two nodes");
    RootSquare r;
    r.origin = net.coord(0);
    for (const auto& c : net.coords()) {
        r.origin.x = std::min(r.origin.x, c.x);
        r.origin.y = std::min(r.origin.y, c.y);
    }
    double side = 4 * net.d_min();
    while (side < net.d_max()) side *= 2;
    r.side = side;
    return r;
}

int compute_h(const RoadNetwork& net) {
    if (net.n() < 2) throw ValidationError("compute_h needs n >= 2");
    RootSquare root = root_square(net);
    std::vector<std::pair<int64_t, int64_t>> cells(net.n());
    for (int m = 0; m < 62; ++m) {
        int64_t per_side = int64_t(4) << m;
        double s = root.side / double(per_side);
        for (NodeId v = 0; v < net.n(); ++v)
            cells[v] = {fine_index(net.coord(v).x, root.origin.x, s, per_side),
                        fine_index(net.coord(v).y, root.origin.y, s, per_side)};
        std::sort(cells.begin(), cells.end());
        if (std::adjacent_find(cells.begin(), cells.end()) == cells.end()) return m + 1;
    }
    throw ValidationError("grid depth exceeds 62 levels");
}

GridHierarchy::GridHierarchy(int h, Coord origin, double root_side, const std::vector<Coord>& coords)
    : h_(h), origin_(origin), root_side_(root_side) {
    if (h < 1 || h > 62) throw ContractError("grid level count out of range");
    int64_t per_side = cells_per_side(1);
    double s = cell_side(1);
    fine_x_.resize(coords.size());
    fine_y_.resize(coords.size());
    for (size_t v = 0; v < coords.size(); ++v) {
        fine_x_[v] = fine_index(coords[v].x, origin.x, s, per_side);
        fine_y_[v] = fine_index(coords[v].y, origin.y, s, per_side);
    }
}

GridHierarchy build_grids(const RoadNetwork& net) {
    int h = compute_h(net);
    RootSquare root = root_square(net);
    return GridHierarchy(h, root.origin, root.side, net.coords());
}

CellCoord GridHierarchy::cell_of_point(Coord p, int i) const {
    int64_t per_side = cells_per_side(i);
    double s = cell_side(i);
    return {i, fine_index(p.x, origin_.x, s, per_side), fine_index(p.y, origin_.y, s, per_side)};
}

Rect GridHierarchy::cell_rect(const CellCoord& c) const {
    double s = cell_side(c.level);
    return {origin_.x + double(c.cx) * s, origin_.y + double(c.cy) * s, origin_.x + double(c.cx + 1) * s,
            origin_.y + double(c.cy + 1) * s};
}

Rect GridHierarchy::region_rect(const Region& r) const {
    double s = cell_side(r.level);
    return {origin_.x + double(r.ax) * s, origin_.y + double(r.ay) * s, origin_.x + double(r.ax + r.w) * s,
            origin_.y + double(r.ay + r.hgt) * s};
}

std::vector<Region> GridHierarchy::regions_4x4(int i, bool nonempty_only) const {
    if (i < 1 || i > h_) throw ContractError("level out of range");
    if (nonempty_only) {
        std::vector<NodeId> all(n());
        for (NodeId v = 0; v < n(); ++v) all[v] = v;
        return regions_4x4_over(i, all);
    }
    int64_t anchors = cells_per_side(i) - 3;
    if (anchors > 20000) throw ContractError("too many regions to enumerate without the non-empty filter");
    std::vector<Region> out;
    out.reserve(size_t(anchors * anchors));
    for (int64_t ay = 0; ay < anchors; ++ay)
        for (int64_t ax = 0; ax < anchors; ++ax) out.push_back({i, ax, ay, 4, 4});
    return out;
}

std::vector<Region> GridHierarchy::regions_4x4_over(int i, const std::vector<NodeId>& nodes) const {
    int64_t last = cells_per_side(i) - 4;
    std::vector<std::pair<int64_t, int64_t>> anchors;
    for (NodeId v : nodes) {
        CellCoord c = cell_of(v, i);
        for (int64_t ay = std::max<int64_t>(0, c.cy - 3); ay <= std::min(last, c.cy); ++ay)
            for (int64_t ax = std::max<int64_t>(0, c.cx - 3); ax <= std::min(last, c.cx); ++ax)
                anchors.push_back({ay, ax});
    }
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
    std::vector<Region> out;
    out.reserve(anchors.size());
    for (auto [ay, ax] : anchors) out.push_back({i, ax, ay, 4, 4});
    return out;
}

bool GridHierarchy::same_3x3_region(NodeId a, NodeId b, int i) const {
    CellCoord ca = cell_of(a, i), cb = cell_of(b, i);
    return std::abs(ca.cx - cb.cx) <= 2 && std::abs(ca.cy - cb.cy) <= 2;
}

Region GridHierarchy::region_5x5_around(NodeId v, int i) const {
    CellCoord c = cell_of(v, i);
    int64_t last = cells_per_side(i) - 1;
    int64_t x0 = std::max<int64_t>(0, c.cx - 2), x1 = std::min(last, c.cx + 2);
    int64_t y0 = std::max<int64_t>(0, c.cy - 2), y1 = std::min(last, c.cy + 2);
    return {i, x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

RegionAnatomy anatomy(const GridHierarchy& g, const Region& r) {
    if (r.w != 4 || r.hgt != 4) throw ContractError("anatomy needs a 4x4 region");
    RegionAnatomy a;
    a.west = {r.ax, r.ax, r.ay, r.ay + 3};
    a.east = {r.ax + 3, r.ax + 3, r.ay, r.ay + 3};
    a.south = {r.ax, r.ax + 3, r.ay, r.ay};
    a.north = {r.ax, r.ax + 3, r.ay + 3, r.ay + 3};
    a.center = {r.ax + 1, r.ax + 2, r.ay + 1, r.ay + 2};
    double s = g.cell_side(r.level);
    a.bisector_x = g.origin().x + double(r.ax + 2) * s;
    a.bisector_y = g.origin().y + double(r.ay + 2) * s;
    return a;
}

bool segment_touches_rect_boundary(Coord p, Coord q, const Rect& r) {
    auto strictly_inside = [&](Coord c) { return c.x > r.x0 && c.x < r.x1 && c.y > r.y0 && c.y < r.y1; };
    if (strictly_inside(p) && strictly_inside(q)) return false;
    // Liang-Barsky clip against the closed rectangle
    double t0 = 0, t1 = 1;
    double dx = q.x - p.x, dy = q.y - p.y;
    double pp[4] = {-dx, dx, -dy, dy};
    double qq[4] = {p.x - r.x0, r.x1 - p.x, p.y - r.y0, r.y1 - p.y};
    for (int k = 0; k < 4; ++k) {
        if (pp[k] == 0) {
            if (qq[k] < 0) return false;
            continue;
        }
        double t = qq[k] / pp[k];
        if (pp[k] < 0)
            t0 = std::max(t0, t);
        else
            t1 = std::min(t1, t);
        if (t0 > t1) return false;
    }
    return true;
}

std::vector<NodeId> border_nodes(const GridHierarchy& g, const RoadNetwork& net, const Region& r,
                                 const std::vector<SegmentRef>& graph_view) {
    RegionAnatomy an = anatomy(g, r);
    auto strip_rect = [&](const CellRange& cr) {
        Rect a = g.cell_rect({r.level, cr.x0, cr.y0});
        Rect b = g.cell_rect({r.level, cr.x1, cr.y1});
        return Rect{a.x0, a.y0, b.x1, b.y1};
    };
    Rect strips[4] = {strip_rect(an.west), strip_rect(an.east), strip_rect(an.south), strip_rect(an.north)};
    auto in_center = [&](NodeId v) {
        CellCoord c = g.cell_of(v, r.level);
        return c.cx >= an.center.x0 && c.cx <= an.center.x1 && c.cy >= an.center.y0 && c.cy <= an.center.y1;
    };
    std::vector<NodeId> out;
    for (const auto& s : graph_view) {
        bool touches = false;
        for (const auto& rect : strips)
            if (segment_touches_rect_boundary(net.coord(s.a), net.coord(s.b), rect)) touches = true;
        if (!touches) continue;
        for (NodeId v : {s.a, s.b})
            if (r.contains(g.cell_of(v, r.level)) && !in_center(v)) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int separation_level(const GridHierarchy& g, NodeId s, NodeId t) {
    for (int L = g.h(); L >= 1; --L)
        if (!g.same_3x3_region(s, t, L)) return L;
    return 0;
}

std::vector<int> border_levels(const GridHierarchy& g, const RoadNetwork& net) {
    std::vector<int> J(net.n(), 0);
    for (const auto& e : net.edges()) {
        CellCoord a = g.cell_of(e.tail, 1), b = g.cell_of(e.head, 1);
        int bits = std::max(std::bit_width(uint64_t(a.cx ^ b.cx)), std::bit_width(uint64_t(a.cy ^ b.cy)));
        int L = std::min(g.h(), bits);
        J[e.tail] = std::max(J[e.tail], L);
        J[e.head] = std::max(J[e.head], L);
    }
    return J;
}

}  // namespace ahr
