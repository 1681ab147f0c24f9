#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "ahr/grid_hierarchy.hpp"
#include "ahr/parallel.hpp"

namespace ahr {

enum class Axis : uint8_t { WestEast, NorthSouth };
enum class Direction : uint8_t { Forward, Backward };

struct ArcKey {
    NodeId tail = kNoNode, head = kNoNode;
    uint64_t key() const { return (uint64_t(tail) << 32) | head; }
    bool operator==(const ArcKey&) const = default;
    auto operator<=>(const ArcKey& o) const { return key() <=> o.key(); }
};

struct LocalPath {
    std::vector<NodeId> nodes;
    PathWeight weight;
    Region region;
};

struct SpanningPathRecord {
    LocalPath path;
    Axis axis = Axis::WestEast;
    ArcKey arterial_edge;
};

// Sorted node lookup by cell at one level.
class CellIndex {
public:
    CellIndex(const GridHierarchy& g, int level, const std::vector<NodeId>& nodes);
    CellIndex(const GridHierarchy& g, int level);  // all nodes
    void nodes_in(int64_t cx, int64_t cy, std::vector<NodeId>& out) const;
    void nodes_in(const Region& r, std::vector<NodeId>& out) const;
    const std::vector<NodeId>& members() const { return members_; }

private:
    struct Entry {
        int64_t cx, cy;
        NodeId v;
    };
    std::vector<Entry> entries_;
    std::vector<NodeId> members_;
};

// The nodes of a region plus their outside neighbours, with local ids.
struct RegionGraph {
    struct Arc {
        int to;
        PathWeight w;
    };
    Region region;
    std::vector<NodeId> nodes;
    std::vector<char> inside;
    std::vector<int> relcol, relrow;
    std::vector<std::vector<Arc>> out, in;
    std::unordered_map<NodeId, int> local;

    RegionGraph(const GridHierarchy& g, const RoadNetwork& net, const CellIndex& cells, const Region& r);
    // out_of(v, fn) / in_of(v, fn) call fn(other, weight) for every arc
    template <class OutFn, class InFn>
    RegionGraph(const GridHierarchy& g, const CellIndex& cells, const Region& r, OutFn&& out_of, InFn&& in_of)
        : region(r) {
        populate(g, cells, out_of, in_of);
    }
    int side(int l, Axis a) const { return (a == Axis::WestEast ? relcol[l] : relrow[l]) < 2 ? 0 : 1; }
    bool eligible(int l, Axis a) const {
        int c = a == Axis::WestEast ? relcol[l] : relrow[l];
        return c <= 0 || c >= 3;
    }
    bool crosses(int a, int b, Axis axis) const { return side(a, axis) != side(b, axis); }

private:
    int add_node(const GridHierarchy& g, NodeId v, bool ins);
    template <class OutFn, class InFn>
    void populate(const GridHierarchy& g, const CellIndex& cells, OutFn&& out_of, InFn&& in_of) {
        std::vector<NodeId> in_nodes;
        cells.nodes_in(region, in_nodes);
        std::sort(in_nodes.begin(), in_nodes.end());
        for (NodeId v : in_nodes) add_node(g, v, true);
        for (NodeId v : in_nodes) {
            int a = local[v];
            out_of(v, [&](NodeId h, const PathWeight& w) {
                int b = add_node(g, h, false);
                out[a].push_back({b, w});
                in[b].push_back({a, w});
            });
            in_of(v, [&](NodeId t, const PathWeight& w) {
                auto it = local.find(t);
                if (it != local.end() && inside[it->second]) return;  // seen as an out-arc
                int b = add_node(g, t, false);
                out[b].push_back({a, w});
                in[a].push_back({b, w});
            });
        }
    }
};

// Local Dijkstra from one source; state = (node, used a boundary edge).
struct LocalTree {
    int source = -1;
    std::vector<PathWeight> dist;  // 2 per local node
    std::vector<int> parent;       // parent state
    std::vector<char> tied;        // some equal-weight alternative reached this state
    std::vector<uint64_t> min_cross[2];  // smallest bisector-crossing arc per axis, ~0 if none

    int best_state(int l) const {
        return dist[2 * l + 1] < dist[2 * l] ? 2 * l + 1 : 2 * l;
    }
    bool reached(int l) const { return !dist[best_state(l)].is_infinite(); }
    std::vector<NodeId> path_to(const RegionGraph& rg, int l, Direction d) const;
};

LocalTree local_sweep(const RegionGraph& rg, int source, Direction dir);

std::vector<LocalTree> local_shortest_paths(const RegionGraph& rg, const std::vector<NodeId>& sources,
                                            Direction dir);
std::vector<SpanningPathRecord> spanning_paths(const RegionGraph& rg);
std::vector<ArcKey> arterial_edges(const RegionGraph& rg);
std::vector<ArcKey> arterial_edges(const RegionGraph& rg, Axis axis);

// Designated arterial edges of every non-empty region at one level.
std::vector<ArcKey> arterial_edges_at_level(const GridHierarchy& g, const RoadNetwork& net, int level,
                                            Exec exec = Exec::Parallel);

struct ArterialStats {
    int r = 0;
    uint64_t regions = 0;
    uint64_t max = 0;
    double mean = 0;
    uint64_t q90 = 0;
    uint64_t q99 = 0;
};
struct ArterialProfile {
    std::vector<ArterialStats> rows;
    uint64_t regions_examined = 0;
    std::vector<int> skipped;
};
// One sample per (region, bisector): the number of distinct road segments
// among the arterial edges, so both directions of a two-way road count once.
ArterialProfile arterial_profile(const RoadNetwork& net, const std::vector<int>& resolutions,
                                 Exec exec = Exec::Parallel);
std::vector<uint64_t> arterial_counts(const GridHierarchy& g, const RoadNetwork& net, int level, Exec exec);
std::string profile_csv(const ArterialProfile& p);

struct SlidingWindowResult {
    Region region;
    std::vector<NodeId> subpath;
    size_t a = 0, b = 0;  // indices into the input path
    Axis axis = Axis::WestEast;
    bool mirrored = false;  // literal west-strip choice infeasible
};
SlidingWindowResult sliding_window(const GridHierarchy& g, const std::vector<NodeId>& path, int level);

// Does sub is the local shortest path between its endpoints in r, with
// endpoints on opposite sides of the axis bisector and eligible?
bool is_spanning_path(const GridHierarchy& g, const RoadNetwork& net, const Region& r,
                      const std::vector<NodeId>& sub, Axis axis);

// True if every local shortest path in every non-empty 4x4 region at every
// level is unique by PathWeight.
bool local_paths_unique(const GridHierarchy& g, const RoadNetwork& net);

}  // namespace ahr
