#pragma once

#include <string>
#include <vector>

#include "ahr/arterial_analysis.hpp"

namespace ahr {

struct LevelAssignment {
    std::vector<int> level;                  // per node
    std::vector<std::pair<ArcKey, int>> edge_level;  // arterial edges only, sorted; others are level 0
    int edge_level_of(NodeId u, NodeId v) const;
};

struct HEdge {
    NodeId tail = 0, head = 0;
    PathWeight w;
    bool shortcut = false;
};

struct QueryStats {
    uint64_t settled = 0;
    uint64_t relaxed = 0;
    int max_level_touched = 0;
    uint64_t elevations_taken = 0;
};

// optional per-query trace for invariant checks
struct QueryTrace {
    std::vector<NodeId> settled[2];
    std::vector<std::pair<NodeId, NodeId>> relaxed[2];  // (from, to) that improved a label
    std::vector<char> elevating[2];                     // parallel to relaxed
};

struct FcOptions {
    NodeId node_cap = 50000;
    Exec exec = Exec::Parallel;
};

class FcHierarchy {
public:
    LevelAssignment assignment;
    std::vector<HEdge> edges;  // original edges then shortcuts
    GridHierarchy grid;
    std::vector<Coord> coords;
    int k = 0;

    NodeId n() const { return NodeId(coords.size()); }
    size_t shortcut_count() const;
    void finalize();  // builds the constrained adjacency

    PathWeight distance(NodeId s, NodeId t, QueryStats* stats = nullptr, QueryTrace* trace = nullptr) const;

    struct Arc {
        NodeId to;
        uint32_t edge;
    };
    std::vector<uint32_t> fwd_off, bwd_off;
    std::vector<Arc> fwd, bwd;
};

LevelAssignment assign_fc_levels(const RoadNetwork& net, const GridHierarchy& g, Exec exec = Exec::Parallel);
FcHierarchy build_fc(const RoadNetwork& net, const GridHierarchy& g, const FcOptions& opt = {});
FcHierarchy build_fc_with_levels(const RoadNetwork& net, const GridHierarchy& g, const LevelAssignment& levels,
                                 Exec exec = Exec::Parallel);

PathWeight fc_distance(const FcHierarchy& index, NodeId s, NodeId t);
QueryStats fc_visit_stats(const FcHierarchy& index, NodeId s, NodeId t);

void write_fc(const FcHierarchy& index, std::ostream& out);
FcHierarchy read_fc(std::istream& in);
void save_fc(const FcHierarchy& index, const std::string& path);
FcHierarchy load_fc(const std::string& path);

}  // namespace ahr
