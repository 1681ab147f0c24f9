#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ahr/fc_index.hpp"

namespace ahr {

enum class ShortcutKind : uint8_t {
    Original = 0,
    LevelEdge = 1,     // rank-upward shortcut between a level-i node and a higher-ranked one
    Connectivity = 2,  // keeps G*_{i+1} distance-preserving
    Elevating = 3,     // query-usable jump to the first node at level >= j
    ElevatingAux = 4,  // unpack-only intermediate hop of an elevating edge
};

struct AhShortcut {
    NodeId tail = 0, head = 0;
    PathWeight w;
    NodeId via = kNoNode;  // kNoNode for original edges
    ShortcutKind kind = ShortcutKind::Original;
    int16_t created_level = -1;
    int16_t jlo = 0, jhi = -1;  // elevating edges: usable for separation levels jlo..jhi
    bool query_usable() const { return kind != ShortcutKind::ElevatingAux; }
};

struct CoreAssignment {
    std::vector<int> level;
    std::vector<uint32_t> rank;  // a permutation of 0..n-1
};

// Per-level output of core selection.
struct CoreTrace {
    int h = 0;
    std::vector<int> level;                   // after the per-level downgrade
    std::vector<std::vector<ArcKey>> pseudo;  // pseudo-arterial edges S_L, index L = 1..h
    std::vector<std::vector<NodeId>> cover;   // greedy cover of S_L in pick order
    std::vector<size_t> overlay_nodes;        // |V(O_i)|, index i = 0..h-1
    std::vector<size_t> overlay_arcs;
};

// Greedy vertex cover of an undirected view of the arcs: most uncovered
// incident edges first, smallest id on ties.
std::vector<NodeId> greedy_vertex_cover(const std::vector<ArcKey>& edges);

CoreTrace select_cores(const RoadNetwork& net, const GridHierarchy& g, Exec exec = Exec::Parallel);
CoreAssignment rank_and_downgrade(const CoreTrace& trace, uint64_t seed);

struct AhBuildReport {
    std::vector<size_t> nodes_per_level;
    size_t original_edges = 0;
    size_t level_edges = 0;
    size_t connectivity_edges = 0;
    size_t elevating_edges = 0;
    size_t elevating_aux_edges = 0;
    double seconds_cores = 0;
    double seconds_shortcuts = 0;
    size_t memory_bytes = 0;  // estimate of the finished index
    bool perturbed = false;
    std::string to_string() const;
};

class AhHierarchy {
public:
    CoreAssignment cores;
    std::vector<int> border_level;  // J(v)
    std::vector<AhShortcut> edges;  // originals first
    GridHierarchy grid;
    std::vector<Coord> coords;
    int k = 0;
    uint64_t tau_prime = 0;
    uint64_t seed = kDefaultSeed;

    NodeId n() const { return NodeId(coords.size()); }
    int level(NodeId v) const { return cores.level[v]; }
    void finalize();

    PathWeight distance(NodeId s, NodeId t, QueryStats* stats = nullptr, QueryTrace* trace = nullptr) const;

    struct PathResult {
        PathWeight distance = PathWeight::infinity();
        std::vector<NodeId> nodes;
        uint64_t substitutions = 0;  // shortcut expansions performed while unpacking
        size_t hierarchy_hops = 0;
    };
    PathResult shortest_path(NodeId s, NodeId t, QueryStats* stats = nullptr) const;

    // Replace edge e by its original-edge path; appends nodes after the tail.
    void unpack(uint32_t e, std::vector<NodeId>& out, uint64_t* substitutions = nullptr) const;
    // Preferred edge for a hop: minimum weight, then non-elevating, then lowest id.
    uint32_t lookup(NodeId a, NodeId b) const;

    RoadNetwork base_network() const;  // originals only, with their stored weights
    size_t memory_bytes() const;

    struct Arc {
        NodeId to;
        uint32_t edge;
    };
    // rank-upward arcs (originals, level edges, connectivity)
    std::vector<uint32_t> up_off[2];
    std::vector<Arc> up[2];
    // elevating arcs per low endpoint, forward [0] and backward [1]
    std::vector<uint32_t> el_off[2];
    std::vector<Arc> el[2];

private:
    std::unordered_map<uint64_t, uint32_t> hop_;
};

AhHierarchy build_shortcuts(const RoadNetwork& net, const GridHierarchy& g, const CoreAssignment& cores,
                            Exec exec = Exec::Parallel, AhBuildReport* report = nullptr);

struct AhOptions {
    int k = 2;  // perturbation dimension used when the input is not perturbed; 0 disables
    uint64_t seed = kDefaultSeed;
    Exec exec = Exec::Parallel;
};
// Perturbs an unperturbed input (opt.k > 0) before building. The index keeps
// the weights it was built with; base_network() recovers them.
AhHierarchy build_ah(const RoadNetwork& net, const AhOptions& opt = {}, AhBuildReport* report = nullptr);

PathWeight ah_distance(const AhHierarchy& index, NodeId s, NodeId t);
std::vector<NodeId> ah_shortest_path(const AhHierarchy& index, NodeId s, NodeId t);
QueryStats ah_visit_stats(const AhHierarchy& index, NodeId s, NodeId t);

// Shortest paths not co-covered at level i must hold a node of level >= i.
// Checks the oracle path of every given pair; returns the number of failures.
size_t count_level_violations(const AhHierarchy& index, const RoadNetwork& net,
                              const std::vector<std::pair<NodeId, NodeId>>& pairs);

void write_ah(const AhHierarchy& index, std::ostream& out);
AhHierarchy read_ah(std::istream& in);
void save_ah(const AhHierarchy& index, const std::string& path);
AhHierarchy load_ah(const std::string& path);

}  // namespace ahr
