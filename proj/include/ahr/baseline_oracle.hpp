#pragma once

#include <optional>
#include <queue>
#include <vector>

#include "ahr/road_graph.hpp"

namespace ahr {

struct SearchResult {
    PathWeight distance = PathWeight::infinity();
    std::vector<NodeId> path;
    uint64_t settled = 0;
    uint64_t relaxed = 0;
};

struct HeapEntry {
    PathWeight w;
    NodeId v;
    friend bool operator>(const HeapEntry& a, const HeapEntry& b) {
        if (a.w != b.w) return a.w > b.w;
        return a.v > b.v;
    }
};
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

struct ShortestPathTree {
    std::vector<PathWeight> dist;
    std::vector<NodeId> parent;
    std::vector<NodeId> path_to(NodeId t) const;
};

SearchResult dijkstra(const RoadNetwork& net, NodeId s, std::optional<NodeId> t = std::nullopt);
ShortestPathTree dijkstra_tree(const RoadNetwork& net, NodeId s, bool backward = false);
SearchResult bidirectional_dijkstra(const RoadNetwork& net, NodeId s, NodeId t);
std::vector<PathWeight> bellman_ford(const RoadNetwork& net, NodeId s);
std::vector<std::vector<PathWeight>> all_pairs_small(const RoadNetwork& net, NodeId cap = 64);

}  // namespace ahr
