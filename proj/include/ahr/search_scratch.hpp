#pragma once

#include <queue>
#include <vector>

#include "ahr/common.hpp"

namespace ahr {

// Dense per-node labels reset in O(touched) via a generation stamp, so many
// small searches over a large graph stay cheap.
struct SearchScratch {
    std::vector<PathWeight> dist;
    std::vector<NodeId> parent;
    std::vector<uint32_t> parent_arc;
    std::vector<int> tag;  // search-specific flag or level
    std::vector<NodeId> aux;
    std::vector<uint32_t> stamp;
    std::vector<char> done;
    uint32_t gen = 0;

    void prepare(NodeId n) {
        if (dist.size() != n) {
            dist.assign(n, PathWeight::infinity());
            parent.assign(n, kNoNode);
            parent_arc.assign(n, 0);
            tag.assign(n, 0);
            aux.assign(n, kNoNode);
            stamp.assign(n, 0);
            done.assign(n, 0);
            gen = 0;
        }
        if (++gen == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            gen = 1;
        }
    }
    bool seen(NodeId v) const { return stamp[v] == gen; }
    void touch(NodeId v) {
        if (stamp[v] != gen) {
            stamp[v] = gen;
            dist[v] = PathWeight::infinity();
            parent[v] = kNoNode;
            parent_arc[v] = 0;
            tag[v] = 0;
            aux[v] = kNoNode;
            done[v] = 0;
        }
    }
    const PathWeight& d(NodeId v) const {
        static const PathWeight inf = PathWeight::infinity();
        return seen(v) ? dist[v] : inf;
    }
};

struct FlagEntry {
    PathWeight w;
    NodeId v;
    friend bool operator>(const FlagEntry& a, const FlagEntry& b) {
        if (a.w != b.w) return a.w > b.w;
        return a.v > b.v;
    }
};
using FlagHeap = std::priority_queue<FlagEntry, std::vector<FlagEntry>, std::greater<>>;

}  // namespace ahr
