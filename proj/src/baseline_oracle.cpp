#include "ahr/baseline_oracle.hpp"

#include <algorithm>

namespace ahr {

std::vector<NodeId> ShortestPathTree::path_to(NodeId t) const {
    std::vector<NodeId> p;
    if (dist[t].is_infinite()) return p;
    for (NodeId v = t; v != kNoNode; v = parent[v]) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
}

ShortestPathTree dijkstra_tree(const RoadNetwork& net, NodeId s, bool backward) {
    ShortestPathTree T;
    T.dist.assign(net.n(), PathWeight::infinity());
    T.parent.assign(net.n(), kNoNode);
    std::vector<char> done(net.n(), 0);
    MinHeap q;
    T.dist[s] = PathWeight{};
    T.dist[s].k = uint8_t(net.k());
    q.push({T.dist[s], s});
    while (!q.empty()) {
        auto [w, u] = q.top();
        q.pop();
        if (done[u]) continue;
        done[u] = 1;
        auto relax = [&](NodeId v, const PathWeight& ew) {
            PathWeight nw = w + ew;
            if (nw < T.dist[v]) {
                T.dist[v] = nw;
                T.parent[v] = u;
                q.push({nw, v});
            }
        };
        if (!backward) {
            for (const auto& e : net.out_edges(u)) relax(e.head, e.w);
        } else {
            for (EdgeId id : net.in_edges(u)) relax(net.edge(id).tail, net.edge(id).w);
        }
    }
    return T;
}

SearchResult dijkstra(const RoadNetwork& net, NodeId s, std::optional<NodeId> t) {
    SearchResult r;
    std::vector<PathWeight> dist(net.n(), PathWeight::infinity());
    std::vector<NodeId> parent(net.n(), kNoNode);
    std::vector<char> done(net.n(), 0);
    MinHeap q;
    dist[s] = PathWeight{};
    dist[s].k = uint8_t(net.k());
    q.push({dist[s], s});
    while (!q.empty()) {
        auto [w, u] = q.top();
        q.pop();
        if (done[u]) continue;
        done[u] = 1;
        ++r.settled;
        if (t && u == *t) break;
        for (const auto& e : net.out_edges(u)) {
            ++r.relaxed;
            PathWeight nw = w + e.w;
            if (nw < dist[e.head]) {
                dist[e.head] = nw;
                parent[e.head] = u;
                q.push({nw, e.head});
            }
        }
    }
    if (t) {
        r.distance = dist[*t];
        if (!r.distance.is_infinite()) {
            for (NodeId v = *t; v != kNoNode; v = parent[v]) r.path.push_back(v);
            std::reverse(r.path.begin(), r.path.end());
        }
    }
    return r;
}

SearchResult bidirectional_dijkstra(const RoadNetwork& net, NodeId s, NodeId t) {
    SearchResult r;
    const NodeId n = net.n();
    std::vector<PathWeight> dist[2] = {std::vector<PathWeight>(n, PathWeight::infinity()),
                                       std::vector<PathWeight>(n, PathWeight::infinity())};
    std::vector<NodeId> parent[2] = {std::vector<NodeId>(n, kNoNode), std::vector<NodeId>(n, kNoNode)};
    std::vector<char> done[2] = {std::vector<char>(n, 0), std::vector<char>(n, 0)};
    MinHeap q[2];
    PathWeight zero;
    zero.k = uint8_t(net.k());
    dist[0][s] = zero;
    dist[1][t] = zero;
    q[0].push({zero, s});
    q[1].push({zero, t});
    PathWeight theta = PathWeight::infinity();
    NodeId meet = kNoNode;
    bool active[2] = {true, true};
    while (active[0] || active[1]) {
        for (int side = 0; side < 2; ++side) {
            if (!active[side]) continue;
            auto& Q = q[side];
            while (!Q.empty() && done[side][Q.top().v]) Q.pop();
            if (Q.empty() || theta <= Q.top().w) {
                active[side] = false;
                continue;
            }
            auto [w, u] = Q.top();
            Q.pop();
            done[side][u] = 1;
            if (!done[1 - side][u]) ++r.settled;
            if (!dist[1 - side][u].is_infinite()) {
                PathWeight c = w + dist[1 - side][u];
                if (c < theta) {
                    theta = c;
                    meet = u;
                }
            }
            auto relax = [&](NodeId v, const PathWeight& ew) {
                ++r.relaxed;
                PathWeight nw = w + ew;
                if (nw < dist[side][v]) {
                    dist[side][v] = nw;
                    parent[side][v] = u;
                    Q.push({nw, v});
                }
            };
            if (side == 0) {
                for (const auto& e : net.out_edges(u)) relax(e.head, e.w);
            } else {
                for (EdgeId id : net.in_edges(u)) relax(net.edge(id).tail, net.edge(id).w);
            }
        }
    }
    r.distance = theta;
    if (meet != kNoNode) {
        for (NodeId v = meet; v != kNoNode; v = parent[0][v]) r.path.push_back(v);
        std::reverse(r.path.begin(), r.path.end());
        for (NodeId v = parent[1][meet]; v != kNoNode; v = parent[1][v]) r.path.push_back(v);
    }
    return r;
}

std::vector<PathWeight> bellman_ford(const RoadNetwork& net, NodeId s) {
    std::vector<PathWeight> d(net.n(), PathWeight::infinity());
    d[s] = PathWeight{};
    d[s].k = uint8_t(net.k());
    for (NodeId round = 0; round + 1 < std::max<NodeId>(net.n(), 2); ++round) {
        bool changed = false;
        for (const auto& e : net.edges()) {
            if (d[e.tail].is_infinite()) continue;
            PathWeight nw = d[e.tail] + e.w;
            if (nw < d[e.head]) {
                d[e.head] = nw;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return d;
}

std::vector<std::vector<PathWeight>> all_pairs_small(const RoadNetwork& net, NodeId cap) {
    if (net.n() > cap) throw ContractError("all_pairs_small: n exceeds cap " + std::to_string(cap));
    std::vector<std::vector<PathWeight>> m(net.n());
    for (NodeId s = 0; s < net.n(); ++s) m[s] = dijkstra_tree(net, s).dist;
    return m;
}

}  // namespace ahr
