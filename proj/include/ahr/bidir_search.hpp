#pragma once

#include "ahr/fc_index.hpp"
#include "ahr/search_scratch.hpp"

namespace ahr {

struct BidirState {
    SearchScratch side[2];
    FlagHeap q[2];
    NodeId meet = kNoNode;
};

BidirState& thread_bidir_state();

// Round-robin bidirectional search, forward side first. A side stops once
// theta is no larger than its smallest key. expand(side, u, relax) must call
// relax(v, arc_weight, arc_id, elevating) for each admissible arc.
template <class Expand>
PathWeight bidir_search(BidirState& st, NodeId n, NodeId s, NodeId t, int k, Expand&& expand, QueryStats* stats,
                        QueryTrace* trace) {
    PathWeight zero;
    zero.k = uint8_t(k);
    for (int i = 0; i < 2; ++i) {
        st.side[i].prepare(n);
        st.q[i] = FlagHeap();
    }
    st.meet = kNoNode;
    NodeId root[2] = {s, t};
    for (int i = 0; i < 2; ++i) {
        st.side[i].touch(root[i]);
        st.side[i].dist[root[i]] = zero;
        st.q[i].push({zero, root[i]});
    }
    PathWeight theta = PathWeight::infinity();
    bool active[2] = {true, true};
    while (active[0] || active[1]) {
        for (int sd = 0; sd < 2; ++sd) {
            if (!active[sd]) continue;
            SearchScratch& me = st.side[sd];
            SearchScratch& other = st.side[1 - sd];
            FlagHeap& Q = st.q[sd];
            while (!Q.empty() && me.done[Q.top().v]) Q.pop();
            if (Q.empty() || theta <= Q.top().w) {
                active[sd] = false;
                continue;
            }
            auto [w, u] = Q.top();
            Q.pop();
            me.done[u] = 1;
            if (stats && !(other.seen(u) && other.done[u])) ++stats->settled;
            if (trace) trace->settled[sd].push_back(u);
            if (other.seen(u) && !other.dist[u].is_infinite()) {
                PathWeight c = w + other.dist[u];
                if (c < theta) {
                    theta = c;
                    st.meet = u;
                }
            }
            expand(sd, u, [&](NodeId v, const PathWeight& aw, uint32_t arc, bool elevating) {
                if (stats) ++stats->relaxed;
                PathWeight nw = w + aw;
                me.touch(v);
                if (nw < me.dist[v]) {
                    me.dist[v] = nw;
                    me.parent[v] = u;
                    me.parent_arc[v] = arc;
                    Q.push({nw, v});
                    if (trace) {
                        trace->relaxed[sd].push_back({u, v});
                        trace->elevating[sd].push_back(elevating);
                    }
                }
            });
        }
    }
    return theta;
}

}  // namespace ahr
