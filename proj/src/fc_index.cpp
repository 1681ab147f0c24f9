#include "ahr/fc_index.hpp"

#include <algorithm>
#include <fstream>

#include "ahr/bidir_search.hpp"
#include "ahr/binary_io.hpp"

namespace ahr {

BidirState& thread_bidir_state() {
    thread_local BidirState st;
    return st;
}

int LevelAssignment::edge_level_of(NodeId u, NodeId v) const {
    ArcKey k{u, v};
    auto it = std::lower_bound(edge_level.begin(), edge_level.end(), k,
                               [](const std::pair<ArcKey, int>& p, const ArcKey& x) { return p.first < x; });
    return it != edge_level.end() && it->first == k ? it->second : 0;
}

LevelAssignment assign_fc_levels(const RoadNetwork& net, const GridHierarchy& g, Exec exec) {
    LevelAssignment a;
    a.level.assign(net.n(), 0);
    std::vector<std::pair<ArcKey, int>> tagged;
    // top-down: an edge keeps the highest level whose arterial set holds it
    for (int i = g.h(); i >= 1; --i) {
        for (const ArcKey& k : arterial_edges_at_level(g, net, i, exec)) tagged.push_back({k, i});
    }
    std::stable_sort(tagged.begin(), tagged.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (size_t i = 0; i < tagged.size(); ++i) {
        if (i > 0 && tagged[i].first == tagged[i - 1].first) continue;  // first seen is the highest level
        a.edge_level.push_back(tagged[i]);
        NodeId u = tagged[i].first.tail, v = tagged[i].first.head;
        a.level[u] = std::max(a.level[u], tagged[i].second);
        a.level[v] = std::max(a.level[v], tagged[i].second);
    }
    return a;
}

namespace {

// Flagged witness search from u over G. A label is flagged once its path
// interior holds a node at level >= threshold. Runs until no unflagged
// label is open, so unflagged settled labels are exact.
void witness_search(const RoadNetwork& net, const std::vector<int>& level, NodeId u, bool backward,
                    SearchScratch& sc, std::vector<std::pair<NodeId, PathWeight>>& found) {
    const int thr = level[u];
    sc.prepare(net.n());
    FlagHeap q;
    PathWeight zero;
    zero.k = uint8_t(net.k());
    sc.touch(u);
    sc.dist[u] = zero;
    q.push({zero, u});
    int64_t open_unflagged = 1;
    while (!q.empty() && open_unflagged > 0) {
        auto [w, x] = q.top();
        q.pop();
        if (sc.done[x] || w != sc.dist[x]) continue;
        sc.done[x] = 1;
        if (!sc.tag[x]) --open_unflagged;
        if (x != u && !sc.tag[x] && sc.parent[x] != u) {
            bool target = backward ? level[x] > thr : level[x] >= thr;
            if (target) found.push_back({x, w});
        }
        const int child_flag = sc.tag[x] || (x != u && level[x] >= thr);
        auto relax = [&](NodeId y, const PathWeight& ew) {
            PathWeight nw = w + ew;
            sc.touch(y);
            if (nw < sc.dist[y]) {
                if (!sc.dist[y].is_infinite() && !sc.tag[y]) --open_unflagged;
                sc.dist[y] = nw;
                sc.parent[y] = x;
                sc.tag[y] = child_flag;
                if (!child_flag) ++open_unflagged;
                q.push({nw, y});
            }
        };
        if (!backward) {
            for (const auto& e : net.out_edges(x)) relax(e.head, e.w);
        } else {
            for (EdgeId id : net.in_edges(x)) relax(net.edge(id).tail, net.edge(id).w);
        }
    }
}

}  // namespace

FcHierarchy build_fc_with_levels(const RoadNetwork& net, const GridHierarchy& g, const LevelAssignment& levels,
                                 Exec exec) {
    FcHierarchy H;
    H.assignment = levels;
    H.grid = g;
    H.coords = net.coords();
    H.k = net.k();
    for (const auto& e : net.edges()) H.edges.push_back({e.tail, e.head, e.w, false});

    const NodeId n = net.n();
    std::vector<std::vector<HEdge>> per(n);
    auto one = [&](NodeId u, SearchScratch& sc) {
        std::vector<std::pair<NodeId, PathWeight>> found;
        witness_search(net, levels.level, u, false, sc, found);
        for (auto& [x, w] : found) per[u].push_back({u, x, w, true});
        found.clear();
        witness_search(net, levels.level, u, true, sc, found);
        for (auto& [x, w] : found) per[u].push_back({x, u, w, true});
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel
        {
            SearchScratch sc;
#pragma omp for schedule(dynamic, 16)
            for (int64_t u = 0; u < int64_t(n); ++u) one(NodeId(u), sc);
        }
    } else {
        SearchScratch sc;
        for (NodeId u = 0; u < n; ++u) one(u, sc);
    }
    std::vector<HEdge> sc;
    for (auto& v : per) sc.insert(sc.end(), v.begin(), v.end());
    std::sort(sc.begin(), sc.end(), [](const HEdge& a, const HEdge& b) {
        return std::tie(a.tail, a.head) < std::tie(b.tail, b.head);
    });
    H.edges.insert(H.edges.end(), sc.begin(), sc.end());
    H.finalize();
    return H;
}

FcHierarchy build_fc(const RoadNetwork& net, const GridHierarchy& g, const FcOptions& opt) {
    if (net.n() > opt.node_cap)
        throw ValidationError("FC refuses networks above " + std::to_string(opt.node_cap) +
                              " nodes; use the AH index instead");
    return build_fc_with_levels(net, g, assign_fc_levels(net, g, opt.exec), opt.exec);
}

size_t FcHierarchy::shortcut_count() const {
    return size_t(std::count_if(edges.begin(), edges.end(), [](const HEdge& e) { return e.shortcut; }));
}

void FcHierarchy::finalize() {
    const NodeId N = n();
    const auto& lv = assignment.level;
    fwd_off.assign(N + 1, 0);
    bwd_off.assign(N + 1, 0);
    // level constraint is static: prune arcs into lower levels up front
    for (const auto& e : edges) {
        if (lv[e.head] >= lv[e.tail]) ++fwd_off[e.tail + 1];
        if (lv[e.tail] >= lv[e.head]) ++bwd_off[e.head + 1];
    }
    for (NodeId v = 0; v < N; ++v) {
        fwd_off[v + 1] += fwd_off[v];
        bwd_off[v + 1] += bwd_off[v];
    }
    fwd.assign(fwd_off[N], {});
    bwd.assign(bwd_off[N], {});
    std::vector<uint32_t> f(fwd_off.begin(), fwd_off.end() - 1), b(bwd_off.begin(), bwd_off.end() - 1);
    for (uint32_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (lv[e.head] >= lv[e.tail]) fwd[f[e.tail]++] = {e.head, i};
        if (lv[e.tail] >= lv[e.head]) bwd[b[e.head]++] = {e.tail, i};
    }
}

PathWeight FcHierarchy::distance(NodeId s, NodeId t, QueryStats* stats, QueryTrace* trace) const {
    if (s >= n() || t >= n()) throw ContractError("node id out of range");
    const auto& lv = assignment.level;
    const int h = grid.h();
    NodeId root[2] = {s, t};
    auto expand = [&](int sd, NodeId u, auto&& relax) {
        const auto& off = sd == 0 ? fwd_off : bwd_off;
        const auto& arcs = sd == 0 ? fwd : bwd;
        for (uint32_t i = off[u]; i < off[u + 1]; ++i) {
            NodeId v = arcs[i].to;
            int L = lv[v];
            if (L < h && !grid.same_3x3_region(root[sd], v, L + 1)) continue;
            if (stats) stats->max_level_touched = std::max(stats->max_level_touched, L);
            relax(v, edges[arcs[i].edge].w, arcs[i].edge, false);
        }
    };
    return bidir_search(thread_bidir_state(), n(), s, t, k, expand, stats, trace);
}

PathWeight fc_distance(const FcHierarchy& index, NodeId s, NodeId t) { return index.distance(s, t); }

QueryStats fc_visit_stats(const FcHierarchy& index, NodeId s, NodeId t) {
    QueryStats st;
    index.distance(s, t, &st);
    return st;
}

void write_fc(const FcHierarchy& H, std::ostream& out) {
    BinWriter w(out);
    w.magic("FCH1");
    w.u16(1);
    w.u64(H.n());
    w.u32(uint32_t(H.k));
    w.u32(uint32_t(H.grid.h()));
    w.f64(H.grid.origin().x);
    w.f64(H.grid.origin().y);
    w.f64(H.grid.root_side());
    for (const auto& c : H.coords) {
        w.f64(c.x);
        w.f64(c.y);
    }
    for (int l : H.assignment.level) w.i32(l);
    w.u64(H.assignment.edge_level.size());
    for (const auto& [k, l] : H.assignment.edge_level) {
        w.u32(k.tail);
        w.u32(k.head);
        w.i32(l);
    }
    w.u64(H.edges.size());
    for (const auto& e : H.edges) {
        w.u32(e.tail);
        w.u32(e.head);
        w.weight(e.w);
        w.u8(e.shortcut);
    }
    if (!w.ok()) throw ValidationError("FC snapshot write failed");
}

FcHierarchy read_fc(std::istream& in) {
    BinReader r(in);
    r.expect_magic("FCH1");
    if (r.u16() != 1) throw ParseError("unsupported FCH1 version");
    FcHierarchy H;
    uint64_t n = r.count(uint64_t(1) << 32);
    H.k = int(r.u32());
    int h = int(r.u32());
    Coord origin{r.f64(), r.f64()};
    double side = r.f64();
    H.coords.resize(n);
    for (auto& c : H.coords) {
        c.x = r.f64();
        c.y = r.f64();
    }
    H.grid = GridHierarchy(h, origin, side, H.coords);
    H.assignment.level.resize(n);
    for (auto& l : H.assignment.level) l = r.i32();
    uint64_t ne = r.count(uint64_t(1) << 36);
    H.assignment.edge_level.resize(ne);
    for (auto& [k, l] : H.assignment.edge_level) {
        k.tail = r.u32();
        k.head = r.u32();
        l = r.i32();
    }
    uint64_t m = r.count(uint64_t(1) << 36);
    H.edges.resize(m);
    for (auto& e : H.edges) {
        e.tail = r.u32();
        e.head = r.u32();
        e.w = r.weight();
        e.shortcut = r.u8() != 0;
        if (e.tail >= n || e.head >= n) throw ParseError("FC edge endpoint out of range");
    }
    H.finalize();
    return H;
}

void save_fc(const FcHierarchy& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    write_fc(index, out);
}

FcHierarchy load_fc(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    return read_fc(in);
}

}  // namespace ahr
