#include "ahr/ah_index.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "ahr/baseline_oracle.hpp"
#include "ahr/bidir_search.hpp"
#include "ahr/binary_io.hpp"

namespace ahr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

PathWeight zero_weight(int k) {
    PathWeight z;
    z.k = uint8_t(k);
    return z;
}

// Reduced graph used by core selection. O_0 is G; O_i keeps the nodes that
// are level-i cores or border nodes of R_{i+1}, joined by their cell-local
// shortest paths and by the original edges that cross R_{i+1} cells.
struct Overlay {
    struct Arc {
        NodeId to;
        PathWeight w;
    };
    std::vector<NodeId> nodes;
    std::vector<std::vector<Arc>> out, in;

    size_t arc_count() const {
        size_t c = 0;
        for (NodeId v : nodes) c += out[v].size();
        return c;
    }
};

Overlay base_overlay(const RoadNetwork& net) {
    Overlay o;
    o.nodes.resize(net.n());
    std::iota(o.nodes.begin(), o.nodes.end(), NodeId(0));
    o.out.resize(net.n());
    o.in.resize(net.n());
    for (const auto& e : net.edges()) {
        o.out[e.tail].push_back({e.head, e.w});
        o.in[e.head].push_back({e.tail, e.w});
    }
    return o;
}

template <class Body>
void for_each_index(int64_t count, Exec exec, Body&& body) {
    if (exec == Exec::Parallel) {
#pragma omp parallel
        {
            SearchScratch sc;
#pragma omp for schedule(dynamic, 8)
            for (int64_t i = 0; i < count; ++i) body(i, sc);
        }
    } else {
        SearchScratch sc;
        for (int64_t i = 0; i < count; ++i) body(i, sc);
    }
}

Overlay next_overlay(const Overlay& prev, const std::vector<char>& member, const GridHierarchy& g, int cell_level,
                     int k, Exec exec) {
    const NodeId n = g.n();
    Overlay o;
    for (NodeId v : prev.nodes)
        if (member[v]) o.nodes.push_back(v);
    o.out.resize(n);
    o.in.resize(n);
    const PathWeight zero = zero_weight(k);
    for_each_index(int64_t(o.nodes.size()), exec, [&](int64_t idx, SearchScratch& sc) {
        const NodeId a = o.nodes[size_t(idx)];
        const CellCoord ca = g.cell_of(a, cell_level);
        auto& res = o.out[a];
        for (const auto& arc : prev.out[a])
            if (!(g.cell_of(arc.to, cell_level) == ca)) res.push_back(arc);
        // cell-restricted search; a label is flagged once its interior holds a member
        sc.prepare(n);
        FlagHeap q;
        sc.touch(a);
        sc.dist[a] = zero;
        q.push({zero, a});
        int64_t open_unflagged = 1;
        while (!q.empty() && open_unflagged > 0) {
            auto [w, x] = q.top();
            q.pop();
            if (sc.done[x] || w != sc.dist[x]) continue;
            sc.done[x] = 1;
            if (!sc.tag[x]) --open_unflagged;
            if (x != a && !sc.tag[x] && member[x]) res.push_back({x, w});
            const int child_flag = sc.tag[x] || (x != a && member[x]);
            for (const auto& arc : prev.out[x]) {
                NodeId y = arc.to;
                if (!(g.cell_of(y, cell_level) == ca)) continue;
                PathWeight nw = w + arc.w;
                sc.touch(y);
                if (nw < sc.dist[y]) {
                    if (!sc.dist[y].is_infinite() && !sc.tag[y]) --open_unflagged;
                    sc.dist[y] = nw;
                    sc.tag[y] = child_flag;
                    if (!child_flag) ++open_unflagged;
                    q.push({nw, y});
                }
            }
        }
    });
    for (NodeId a : o.nodes)
        for (const auto& arc : o.out[a]) o.in[arc.to].push_back({a, arc.w});
    return o;
}

std::vector<ArcKey> pseudo_arterial_edges(const Overlay& o, const GridHierarchy& g, int level, Exec exec) {
    CellIndex cells(g, level, o.nodes);
    std::vector<Region> regions = g.regions_4x4_over(level, o.nodes);
    std::vector<std::vector<ArcKey>> per(regions.size());
    auto out_of = [&](NodeId v, auto&& fn) {
        for (const auto& a : o.out[v]) fn(a.to, a.w);
    };
    auto in_of = [&](NodeId v, auto&& fn) {
        for (const auto& a : o.in[v]) fn(a.to, a.w);
    };
    for_each_index(int64_t(regions.size()), exec, [&](int64_t i, SearchScratch&) {
        RegionGraph rg(g, cells, regions[size_t(i)], out_of, in_of);
        per[size_t(i)] = arterial_edges(rg);
    });
    std::vector<ArcKey> all;
    for (auto& v : per) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

}  // namespace

std::vector<NodeId> greedy_vertex_cover(const std::vector<ArcKey>& edges) {
    std::vector<std::pair<NodeId, NodeId>> und;
    for (const auto& e : edges) {
        if (e.tail == e.head) continue;
        und.push_back({std::min(e.tail, e.head), std::max(e.tail, e.head)});
    }
    std::sort(und.begin(), und.end());
    und.erase(std::unique(und.begin(), und.end()), und.end());
    std::unordered_map<NodeId, std::vector<size_t>> inc;
    for (size_t i = 0; i < und.size(); ++i) {
        inc[und[i].first].push_back(i);
        inc[und[i].second].push_back(i);
    }
    std::unordered_map<NodeId, size_t> deg;
    std::set<std::pair<int64_t, NodeId>> pq;  // (-uncovered degree, id)
    for (auto& [v, l] : inc) {
        deg[v] = l.size();
        pq.insert({-int64_t(l.size()), v});
    }
    std::vector<char> covered(und.size(), 0);
    std::vector<NodeId> cover;
    while (!pq.empty()) {
        auto [nd, v] = *pq.begin();
        if (nd == 0) break;
        pq.erase(pq.begin());
        cover.push_back(v);
        deg[v] = 0;
        for (size_t i : inc[v]) {
            if (covered[i]) continue;
            covered[i] = 1;
            NodeId w = und[i].first == v ? und[i].second : und[i].first;
            size_t& d = deg[w];
            pq.erase({-int64_t(d), w});
            --d;
            if (d > 0) pq.insert({-int64_t(d), w});
        }
    }
    return cover;
}

CoreTrace select_cores(const RoadNetwork& net, const GridHierarchy& g, Exec exec) {
    const NodeId n = net.n();
    const int h = g.h();
    CoreTrace tr;
    tr.h = h;
    tr.level.assign(n, 0);
    tr.pseudo.resize(size_t(h) + 1);
    tr.cover.resize(size_t(h) + 1);
    const std::vector<int> J = border_levels(g, net);
    Overlay o = base_overlay(net);
    for (int i = 0; i < h; ++i) {
        const int L = i + 1;
        if (i > 0) {
            std::vector<char> member(n, 0);
            for (NodeId v : o.nodes) member[v] = tr.level[v] >= i || J[v] >= L;
            o = next_overlay(o, member, g, L, net.k(), exec);
        }
        tr.overlay_nodes.push_back(o.nodes.size());
        tr.overlay_arcs.push_back(o.arc_count());
        auto S = pseudo_arterial_edges(o, g, L, exec);
        auto cover = greedy_vertex_cover(S);
        for (NodeId v : cover) tr.level[v] = L;
        // endpoints left out of the cover drop to level i
        for (const auto& e : S) {
            tr.level[e.tail] = std::max(tr.level[e.tail], i);
            tr.level[e.head] = std::max(tr.level[e.head], i);
        }
        tr.pseudo[size_t(L)] = std::move(S);
        tr.cover[size_t(L)] = std::move(cover);
    }
    return tr;
}

CoreAssignment rank_and_downgrade(const CoreTrace& tr, uint64_t seed) {
    const NodeId n = NodeId(tr.level.size());
    CoreAssignment c;
    c.level = tr.level;
    std::vector<uint64_t> key(n);
    std::iota(key.begin(), key.end(), uint64_t(0));
    std::mt19937_64 rng(seed);
    for (NodeId i = n; i > 1; --i) std::swap(key[i - 1], key[draw_below(rng, i)]);
    std::vector<int> group(n, 0);
    for (size_t L = 1; L < tr.cover.size(); ++L) {
        const auto& cv = tr.cover[L];
        for (size_t p = 0; p < cv.size(); ++p) {
            NodeId v = cv[p];
            if (c.level[v] != int(L)) continue;
            group[v] = 1;
            key[v] = cv.size() - p;  // first picked ranks highest
        }
    }
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId(0));
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return std::tie(c.level[a], group[a], key[a], a) < std::tie(c.level[b], group[b], key[b], b);
    });
    c.rank.assign(n, 0);
    for (NodeId i = 0; i < n; ++i) c.rank[order[i]] = i;
    return c;
}

namespace {

struct GArc {
    NodeId to;
    uint32_t e;
};

struct Builder {
    const std::vector<int>& lv;
    const std::vector<uint32_t>& rk;
    const std::vector<int>& J;
    const std::vector<AhShortcut>& edges;
    const std::vector<std::vector<GArc>>& gout;
    const std::vector<std::vector<GArc>>& gin;
    NodeId n;
    int k;

    const std::vector<GArc>& arcs(NodeId x, bool backward) const { return backward ? gin[x] : gout[x]; }

    // Rank-flagged search in G*_i from u. Unflagged higher-ranked targets
    // reached over a non-empty interior become level edges.
    void level_edges(NodeId u, int i, bool backward, SearchScratch& sc, std::vector<AhShortcut>& out) const {
        const PathWeight zero = zero_weight(k);
        sc.prepare(n);
        FlagHeap q;
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
            if (x != u && !sc.tag[x] && rk[x] > rk[u] && sc.parent[x] != u) {
                AhShortcut s;
                s.tail = backward ? x : u;
                s.head = backward ? u : x;
                s.w = w;
                s.via = sc.aux[x];
                s.kind = ShortcutKind::LevelEdge;
                s.created_level = int16_t(i);
                out.push_back(s);
            }
            const int child_flag = sc.tag[x] || (x != u && rk[x] > rk[u]);
            NodeId child_aux = kNoNode;
            if (x != u) child_aux = (sc.aux[x] == kNoNode || rk[x] > rk[sc.aux[x]]) ? x : sc.aux[x];
            for (const auto& a : arcs(x, backward)) {
                NodeId y = a.to;
                if (lv[y] < i) continue;
                PathWeight nw = w + edges[a.e].w;
                sc.touch(y);
                if (nw < sc.dist[y]) {
                    if (!sc.dist[y].is_infinite() && !sc.tag[y]) --open_unflagged;
                    sc.dist[y] = nw;
                    sc.parent[y] = x;
                    sc.parent_arc[y] = a.e;
                    sc.tag[y] = child_flag;
                    sc.aux[y] = child_aux;
                    if (!child_flag) ++open_unflagged;
                    q.push({nw, y});
                }
            }
        }
    }

    // Shortcuts between level > i nodes whose shortest path runs through
    // level-i nodes only, so G*_{i+1} preserves distances.
    void connectivity_edges(NodeId a0, int i, SearchScratch& sc, std::vector<AhShortcut>& out) const {
        const PathWeight zero = zero_weight(k);
        sc.prepare(n);
        FlagHeap q;
        sc.touch(a0);
        sc.dist[a0] = zero;
        q.push({zero, a0});
        int64_t open_unflagged = 1;
        while (!q.empty() && open_unflagged > 0) {
            auto [w, x] = q.top();
            q.pop();
            if (sc.done[x] || w != sc.dist[x]) continue;
            sc.done[x] = 1;
            if (!sc.tag[x]) --open_unflagged;
            if (x != a0 && !sc.tag[x] && lv[x] > i && sc.parent[x] != a0) {
                AhShortcut s;
                s.tail = a0;
                s.head = x;
                s.w = w;
                s.via = sc.aux[x];
                s.kind = ShortcutKind::Connectivity;
                s.created_level = int16_t(i);
                out.push_back(s);
            }
            const int child_flag = sc.tag[x] || (x != a0 && lv[x] > i);
            NodeId child_aux = kNoNode;
            if (x != a0) child_aux = (sc.aux[x] == kNoNode || rk[x] > rk[sc.aux[x]]) ? x : sc.aux[x];
            for (const auto& a : gout[x]) {
                NodeId y = a.to;
                if (lv[y] < i) continue;
                PathWeight nw = w + edges[a.e].w;
                sc.touch(y);
                if (nw < sc.dist[y]) {
                    if (!sc.dist[y].is_infinite() && !sc.tag[y]) --open_unflagged;
                    sc.dist[y] = nw;
                    sc.parent[y] = x;
                    sc.parent_arc[y] = a.e;
                    sc.tag[y] = child_flag;
                    sc.aux[y] = child_aux;
                    if (!child_flag) ++open_unflagged;
                    q.push({nw, y});
                }
            }
        }
    }

    // Elevating edges of a level-i node v: for every y that is the first node
    // of level >= j on the shortest path from v, for some j in (i, J(v)].
    void elevating_edges(NodeId v, int i, bool backward, SearchScratch& sc, std::vector<AhShortcut>& out) const {
        const int Jv = J[v];
        const PathWeight zero = zero_weight(k);
        sc.prepare(n);
        FlagHeap q;
        sc.touch(v);
        sc.dist[v] = zero;
        sc.tag[v] = -1;  // max interior level
        q.push({zero, v});
        int64_t open_low = 1;
        std::vector<NodeId> targets;
        while (!q.empty() && open_low > 0) {
            auto [w, x] = q.top();
            q.pop();
            if (sc.done[x] || w != sc.dist[x]) continue;
            sc.done[x] = 1;
            const int m = sc.tag[x];
            if (m < Jv) --open_low;
            if (x != v && m < Jv) {
                int jlo = std::max(i + 1, m + 1), jhi = std::min(lv[x], Jv);
                if (jlo <= jhi) targets.push_back(x);
            }
            const int cm = x == v ? -1 : std::max(m, lv[x]);
            for (const auto& a : arcs(x, backward)) {
                NodeId y = a.to;
                if (lv[y] < i) continue;
                PathWeight nw = w + edges[a.e].w;
                sc.touch(y);
                if (nw < sc.dist[y]) {
                    if (!sc.dist[y].is_infinite() && sc.tag[y] < Jv) --open_low;
                    sc.dist[y] = nw;
                    sc.parent[y] = x;
                    sc.parent_arc[y] = a.e;
                    sc.tag[y] = cm;
                    if (cm < Jv) ++open_low;
                    q.push({nw, y});
                }
            }
        }
        std::vector<NodeId> p;
        std::vector<uint32_t> arc;  // arc[j] joins p[j] and p[j+1]
        for (NodeId y : targets) {
            const int m = sc.tag[y];
            // path in travel order from tail to head
            p.clear();
            arc.clear();
            for (NodeId x = y; x != v; x = sc.parent[x]) {
                p.push_back(x);
                arc.push_back(sc.parent_arc[x]);
            }
            p.push_back(v);
            if (!backward) {
                std::reverse(p.begin(), p.end());
                std::reverse(arc.begin(), arc.end());
            }
            const size_t K = arc.size();
            // records: ranks rising away from v
            std::vector<size_t> rec;
            if (!backward) {
                rec.push_back(0);
                for (size_t j = 1; j <= K; ++j)
                    if (rk[p[j]] > rk[p[rec.back()]]) rec.push_back(j);
            } else {
                rec.push_back(K);
                for (size_t j = K; j-- > 0;)
                    if (rk[p[j]] > rk[p[rec.back()]]) rec.push_back(j);
            }
            if (p[rec.back()] != y) throw InvariantError("elevating target is not the top record");
            AhShortcut s;
            s.tail = p.front();
            s.head = p.back();
            s.w = sc.dist[y];
            s.kind = ShortcutKind::Elevating;
            s.created_level = int16_t(i);
            s.jlo = int16_t(std::max(i + 1, m + 1));
            s.jhi = int16_t(std::min(lv[y], Jv));
            if (rec.size() > 2) {
                s.via = p[rec[1]];
            } else if (K == 1) {
                s.via = edges[arc[0]].via;
            } else {
                NodeId best = p[1];
                for (size_t j = 2; j < K; ++j)
                    if (rk[p[j]] > rk[best]) best = p[j];
                s.via = best;
            }
            out.push_back(s);
            for (size_t r = 1; r + 2 < rec.size(); ++r) {
                AhShortcut x;
                size_t lo = backward ? 0 : rec[r], hi = backward ? rec[r] : K;
                x.tail = p[lo];
                x.head = p[hi];
                x.w = zero;
                for (size_t j = lo; j < hi; ++j) x.w += edges[arc[j]].w;
                x.via = p[rec[r + 1]];
                x.kind = ShortcutKind::ElevatingAux;
                x.created_level = int16_t(i);
                out.push_back(x);
            }
        }
    }
};

}  // namespace

AhHierarchy build_shortcuts(const RoadNetwork& net, const GridHierarchy& g, const CoreAssignment& cores, Exec exec,
                            AhBuildReport* report) {
    const auto t0 = Clock::now();
    const NodeId n = net.n();
    if (cores.level.size() != n || cores.rank.size() != n) throw ContractError("core assignment size mismatch");
    AhHierarchy H;
    H.cores = cores;
    H.grid = g;
    H.coords = net.coords();
    H.k = net.k();
    H.tau_prime = net.tau_prime();
    H.border_level = border_levels(g, net);
    const int h = g.h();
    for (const auto& e : net.edges()) {
        AhShortcut s;
        s.tail = e.tail;
        s.head = e.head;
        s.w = e.w;
        H.edges.push_back(s);
    }
    std::vector<std::vector<GArc>> gout(n), gin(n);
    for (uint32_t i = 0; i < H.edges.size(); ++i) {
        gout[H.edges[i].tail].push_back({H.edges[i].head, i});
        gin[H.edges[i].head].push_back({H.edges[i].tail, i});
    }
    std::vector<std::vector<NodeId>> by_level(size_t(h) + 1);
    for (NodeId v = 0; v < n; ++v) {
        if (cores.level[v] < 0 || cores.level[v] > h) throw ContractError("core level out of range");
        by_level[size_t(cores.level[v])].push_back(v);
    }
    Builder b{cores.level, cores.rank, H.border_level, H.edges, gout, gin, n, net.k()};
    for (int i = 0; i <= h; ++i) {
        const auto& U = by_level[size_t(i)];
        std::vector<std::vector<AhShortcut>> per(U.size());
        for_each_index(int64_t(U.size()), exec, [&](int64_t idx, SearchScratch& sc) {
            NodeId u = U[size_t(idx)];
            auto& out = per[size_t(idx)];
            b.level_edges(u, i, false, sc, out);
            b.level_edges(u, i, true, sc, out);
            if (H.border_level[u] > i) {
                b.elevating_edges(u, i, false, sc, out);
                b.elevating_edges(u, i, true, sc, out);
            }
        });
        std::vector<NodeId> A;
        if (i < h) {
            for (NodeId a = 0; a < n; ++a) {
                if (cores.level[a] <= i) continue;
                for (const auto& arc : gout[a])
                    if (cores.level[arc.to] == i) {
                        A.push_back(a);
                        break;
                    }
            }
        }
        std::vector<std::vector<AhShortcut>> conn(A.size());
        for_each_index(int64_t(A.size()), exec, [&](int64_t idx, SearchScratch& sc) {
            b.connectivity_edges(A[size_t(idx)], i, sc, conn[size_t(idx)]);
        });
        for (auto& v : per) H.edges.insert(H.edges.end(), v.begin(), v.end());
        for (auto& v : conn) {
            for (auto& s : v) {
                uint32_t id = uint32_t(H.edges.size());
                H.edges.push_back(s);
                gout[s.tail].push_back({s.head, id});
                gin[s.head].push_back({s.tail, id});
            }
        }
    }
    H.finalize();
    if (report) {
        report->nodes_per_level.assign(size_t(h) + 1, 0);
        for (int l : cores.level) ++report->nodes_per_level[size_t(l)];
        report->original_edges = report->level_edges = report->connectivity_edges = 0;
        report->elevating_edges = report->elevating_aux_edges = 0;
        for (const auto& e : H.edges) {
            switch (e.kind) {
                case ShortcutKind::Original: ++report->original_edges; break;
                case ShortcutKind::LevelEdge: ++report->level_edges; break;
                case ShortcutKind::Connectivity: ++report->connectivity_edges; break;
                case ShortcutKind::Elevating: ++report->elevating_edges; break;
                case ShortcutKind::ElevatingAux: ++report->elevating_aux_edges; break;
            }
        }
        report->seconds_shortcuts = seconds_since(t0);
        report->memory_bytes = H.memory_bytes();
    }
    return H;
}

AhHierarchy build_ah(const RoadNetwork& input, const AhOptions& opt, AhBuildReport* report) {
    const bool do_perturb = opt.k > 0 && !input.perturbed();
    RoadNetwork perturbed;
    if (do_perturb) perturbed = perturb(input, opt.k, opt.seed);
    const RoadNetwork& net = do_perturb ? perturbed : input;
    const auto t0 = Clock::now();
    GridHierarchy g = build_grids(net);
    CoreTrace tr = select_cores(net, g, opt.exec);
    CoreAssignment cores = rank_and_downgrade(tr, opt.seed);
    const double tc = seconds_since(t0);
    AhHierarchy H = build_shortcuts(net, g, cores, opt.exec, report);
    H.seed = opt.seed;
    if (report) {
        report->seconds_cores = tc;
        report->perturbed = net.perturbed();
    }
    return H;
}

std::string AhBuildReport::to_string() const {
    std::ostringstream os;
    os << "levels";
    for (size_t l = 0; l < nodes_per_level.size(); ++l) os << ' ' << l << ':' << nodes_per_level[l];
    os << "\nedges original=" << original_edges << " level=" << level_edges << " connectivity=" << connectivity_edges
       << " elevating=" << elevating_edges << " elevating_aux=" << elevating_aux_edges;
    os << "\ntime cores=" << seconds_cores << "s shortcuts=" << seconds_shortcuts << 's';
    os << "\nmemory_bytes=" << memory_bytes << " perturbed=" << (perturbed ? "yes" : "no") << '\n';
    return os.str();
}

void AhHierarchy::finalize() {
    const NodeId N = n();
    const auto& rk = cores.rank;
    auto build = [&](std::vector<uint32_t>& off, std::vector<Arc>& arcs, auto&& owner) {
        off.assign(N + 1, 0);
        for (uint32_t i = 0; i < edges.size(); ++i) {
            auto [o, to] = owner(edges[i]);
            if (o != kNoNode) ++off[o + 1];
        }
        for (NodeId v = 0; v < N; ++v) off[v + 1] += off[v];
        arcs.assign(off[N], {});
        std::vector<uint32_t> f(off.begin(), off.end() - 1);
        for (uint32_t i = 0; i < edges.size(); ++i) {
            auto [o, to] = owner(edges[i]);
            if (o != kNoNode) arcs[f[o]++] = {to, i};
        }
    };
    auto is_up = [](const AhShortcut& e) {
        return e.kind == ShortcutKind::Original || e.kind == ShortcutKind::LevelEdge ||
               e.kind == ShortcutKind::Connectivity;
    };
    using P = std::pair<NodeId, NodeId>;
    build(up_off[0], up[0], [&](const AhShortcut& e) {
        return is_up(e) && rk[e.head] > rk[e.tail] ? P{e.tail, e.head} : P{kNoNode, 0};
    });
    build(up_off[1], up[1], [&](const AhShortcut& e) {
        return is_up(e) && rk[e.tail] > rk[e.head] ? P{e.head, e.tail} : P{kNoNode, 0};
    });
    build(el_off[0], el[0], [&](const AhShortcut& e) {
        return e.kind == ShortcutKind::Elevating && rk[e.tail] < rk[e.head] ? P{e.tail, e.head} : P{kNoNode, 0};
    });
    build(el_off[1], el[1], [&](const AhShortcut& e) {
        return e.kind == ShortcutKind::Elevating && rk[e.head] < rk[e.tail] ? P{e.head, e.tail} : P{kNoNode, 0};
    });
    hop_.clear();
    hop_.reserve(edges.size());
    auto elev = [](const AhShortcut& e) {
        return e.kind == ShortcutKind::Elevating || e.kind == ShortcutKind::ElevatingAux;
    };
    for (uint32_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        uint64_t key = (uint64_t(e.tail) << 32) | e.head;
        auto [it, fresh] = hop_.try_emplace(key, i);
        if (fresh) continue;
        const auto& cur = edges[it->second];
        if (e.w < cur.w || (e.w == cur.w && elev(cur) && !elev(e))) it->second = i;
    }
}

uint32_t AhHierarchy::lookup(NodeId a, NodeId b) const {
    auto it = hop_.find((uint64_t(a) << 32) | b);
    if (it == hop_.end())
        throw InvariantError("no hierarchy edge for hop " + std::to_string(a) + "->" + std::to_string(b));
    return it->second;
}

void AhHierarchy::unpack(uint32_t e, std::vector<NodeId>& out, uint64_t* substitutions) const {
    std::vector<uint32_t> stack{e};
    const size_t limit = out.size() + 4 * size_t(n()) + 4;
    while (!stack.empty()) {
        const AhShortcut& s = edges[stack.back()];
        stack.pop_back();
        if (s.via == kNoNode) {
            out.push_back(s.head);
            if (out.size() > limit) throw InvariantError("unpacking does not terminate");
            continue;
        }
        if (s.via == s.tail || s.via == s.head) throw InvariantError("shortcut via is an endpoint");
        if (substitutions) ++*substitutions;
        stack.push_back(lookup(s.via, s.head));
        stack.push_back(lookup(s.tail, s.via));
    }
}

namespace {

PathWeight ah_search(const AhHierarchy& H, NodeId s, NodeId t, QueryStats* stats, QueryTrace* trace) {
    if (s >= H.n() || t >= H.n()) throw ContractError("node id out of range");
    const int h = H.grid.h();
    const int j = separation_level(H.grid, s, t);
    const auto& lv = H.cores.level;
    const auto& J = H.border_level;
    NodeId root[2] = {s, t};
    auto expand = [&](int sd, NodeId u, auto&& relax) {
        if (lv[u] < j) {
            const int jp = std::min(j, J[u]);
            if (jp > lv[u]) {
                bool any = false;
                for (uint32_t i = H.el_off[sd][u]; i < H.el_off[sd][u + 1]; ++i) {
                    const auto& a = H.el[sd][i];
                    const auto& e = H.edges[a.edge];
                    if (e.jlo <= jp && jp <= e.jhi) {
                        if (stats) stats->max_level_touched = std::max(stats->max_level_touched, lv[a.to]);
                        relax(a.to, e.w, a.edge, true);
                        any = true;
                    }
                }
                if (any) {
                    if (stats) ++stats->elevations_taken;
                    return;
                }
            }
        }
        for (uint32_t i = H.up_off[sd][u]; i < H.up_off[sd][u + 1]; ++i) {
            const auto& a = H.up[sd][i];
            const int L = lv[a.to];
            if (L < h && !H.grid.same_3x3_region(root[sd], a.to, L + 1)) continue;
            if (stats) stats->max_level_touched = std::max(stats->max_level_touched, L);
            relax(a.to, H.edges[a.edge].w, a.edge, false);
        }
    };
    return bidir_search(thread_bidir_state(), H.n(), s, t, H.k, expand, stats, trace);
}

}  // namespace

PathWeight AhHierarchy::distance(NodeId s, NodeId t, QueryStats* stats, QueryTrace* trace) const {
    return ah_search(*this, s, t, stats, trace);
}

AhHierarchy::PathResult AhHierarchy::shortest_path(NodeId s, NodeId t, QueryStats* stats) const {
    PathResult r;
    r.distance = ah_search(*this, s, t, stats, nullptr);
    if (r.distance.is_infinite()) return r;
    const BidirState& st = thread_bidir_state();
    std::vector<uint32_t> hops;
    for (NodeId x = st.meet; x != s; x = st.side[0].parent[x]) hops.push_back(st.side[0].parent_arc[x]);
    std::reverse(hops.begin(), hops.end());
    for (NodeId x = st.meet; x != t; x = st.side[1].parent[x]) hops.push_back(st.side[1].parent_arc[x]);
    r.hierarchy_hops = hops.size();
    r.nodes.push_back(s);
    for (uint32_t e : hops) unpack(e, r.nodes, &r.substitutions);
    return r;
}

RoadNetwork AhHierarchy::base_network() const {
    std::vector<Edge> es;
    for (const auto& e : edges)
        if (e.kind == ShortcutKind::Original) es.push_back({e.tail, e.head, e.w});
    return RoadNetwork::build(coords, std::move(es), k, tau_prime);
}

size_t AhHierarchy::memory_bytes() const {
    size_t b = edges.size() * sizeof(AhShortcut) + coords.size() * sizeof(Coord);
    b += cores.level.size() * (sizeof(int) * 2 + sizeof(uint32_t));
    for (int d = 0; d < 2; ++d) {
        b += (up_off[d].size() + el_off[d].size()) * sizeof(uint32_t);
        b += (up[d].size() + el[d].size()) * sizeof(Arc);
    }
    b += hop_.size() * (sizeof(uint64_t) + sizeof(uint32_t) + 2 * sizeof(void*));
    return b;
}

PathWeight ah_distance(const AhHierarchy& index, NodeId s, NodeId t) { return index.distance(s, t); }

std::vector<NodeId> ah_shortest_path(const AhHierarchy& index, NodeId s, NodeId t) {
    return index.shortest_path(s, t).nodes;
}

QueryStats ah_visit_stats(const AhHierarchy& index, NodeId s, NodeId t) {
    QueryStats st;
    index.distance(s, t, &st);
    return st;
}

size_t count_level_violations(const AhHierarchy& index, const RoadNetwork& net,
                              const std::vector<std::pair<NodeId, NodeId>>& pairs) {
    size_t bad = 0;
    for (auto [s, t] : pairs) {
        SearchResult r = dijkstra(net, s, t);
        if (r.distance.is_infinite()) continue;
        const int j = separation_level(index.grid, s, t);
        int top = 0;
        for (NodeId v : r.path) top = std::max(top, index.level(v));
        if (top < j) ++bad;
    }
    return bad;
}

void write_ah(const AhHierarchy& H, std::ostream& out) {
    BinWriter w(out);
    w.magic("AHI1");
    w.u16(1);
    w.u64(H.n());
    w.u32(uint32_t(H.k));
    w.u64(H.tau_prime);
    w.u64(H.seed);
    w.u32(uint32_t(H.grid.h()));
    w.f64(H.grid.origin().x);
    w.f64(H.grid.origin().y);
    w.f64(H.grid.root_side());
    for (const auto& c : H.coords) {
        w.f64(c.x);
        w.f64(c.y);
    }
    for (NodeId v = 0; v < H.n(); ++v) {
        w.i32(H.cores.level[v]);
        w.u32(H.cores.rank[v]);
        w.i32(H.border_level[v]);
    }
    w.u64(H.edges.size());
    for (const auto& e : H.edges) {
        w.u32(e.tail);
        w.u32(e.head);
        w.weight(e.w);
        w.u32(e.via);
        w.u8(uint8_t(e.kind));
        w.i32(e.created_level);
        w.i32(e.jlo);
        w.i32(e.jhi);
        w.u8(e.query_usable());
    }
    if (!w.ok()) throw ValidationError("AH snapshot write failed");
}

AhHierarchy read_ah(std::istream& in) {
    BinReader r(in);
    r.expect_magic("AHI1");
    if (r.u16() != 1) throw ParseError("unsupported AHI1 version");
    AhHierarchy H;
    uint64_t n = r.count(uint64_t(1) << 32);
    H.k = int(r.u32());
    H.tau_prime = r.u64();
    H.seed = r.u64();
    int h = int(r.u32());
    Coord origin{r.f64(), r.f64()};
    double side = r.f64();
    H.coords.resize(n);
    for (auto& c : H.coords) {
        c.x = r.f64();
        c.y = r.f64();
    }
    H.grid = GridHierarchy(h, origin, side, H.coords);
    H.cores.level.resize(n);
    H.cores.rank.resize(n);
    H.border_level.resize(n);
    std::vector<char> rank_seen(n, 0);
    for (uint64_t v = 0; v < n; ++v) {
        H.cores.level[v] = r.i32();
        H.cores.rank[v] = r.u32();
        H.border_level[v] = r.i32();
        if (H.cores.level[v] < 0 || H.cores.level[v] > h) throw ParseError("core level out of range");
        if (H.cores.rank[v] >= n || rank_seen[H.cores.rank[v]]) throw ParseError("ranks are not a permutation");
        rank_seen[H.cores.rank[v]] = 1;
    }
    uint64_t m = r.count(uint64_t(1) << 36);
    H.edges.resize(m);
    for (auto& e : H.edges) {
        e.tail = r.u32();
        e.head = r.u32();
        e.w = r.weight();
        e.via = r.u32();
        uint8_t kind = r.u8();
        if (kind > uint8_t(ShortcutKind::ElevatingAux)) throw ParseError("unknown shortcut kind");
        e.kind = ShortcutKind(kind);
        e.created_level = int16_t(r.i32());
        e.jlo = int16_t(r.i32());
        e.jhi = int16_t(r.i32());
        bool usable = r.u8() != 0;
        if (usable != e.query_usable()) throw ParseError("query-usable flag disagrees with kind");
        if (e.tail >= n || e.head >= n || (e.via != kNoNode && e.via >= n))
            throw ParseError("AH edge endpoint out of range");
    }
    H.finalize();
    return H;
}

void save_ah(const AhHierarchy& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    write_ah(index, out);
}

AhHierarchy load_ah(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    return read_ah(in);
}

}  // namespace ahr
