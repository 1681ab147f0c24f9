#include "ahr/arterial_analysis.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <sstream>

namespace ahr {

namespace {

constexpr uint64_t kNoArc = ~uint64_t(0);

ArcKey decode(uint64_t k) { return {NodeId(k >> 32), NodeId(k & 0xffffffffu)}; }

struct StateEntry {
    PathWeight w;
    int s;
    friend bool operator>(const StateEntry& a, const StateEntry& b) {
        if (a.w != b.w) return a.w > b.w;
        return a.s > b.s;
    }
};

}  // namespace

CellIndex::CellIndex(const GridHierarchy& g, int level, const std::vector<NodeId>& nodes) : members_(nodes) {
    entries_.reserve(nodes.size());
    for (NodeId v : nodes) {
        CellCoord c = g.cell_of(v, level);
        entries_.push_back({c.cx, c.cy, v});
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.cx, a.cy, a.v) < std::tie(b.cx, b.cy, b.v); });
}

CellIndex::CellIndex(const GridHierarchy& g, int level)
    : CellIndex(g, level, [&] {
          std::vector<NodeId> all(g.n());
          for (NodeId v = 0; v < g.n(); ++v) all[v] = v;
          return all;
      }()) {}

void CellIndex::nodes_in(int64_t cx, int64_t cy, std::vector<NodeId>& out) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair(cx, cy),
                               [](const Entry& e, const std::pair<int64_t, int64_t>& k) {
                                   return std::tie(e.cx, e.cy) < std::tie(k.first, k.second);
                               });
    for (; it != entries_.end() && it->cx == cx && it->cy == cy; ++it) out.push_back(it->v);
}

void CellIndex::nodes_in(const Region& r, std::vector<NodeId>& out) const {
    for (int64_t cx = r.ax; cx < r.ax + r.w; ++cx)
        for (int64_t cy = r.ay; cy < r.ay + r.hgt; ++cy) nodes_in(cx, cy, out);
}

int RegionGraph::add_node(const GridHierarchy& g, NodeId v, bool ins) {
    auto [it, fresh] = local.try_emplace(v, int(nodes.size()));
    if (fresh) {
        nodes.push_back(v);
        inside.push_back(ins);
        CellCoord c = g.cell_of(v, region.level);
        relcol.push_back(int(std::clamp<int64_t>(c.cx - region.ax, -8, 8)));
        relrow.push_back(int(std::clamp<int64_t>(c.cy - region.ay, -8, 8)));
        out.emplace_back();
        in.emplace_back();
    }
    return it->second;
}

RegionGraph::RegionGraph(const GridHierarchy& g, const RoadNetwork& net, const CellIndex& cells, const Region& r)
    : region(r) {
    populate(
        g, cells,
        [&](NodeId v, auto&& fn) {
            for (const auto& e : net.out_edges(v)) fn(e.head, e.w);
        },
        [&](NodeId v, auto&& fn) {
            for (EdgeId id : net.in_edges(v)) fn(net.edge(id).tail, net.edge(id).w);
        });
}

LocalTree local_sweep(const RegionGraph& rg, int source, Direction dir) {
    const int L = int(rg.nodes.size());
    LocalTree T;
    T.source = source;
    T.dist.assign(2 * L, PathWeight::infinity());
    T.parent.assign(2 * L, -1);
    T.tied.assign(2 * L, 0);
    T.min_cross[0].assign(2 * L, kNoArc);
    T.min_cross[1].assign(2 * L, kNoArc);
    std::vector<char> done(2 * L, 0);
    std::priority_queue<StateEntry, std::vector<StateEntry>, std::greater<>> q;
    const int start = 2 * source;
    T.dist[start] = PathWeight{};
    q.push({T.dist[start], start});
    const bool fwd = dir == Direction::Forward;
    while (!q.empty()) {
        auto [w, st] = q.top();
        q.pop();
        if (done[st]) continue;
        done[st] = 1;
        const int l = st / 2, f = st % 2;
        if (!rg.inside[l] && st != start) continue;
        for (const auto& arc : fwd ? rg.out[l] : rg.in[l]) {
            const int to = arc.to;
            int nf;
            if (rg.inside[l]) {
                if (rg.inside[to]) {
                    nf = f;
                } else {
                    if (f) continue;
                    nf = 1;
                }
            } else {
                if (!rg.inside[to]) continue;
                nf = 1;
            }
            const int ns = 2 * to + nf;
            PathWeight nw = w + arc.w;
            if (nw < T.dist[ns]) {
                T.dist[ns] = nw;
                T.parent[ns] = st;
                T.tied[ns] = T.tied[st];
                for (int a = 0; a < 2; ++a) {
                    uint64_t c = T.min_cross[a][st];
                    if (rg.crosses(l, to, Axis(a))) {
                        ArcKey k = fwd ? ArcKey{rg.nodes[l], rg.nodes[to]} : ArcKey{rg.nodes[to], rg.nodes[l]};
                        c = std::min(c, k.key());
                    }
                    T.min_cross[a][ns] = c;
                }
                q.push({nw, ns});
            } else if (nw == T.dist[ns] && T.parent[ns] != st) {
                T.tied[ns] = 1;
            }
        }
    }
    return T;
}

std::vector<NodeId> LocalTree::path_to(const RegionGraph& rg, int l, Direction d) const {
    std::vector<NodeId> p;
    int st = best_state(l);
    if (dist[st].is_infinite()) return p;
    for (; st != -1; st = parent[st]) p.push_back(rg.nodes[st / 2]);
    if (d == Direction::Forward) std::reverse(p.begin(), p.end());
    return p;
}

std::vector<LocalTree> local_shortest_paths(const RegionGraph& rg, const std::vector<NodeId>& sources,
                                            Direction dir) {
    std::vector<LocalTree> out;
    for (NodeId s : sources) {
        auto it = rg.local.find(s);
        if (it == rg.local.end()) continue;
        out.push_back(local_sweep(rg, it->second, dir));
    }
    return out;
}

namespace {

template <class Fn>
void for_each_spanning(const RegionGraph& rg, bool want_axis[2], Fn&& fn) {
    const int L = int(rg.nodes.size());
    for (int s = 0; s < L; ++s) {
        bool any = false;
        for (int a = 0; a < 2; ++a) any |= want_axis[a] && rg.eligible(s, Axis(a));
        if (!any) continue;
        LocalTree T = local_sweep(rg, s, Direction::Forward);
        for (int a = 0; a < 2; ++a) {
            if (!want_axis[a] || !rg.eligible(s, Axis(a))) continue;
            for (int t = 0; t < L; ++t) {
                if (!rg.eligible(t, Axis(a)) || rg.side(t, Axis(a)) == rg.side(s, Axis(a))) continue;
                if (!T.reached(t)) continue;
                fn(T, s, t, Axis(a));
            }
        }
    }
}

}  // namespace

std::vector<SpanningPathRecord> spanning_paths(const RegionGraph& rg) {
    std::vector<SpanningPathRecord> out;
    bool both[2] = {true, true};
    for_each_spanning(rg, both, [&](const LocalTree& T, int, int t, Axis a) {
        SpanningPathRecord rec;
        rec.path.nodes = T.path_to(rg, t, Direction::Forward);
        rec.path.weight = T.dist[T.best_state(t)];
        rec.path.region = rg.region;
        rec.axis = a;
        uint64_t k = T.min_cross[int(a)][T.best_state(t)];
        if (k == kNoArc) throw InvariantError("spanning path without a bisector crossing");
        rec.arterial_edge = decode(k);
        out.push_back(std::move(rec));
    });
    return out;
}

std::vector<ArcKey> arterial_edges(const RegionGraph& rg, Axis axis) {
    std::vector<uint64_t> keys;
    bool want[2] = {axis == Axis::WestEast, axis == Axis::NorthSouth};
    for_each_spanning(rg, want, [&](const LocalTree& T, int, int t, Axis a) {
        keys.push_back(T.min_cross[int(a)][T.best_state(t)]);
    });
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<ArcKey> out;
    for (uint64_t k : keys) out.push_back(decode(k));
    return out;
}

std::vector<ArcKey> arterial_edges(const RegionGraph& rg) {
    auto a = arterial_edges(rg, Axis::WestEast);
    auto b = arterial_edges(rg, Axis::NorthSouth);
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

std::vector<ArcKey> arterial_edges_at_level(const GridHierarchy& g, const RoadNetwork& net, int level, Exec exec) {
    CellIndex cells(g, level);
    std::vector<Region> regions = g.regions_4x4(level, true);
    std::vector<std::vector<ArcKey>> per(regions.size());
    const int64_t R = int64_t(regions.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (int64_t i = 0; i < R; ++i) {
            RegionGraph rg(g, net, cells, regions[size_t(i)]);
            per[size_t(i)] = arterial_edges(rg);
        }
    } else {
        for (int64_t i = 0; i < R; ++i) {
            RegionGraph rg(g, net, cells, regions[size_t(i)]);
            per[size_t(i)] = arterial_edges(rg);
        }
    }
    std::vector<ArcKey> all;
    for (auto& v : per) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

std::vector<uint64_t> arterial_counts(const GridHierarchy& g, const RoadNetwork& net, int level, Exec exec) {
    CellIndex cells(g, level);
    std::vector<Region> regions = g.regions_4x4(level, true);
    std::vector<uint64_t> counts(2 * regions.size(), 0);
    const int64_t R = int64_t(regions.size());
    // a two-way road segment counts once
    auto segments = [](std::vector<ArcKey> a) {
        for (auto& e : a)
            if (e.head < e.tail) std::swap(e.tail, e.head);
        std::sort(a.begin(), a.end());
        return uint64_t(std::unique(a.begin(), a.end()) - a.begin());
    };
    auto one = [&](int64_t i) {
        RegionGraph rg(g, net, cells, regions[size_t(i)]);
        counts[size_t(2 * i)] = segments(arterial_edges(rg, Axis::WestEast));
        counts[size_t(2 * i + 1)] = segments(arterial_edges(rg, Axis::NorthSouth));
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (int64_t i = 0; i < R; ++i) one(i);
    } else {
        for (int64_t i = 0; i < R; ++i) one(i);
    }
    return counts;
}

ArterialProfile arterial_profile(const RoadNetwork& net, const std::vector<int>& resolutions, Exec exec) {
    ArterialProfile p;
    RootSquare root = root_square(net);
    for (int r : resolutions) {
        if (r < 2 || r > 40) {
            p.skipped.push_back(r);
            continue;
        }
        GridHierarchy g(r - 1, root.origin, root.side, net.coords());
        std::vector<uint64_t> c = arterial_counts(g, net, 1, exec);
        ArterialStats s;
        s.r = r;
        s.regions = c.size() / 2;
        p.regions_examined += s.regions;
        if (!c.empty()) {
            std::sort(c.begin(), c.end());
            auto rank = [&](double q) {
                size_t idx = size_t(std::ceil(q * double(c.size())));
                return c[std::clamp<size_t>(idx, 1, c.size()) - 1];
            };
            s.max = c.back();
            double sum = 0;
            for (auto v : c) sum += double(v);
            s.mean = sum / double(c.size());
            s.q90 = rank(0.90);
            s.q99 = rank(0.99);
        }
        p.rows.push_back(s);
    }
    return p;
}

std::string profile_csv(const ArterialProfile& p) {
    std::ostringstream os;
    os << "r,regions,max,mean,q90,q99\n";
    os.setf(std::ios::fixed);
    os.precision(4);
    for (const auto& s : p.rows) os << s.r << ',' << s.regions << ',' << s.max << ',' << s.mean << ',' << s.q90 << ',' << s.q99 << '\n';
    return os.str();
}

// ---- SlidingWindow ----

SlidingWindowResult sliding_window(const GridHierarchy& g, const std::vector<NodeId>& path, int level) {
    if (path.empty()) throw ContractError("empty path");
    std::vector<CellCoord> c;
    for (NodeId v : path) c.push_back(g.cell_of(v, level));
    int64_t minx = c[0].cx, maxx = minx, miny = c[0].cy, maxy = miny;
    size_t theta = 0;
    bool found = false;
    for (size_t j = 0; j < path.size(); ++j) {
        theta = j;
        minx = std::min(minx, c[j].cx);
        maxx = std::max(maxx, c[j].cx);
        miny = std::min(miny, c[j].cy);
        maxy = std::max(maxy, c[j].cy);
        if (maxx - minx + 1 >= 4 || maxy - miny + 1 >= 4) {
            found = true;
            break;
        }
    }
    if (!found) throw ContractError("path too local: a 3x3 region covers it");

    const int64_t last = g.cells_per_side(level) - 4;
    SlidingWindowResult res;
    const bool wide = maxx - minx + 1 >= 4;
    res.axis = wide ? Axis::WestEast : Axis::NorthSouth;
    auto major = [&](size_t j) { return wide ? c[j].cx : c[j].cy; };
    auto minor = [&](size_t j) { return wide ? c[j].cy : c[j].cx; };
    // extremes over v_1..v_theta by coordinate; ties to the earliest node
    size_t alpha = 0, beta = 0;
    for (size_t j = 0; j <= theta; ++j) {
        if (major(j) < major(alpha)) alpha = j;
        if (major(j) > major(beta)) beta = j;
    }
    // bounding box of v_1..v_{theta-1}
    int64_t pmin = major(0), pmax = major(0), qmin = minor(0), qmax = minor(0);
    for (size_t j = 0; j < theta; ++j) {
        pmin = std::min(pmin, major(j));
        pmax = std::max(pmax, major(j));
        qmin = std::min(qmin, minor(j));
        qmax = std::max(qmax, minor(j));
    }
    auto pick_minor = [&](int64_t lo, int64_t hi) -> std::optional<int64_t> {
        int64_t a0 = std::max<int64_t>(0, hi - 3), a1 = std::min(last, lo);
        if (a0 > a1) return std::nullopt;
        return a0;
    };
    int64_t amaj = 0, amin = 0;
    bool ok = false;
    // literal: v_alpha in the west (south) strip, B covers v_1..v_{theta-1}
    {
        int64_t a = major(alpha);
        int64_t lo = qmin, hi = qmax;
        if (alpha == theta) {
            lo = std::min(lo, minor(alpha));
            hi = std::max(hi, minor(alpha));
        }
        auto m = pick_minor(lo, hi);
        if (a <= last && pmax <= a + 3 && m) {
            amaj = a;
            amin = *m;
            ok = true;
        }
    }
    if (!ok) {
        // mirrored: v_beta in the east (north) strip
        int64_t a = major(beta) - 3;
        int64_t lo = qmin, hi = qmax;
        if (beta == theta) {
            lo = std::min(lo, minor(beta));
            hi = std::max(hi, minor(beta));
        }
        auto m = pick_minor(lo, hi);
        if (a < 0 || a > last || pmin < a || !m) throw InvariantError("sliding window found no region");
        amaj = a;
        amin = *m;
        res.mirrored = true;
    }
    res.region = wide ? Region{level, amaj, amin, 4, 4} : Region{level, amin, amaj, 4, 4};
    res.a = std::min(alpha, beta);
    res.b = std::max(alpha, beta);
    res.subpath.assign(path.begin() + std::ptrdiff_t(res.a), path.begin() + std::ptrdiff_t(res.b) + 1);
    return res;
}

bool is_spanning_path(const GridHierarchy& g, const RoadNetwork& net, const Region& r,
                      const std::vector<NodeId>& sub, Axis axis) {
    if (sub.size() < 2) return false;
    CellIndex cells(g, r.level);
    RegionGraph rg(g, net, cells, r);
    auto fs = rg.local.find(sub.front()), ft = rg.local.find(sub.back());
    if (fs == rg.local.end() || ft == rg.local.end()) return false;
    int s = fs->second, t = ft->second;
    if (!rg.eligible(s, axis) || !rg.eligible(t, axis) || rg.side(s, axis) == rg.side(t, axis)) return false;
    LocalTree T = local_sweep(rg, s, Direction::Forward);
    if (!T.reached(t)) return false;
    return T.path_to(rg, t, Direction::Forward) == sub;
}

bool local_paths_unique(const GridHierarchy& g, const RoadNetwork& net) {
    for (int level = 1; level <= g.h(); ++level) {
        CellIndex cells(g, level);
        for (const Region& r : g.regions_4x4(level, true)) {
            RegionGraph rg(g, net, cells, r);
            for (int s = 0; s < int(rg.nodes.size()); ++s) {
                LocalTree T = local_sweep(rg, s, Direction::Forward);
                for (size_t st = 0; st < T.dist.size(); ++st)
                    if (T.tied[st] && !T.dist[st].is_infinite()) return false;
            }
        }
    }
    return true;
}

}  // namespace ahr
