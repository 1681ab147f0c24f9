#include "ahr/synthetic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace ahr {

namespace {

Edge make_edge(NodeId a, NodeId b, double len) {
    Edge e;
    e.tail = a;
    e.head = b;
    e.w.length = len;
    return e;
}

void two_way(std::vector<Edge>& out, NodeId a, NodeId b, double len_ab, double len_ba) {
    out.push_back(make_edge(a, b, len_ab));
    out.push_back(make_edge(b, a, len_ba));
}

double draw_len(std::mt19937_64& rng, int lo, int hi) {
    return double(lo + int(draw_below(rng, uint64_t(hi - lo + 1))));
}

}  // namespace

RoadNetwork manhattan_grid(const GridSpec& spec, uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int W = spec.width, H = spec.height;
    std::vector<Coord> coords(size_t(W) * H);
    auto id = [&](int x, int y) { return NodeId(y * W + x); };
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) coords[id(x, y)] = {double(x), double(y)};
    auto fast = [&](int k) { return spec.avenue_every > 0 && k % spec.avenue_every == 0; };
    std::vector<Edge> edges;
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            if (x + 1 < W) {
                bool f = fast(y);
                double l = f ? draw_len(rng, spec.avenue_min, spec.avenue_max)
                             : draw_len(rng, spec.street_min, spec.street_max);
                two_way(edges, id(x, y), id(x + 1, y), l, l);
            }
            if (y + 1 < H) {
                bool f = fast(x);
                double l = f ? draw_len(rng, spec.avenue_min, spec.avenue_max)
                             : draw_len(rng, spec.street_min, spec.street_max);
                two_way(edges, id(x, y), id(x, y + 1), l, l);
            }
        }
    return RoadNetwork::build(std::move(coords), std::move(edges));
}

RoadNetwork avenue_network(int width, int height, const std::vector<int>& rows, const std::vector<int>& cols,
                           uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::map<std::pair<int, int>, NodeId> ids;
    std::vector<Coord> coords;
    auto node = [&](int x, int y) {
        auto [it, fresh] = ids.try_emplace({x, y}, NodeId(coords.size()));
        if (fresh) coords.push_back({double(x), double(y)});
        return it->second;
    };
    std::vector<Edge> edges;
    for (int y : rows)
        for (int x = 0; x + 1 < width; ++x) {
            double l = draw_len(rng, 1, 4);
            two_way(edges, node(x, y), node(x + 1, y), l, l);
        }
    for (int x : cols)
        for (int y = 0; y + 1 < height; ++y) {
            double l = draw_len(rng, 1, 4);
            two_way(edges, node(x, y), node(x, y + 1), l, l);
        }
    return RoadNetwork::build(std::move(coords), std::move(edges));
}

RoadNetwork random_planar(NodeId n, uint64_t seed, int max_degree, int max_len_factor) {
    std::mt19937_64 rng(seed);
    const int64_t side = std::max<int64_t>(8, int64_t(std::ceil(std::sqrt(double(n)) * 10)));
    std::set<std::pair<int64_t, int64_t>> used;
    std::vector<Coord> coords;
    while (coords.size() < n) {
        int64_t x = int64_t(draw_below(rng, uint64_t(side))), y = int64_t(draw_below(rng, uint64_t(side)));
        if (used.insert({x, y}).second) coords.push_back({double(x), double(y)});
    }

    // bucket grid for neighbour candidates
    const int64_t cell = 10;
    const int64_t cells = side / cell + 1;
    std::vector<std::vector<NodeId>> bucket(size_t(cells * cells));
    for (NodeId v = 0; v < n; ++v)
        bucket[size_t(int64_t(coords[v].y) / cell * cells + int64_t(coords[v].x) / cell)].push_back(v);
    auto dist2 = [&](NodeId a, NodeId b) {
        double dx = coords[a].x - coords[b].x, dy = coords[a].y - coords[b].y;
        return dx * dx + dy * dy;
    };
    struct Cand {
        double d2;
        NodeId a, b;
    };
    std::vector<Cand> cands;
    for (NodeId v = 0; v < n; ++v) {
        int64_t cx = int64_t(coords[v].x) / cell, cy = int64_t(coords[v].y) / cell;
        for (int64_t dy = -2; dy <= 2; ++dy)
            for (int64_t dx = -2; dx <= 2; ++dx) {
                int64_t x = cx + dx, y = cy + dy;
                if (x < 0 || y < 0 || x >= cells || y >= cells) continue;
                for (NodeId u : bucket[size_t(y * cells + x)])
                    if (u > v) cands.push_back({dist2(u, v), v, u});
            }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        return std::tie(a.a, a.b) < std::tie(b.a, b.b);
    });

    std::vector<int> deg(n, 0);
    std::vector<NodeId> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](NodeId x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    std::vector<Edge> edges;
    auto add = [&](NodeId a, NodeId b) {
        double base = std::sqrt(dist2(a, b));
        double f = 1.0 + draw_unit(rng) * double(max_len_factor - 1);
        double l = std::max(1.0, std::round(base * f));
        two_way(edges, a, b, l, l);
        ++deg[a];
        ++deg[b];
        comp[find(a)] = find(b);
    };
    // skip some short candidates so the graph is not a near-lattice
    for (const auto& c : cands) {
        if (deg[c.a] >= max_degree || deg[c.b] >= max_degree) continue;
        if (find(c.a) == find(c.b) && (deg[c.a] >= 3 || deg[c.b] >= 3 || draw_below(rng, 4) == 0)) continue;
        add(c.a, c.b);
    }
    // stitch components: repeatedly join the closest pair across components
    for (;;) {
        std::vector<NodeId> roots;
        for (NodeId v = 0; v < n; ++v)
            if (find(v) == v) roots.push_back(v);
        if (roots.size() <= 1) break;
        NodeId r0 = find(0);
        double best = std::numeric_limits<double>::infinity();
        NodeId ba = 0, bb = 0;
        for (NodeId a = 0; a < n; ++a) {
            if (find(a) != r0 || deg[a] >= max_degree) continue;
            for (NodeId b = 0; b < n; ++b) {
                if (find(b) == r0 || deg[b] >= max_degree) continue;
                double d = dist2(a, b);
                if (d < best) {
                    best = d;
                    ba = a;
                    bb = b;
                }
            }
        }
        if (!std::isfinite(best)) throw InvariantError("random_planar: degree cap blocks stitching");
        add(ba, bb);
    }
    return RoadNetwork::build(std::move(coords), std::move(edges));
}

RoadNetwork tie_heavy(NodeId n, uint64_t seed) {
    RoadNetwork base = random_planar(n, seed, 4, 1);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<Edge> edges;
    for (const auto& e : base.edges())
        if (e.tail < e.head) {
            double l = double(1 + draw_below(rng, 2));
            two_way(edges, e.tail, e.head, l, l);
        }
    return RoadNetwork::build(base.coords(), std::move(edges));
}

RoadNetwork path_network(const std::vector<double>& lengths) {
    std::vector<Coord> coords(lengths.size() + 1);
    std::vector<Edge> edges;
    for (size_t i = 0; i < coords.size(); ++i) coords[i] = {double(i), 0};
    for (size_t i = 0; i < lengths.size(); ++i) two_way(edges, NodeId(i), NodeId(i + 1), lengths[i], lengths[i]);
    return RoadNetwork::build(std::move(coords), std::move(edges));
}

}  // namespace ahr
