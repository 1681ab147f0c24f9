#include "ahr/road_graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "ahr/binary_io.hpp"

namespace ahr {

std::string to_string(const PathWeight& w) {
    if (w.is_infinite()) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << w.length;
    if (w.k > 0) {
        os << " (";
        for (int c = 0; c < w.k; ++c) os << (c ? "," : "") << w.nuance[c];
        os << ")";
    }
    return os.str();
}

namespace {

struct Dsu {
    std::vector<NodeId> p;
    explicit Dsu(NodeId n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    NodeId find(NodeId x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(NodeId a, NodeId b) { p[find(a)] = find(b); }
};

double linf(const Coord& a, const Coord& b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

// Sweep over x with an ordered window on y.
double closest_pair_linf(const std::vector<Coord>& c) {
    const size_t n = c.size();
    if (n < 2) return 0;
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return c[a].x < c[b].x || (c[a].x == c[b].x && c[a].y < c[b].y);
    });
    double best = std::numeric_limits<double>::infinity();
    std::set<std::pair<double, NodeId>> window;
    size_t left = 0;
    for (size_t i = 0; i < n; ++i) {
        const Coord& p = c[order[i]];
        while (left < i && p.x - c[order[left]].x >= best) {
            window.erase({c[order[left]].y, order[left]});
            ++left;
        }
        auto it = window.lower_bound({p.y - best, 0});
        for (; it != window.end() && it->first <= p.y + best; ++it) best = std::min(best, linf(p, c[it->second]));
        window.insert({p.y, order[i]});
    }
    return best;
}

// Moves exact duplicates apart by a tiny multiple of the smallest real spacing.
int snap_coincident(std::vector<Coord>& c) {
    std::vector<NodeId> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        return c[a].x < c[b].x || (c[a].x == c[b].x && (c[a].y < c[b].y || (c[a].y == c[b].y && a < b)));
    });
    bool dup = false;
    for (size_t i = 1; i < order.size(); ++i)
        if (c[order[i]] == c[order[i - 1]]) dup = true;
    if (!dup) return 0;

    std::vector<Coord> distinct;
    for (size_t i = 0; i < order.size(); ++i)
        if (i == 0 || !(c[order[i]] == c[order[i - 1]])) distinct.push_back(c[order[i]]);
    double spacing = distinct.size() >= 2 ? closest_pair_linf(distinct) : 1.0;
    double eps = spacing * 1e-6;
    int snapped = 0;
    for (size_t i = 0; i < order.size();) {
        size_t j = i + 1;
        while (j < order.size() && c[order[j]] == c[order[i]]) ++j;
        for (size_t d = i + 1; d < j; ++d) {
            c[order[d]].x += double(d - i) * eps;
            ++snapped;
        }
        i = j;
    }
    return snapped;
}

}  // namespace

RoadNetwork RoadNetwork::build(std::vector<Coord> coords, std::vector<Edge> edges, int k, uint64_t tau_prime) {
    RoadNetwork net;
    const NodeId n = NodeId(coords.size());
    for (const auto& c : coords)
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) throw ValidationError("non-finite coordinate");
    net.snapped_ = snap_coincident(coords);
    net.coords_ = std::move(coords);
    for (const auto& e : edges) {
        if (e.tail >= n || e.head >= n) throw ValidationError("edge endpoint out of range");
        if (!(e.w.length > 0) || !std::isfinite(e.w.length)) throw ValidationError("non-positive edge length");
    }
    std::erase_if(edges, [](const Edge& e) { return e.tail == e.head; });
    for (auto& e : edges) {
        e.w.k = uint8_t(k);
        if (k == 0) e.w.nuance = {};
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.tail != b.tail) return a.tail < b.tail;
        if (a.head != b.head) return a.head < b.head;
        return a.w < b.w;
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) { return a.tail == b.tail && a.head == b.head; }),
                edges.end());
    net.edges_ = std::move(edges);
    net.k_ = k;
    net.tau_prime_ = tau_prime;

    net.out_off_.assign(n + 1, 0);
    net.in_off_.assign(n + 1, 0);
    for (const auto& e : net.edges_) {
        ++net.out_off_[e.tail + 1];
        ++net.in_off_[e.head + 1];
    }
    for (NodeId v = 0; v < n; ++v) {
        net.max_degree_ = std::max<int>(net.max_degree_, std::max(net.out_off_[v + 1], net.in_off_[v + 1]));
        net.out_off_[v + 1] += net.out_off_[v];
        net.in_off_[v + 1] += net.in_off_[v];
    }
    net.in_ids_.resize(net.edges_.size());
    std::vector<EdgeId> fill(net.in_off_.begin(), net.in_off_.end() - 1);
    for (EdgeId i = 0; i < net.edges_.size(); ++i) net.in_ids_[fill[net.edges_[i].head]++] = i;

    if (n >= 2) {
        double minx = net.coords_[0].x, maxx = minx, miny = net.coords_[0].y, maxy = miny;
        for (const auto& c : net.coords_) {
            minx = std::min(minx, c.x);
            maxx = std::max(maxx, c.x);
            miny = std::min(miny, c.y);
            maxy = std::max(maxy, c.y);
        }
        net.d_max_ = std::max(maxx - minx, maxy - miny);
        net.d_min_ = closest_pair_linf(net.coords_);
        if (!(net.d_min_ > 0)) throw ValidationError("coincident nodes remain after snapping");
    }
    return net;
}

EdgeId RoadNetwork::find_edge(NodeId u, NodeId v) const {
    auto first = edges_.begin() + out_off_[u];
    auto last = edges_.begin() + out_off_[u + 1];
    auto it = std::lower_bound(first, last, v, [](const Edge& e, NodeId h) { return e.head < h; });
    if (it == last || it->head != v) return kNoEdge;
    return EdgeId(it - edges_.begin());
}

bool RoadNetwork::weakly_connected() const {
    if (n() == 0) return true;
    Dsu d(n());
    for (const auto& e : edges_) d.unite(e.tail, e.head);
    NodeId r = d.find(0);
    for (NodeId v = 1; v < n(); ++v)
        if (d.find(v) != r) return false;
    return true;
}

bool RoadNetwork::operator==(const RoadNetwork& o) const {
    if (coords_ != o.coords_ || k_ != o.k_ || tau_prime_ != o.tau_prime_ || edges_.size() != o.edges_.size())
        return false;
    for (size_t i = 0; i < edges_.size(); ++i) {
        const auto &a = edges_[i], &b = o.edges_[i];
        if (a.tail != b.tail || a.head != b.head || a.w != b.w) return false;
    }
    return true;
}

// ---- DIMACS ----

namespace {

struct LineTokens {
    std::vector<std::string_view> tok;
    void split(std::string_view s) {
        tok.clear();
        size_t i = 0;
        while (i < s.size()) {
            while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
            size_t j = i;
            while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
            if (j > i) tok.push_back(s.substr(i, j - i));
            i = j;
        }
    }
};

[[noreturn]] void fail(const char* file, size_t line, const std::string& what) {
    throw ParseError(std::string(file) + ":" + std::to_string(line) + ": " + what);
}

int64_t to_int(std::string_view s, const char* file, size_t line) {
    int64_t v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(file, line, "bad integer '" + std::string(s) + "'");
    return v;
}

double to_real(std::string_view s, const char* file, size_t line) {
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(file, line, "bad number '" + std::string(s) + "'");
    return v;
}

}  // namespace

RoadNetwork parse_dimacs(std::istream& gr, std::istream& co) {
    std::string line;
    LineTokens t;
    int64_t n = -1;
    int64_t declared_m = -1;
    std::vector<Edge> edges;
    size_t ln = 0;
    while (std::getline(gr, line)) {
        ++ln;
        t.split(line);
        if (t.tok.empty() || t.tok[0] == "c") continue;
        if (t.tok[0] == "p") {
            if (t.tok.size() != 4 || t.tok[1] != "sp") fail("gr", ln, "expected 'p sp n m'");
            n = to_int(t.tok[2], "gr", ln);
            declared_m = to_int(t.tok[3], "gr", ln);
            if (n < 0 || declared_m < 0) fail("gr", ln, "negative size");
            edges.reserve(size_t(declared_m));
        } else if (t.tok[0] == "a") {
            if (n < 0) fail("gr", ln, "arc before problem line");
            if (t.tok.size() != 4) fail("gr", ln, "expected 'a u v w'");
            int64_t u = to_int(t.tok[1], "gr", ln), v = to_int(t.tok[2], "gr", ln);
            double w = to_real(t.tok[3], "gr", ln);
            if (u < 1 || u > n || v < 1 || v > n) fail("gr", ln, "node id out of range");
            if (!(w > 0)) throw ValidationError("gr:" + std::to_string(ln) + ": non-positive arc weight");
            Edge e;
            e.tail = NodeId(u - 1);
            e.head = NodeId(v - 1);
            e.w.length = w;
            edges.push_back(e);
        } else {
            fail("gr", ln, "unknown line type '" + std::string(t.tok[0]) + "'");
        }
    }
    if (n < 0) fail("gr", ln, "missing problem line");

    std::vector<Coord> coords;
    std::vector<char> seen;
    int64_t cn = -1;
    ln = 0;
    while (std::getline(co, line)) {
        ++ln;
        t.split(line);
        if (t.tok.empty() || t.tok[0] == "c") continue;
        if (t.tok[0] == "p") {
            // "p aux sp co n"
            if (t.tok.size() != 5) fail("co", ln, "expected 'p aux sp co n'");
            cn = to_int(t.tok[4], "co", ln);
            if (cn != n)
                throw ValidationError("node count mismatch: gr has " + std::to_string(n) + ", co has " +
                                      std::to_string(cn));
            coords.assign(size_t(n), Coord{});
            seen.assign(size_t(n), 0);
        } else if (t.tok[0] == "v") {
            if (cn < 0) fail("co", ln, "coordinate before problem line");
            if (t.tok.size() != 4) fail("co", ln, "expected 'v id x y'");
            int64_t id = to_int(t.tok[1], "co", ln);
            if (id < 1 || id > n) fail("co", ln, "node id out of range");
            coords[size_t(id - 1)] = {to_real(t.tok[2], "co", ln), to_real(t.tok[3], "co", ln)};
            seen[size_t(id - 1)] = 1;
        } else {
            fail("co", ln, "unknown line type '" + std::string(t.tok[0]) + "'");
        }
    }
    if (cn < 0) fail("co", ln, "missing problem line");
    for (int64_t i = 0; i < n; ++i)
        if (!seen[size_t(i)]) throw ValidationError("node " + std::to_string(i + 1) + " has no coordinate");
    return RoadNetwork::build(std::move(coords), std::move(edges));
}

RoadNetwork parse_dimacs_files(const std::string& gr_path, const std::string& co_path) {
    std::ifstream gr(gr_path), co(co_path);
    if (!gr) throw ValidationError("cannot open " + gr_path);
    if (!co) throw ValidationError("cannot open " + co_path);
    return parse_dimacs(gr, co);
}

void write_dimacs(const RoadNetwork& net, std::ostream& gr, std::ostream& co) {
    gr.precision(17);
    co.precision(17);
    gr << "p sp " << net.n() << ' ' << net.m() << '\n';
    for (const auto& e : net.edges()) gr << "a " << e.tail + 1 << ' ' << e.head + 1 << ' ' << e.w.length << '\n';
    co << "p aux sp co " << net.n() << '\n';
    for (NodeId v = 0; v < net.n(); ++v) co << "v " << v + 1 << ' ' << net.coord(v).x << ' ' << net.coord(v).y << '\n';
}

// ---- snapshot ----

void write_snapshot(const RoadNetwork& net, std::ostream& out) {
    BinWriter w(out);
    w.magic("ARNW");
    w.u16(1);
    w.u64(net.n());
    w.u64(net.m());
    w.u32(uint32_t(net.k()));
    w.u64(net.tau_prime());
    for (const auto& c : net.coords()) {
        w.f64(c.x);
        w.f64(c.y);
    }
    for (const auto& e : net.edges()) {
        w.u32(e.tail);
        w.u32(e.head);
        w.f64(e.w.length);
        for (int c = 0; c < net.k(); ++c) w.u64(e.w.nuance[c]);
    }
    if (!w.ok()) throw ValidationError("snapshot write failed");
}

RoadNetwork read_snapshot(std::istream& in) {
    BinReader r(in);
    r.expect_magic("ARNW");
    uint16_t ver = r.u16();
    if (ver != 1) throw ParseError("unsupported ARNW version " + std::to_string(ver));
    uint64_t n = r.count(uint64_t(1) << 32);
    uint64_t m = r.count(uint64_t(1) << 34);
    int k = int(r.u32());
    if (k < 0 || k > kMaxNuance) throw ParseError("bad nuance width");
    uint64_t tp = r.u64();
    std::vector<Coord> coords(n);
    for (auto& c : coords) {
        c.x = r.f64();
        c.y = r.f64();
    }
    std::vector<Edge> edges(m);
    for (auto& e : edges) {
        e.tail = r.u32();
        e.head = r.u32();
        e.w.length = r.f64();
        e.w.k = uint8_t(k);
        for (int c = 0; c < k; ++c) e.w.nuance[c] = r.u64();
    }
    return RoadNetwork::build(std::move(coords), std::move(edges), k, tp);
}

void save_snapshot(const RoadNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    write_snapshot(net, out);
}

RoadNetwork load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    return read_snapshot(in);
}

// ---- perturbation ----

unsigned __int128 perturbation_tau(uint64_t n, uint64_t delta, uint64_t h) {
    using u128 = unsigned __int128;
    const u128 max = ~u128(0);
    u128 pairs = u128(delta) * (delta > 0 ? delta - 1 : 0) / 2;
    u128 factors[] = {32, u128(h), u128(n), u128(n), u128(n), pairs};
    u128 acc = 1;
    for (u128 f : factors) {
        if (f == 0) return 0;
        if (acc > max / f) return max;
        acc *= f;
    }
    return acc;
}

uint64_t perturbation_tau_prime(unsigned __int128 tau, int k) {
    using u128 = unsigned __int128;
    if (k < 1) throw ContractError("k must be >= 1");
    if (tau <= 1) return 1;
    auto pow_ge = [&](u128 t) {
        u128 acc = 1;
        for (int i = 0; i < k; ++i) {
            if (acc > tau / t + 1) return true;
            acc *= t;
        }
        return acc >= tau;
    };
    long double approx = std::pow((long double)tau, 1.0L / k);
    if (approx > 1.8e19L) throw ValidationError("nuance range overflows 64 bits; use a larger k");
    u128 t = u128(std::max<long double>(1, std::floor(approx)));
    while (t > 1 && pow_ge(t - 1)) --t;
    while (!pow_ge(t)) ++t;
    if (t > u128(std::numeric_limits<uint64_t>::max()))
        throw ValidationError("nuance range overflows 64 bits; use a larger k");
    return uint64_t(t);
}

RoadNetwork perturb_with_range(const RoadNetwork& net, int k, uint64_t tau_prime, uint64_t seed) {
    if (k < 1 || k > kMaxNuance) throw ContractError("k must be in [1,4]");
    if (tau_prime < 1) throw ContractError("nuance range must be >= 1");
    // path nuance sums run over at most n edges
    uint64_t n = std::max<uint64_t>(net.n(), 1);
    if (tau_prime - 1 > std::numeric_limits<uint64_t>::max() / n)
        throw ValidationError("nuance sums may overflow 64 bits at k=" + std::to_string(k) + "; use a larger k");
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges = net.edges();
    for (auto& e : edges) {
        e.w.nuance = {};
        e.w.k = uint8_t(k);
        for (int c = 0; c < k; ++c) e.w.nuance[c] = draw_below(rng, tau_prime);
    }
    return RoadNetwork::build(net.coords(), std::move(edges), k, tau_prime);
}

RoadNetwork perturb(const RoadNetwork& net, int k, uint64_t seed) {
    if (k < 1 || k > kMaxNuance) throw ContractError("k must be in [1,4]");
    uint64_t h = net.n() >= 2 ? uint64_t(compute_h(net)) : 1;
    auto tau = perturbation_tau(net.n(), uint64_t(net.max_degree()), h);
    return perturb_with_range(net, k, perturbation_tau_prime(tau, k), seed);
}

int compare_path_weights(const PathWeight& a, const PathWeight& b, const std::vector<NodeId>* seq_a,
                         const std::vector<NodeId>* seq_b) {
    if (!a.is_infinite() && !b.is_infinite() && a.k != b.k) throw ContractError("path weights with different k");
    if (a < b) return -1;
    if (b < a) return 1;
    if (seq_a && seq_b) {
        if (*seq_a < *seq_b) return -1;
        if (*seq_b < *seq_a) return 1;
    }
    return 0;
}

PathWeight path_weight(const RoadNetwork& net, const std::vector<NodeId>& path) {
    PathWeight w;
    w.k = uint8_t(net.k());
    for (size_t i = 1; i < path.size(); ++i) {
        EdgeId e = net.find_edge(path[i - 1], path[i]);
        if (e == kNoEdge) return PathWeight::infinity();
        w += net.edge(e).w;
    }
    return w;
}

bool is_graph_path(const RoadNetwork& net, const std::vector<NodeId>& path) {
    if (path.empty()) return false;
    for (NodeId v : path)
        if (v >= net.n()) return false;
    for (size_t i = 1; i < path.size(); ++i)
        if (net.find_edge(path[i - 1], path[i]) == kNoEdge) return false;
    return true;
}

}  // namespace ahr
