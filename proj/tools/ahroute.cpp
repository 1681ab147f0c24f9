#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "ahr/ah_index.hpp"
#include "ahr/baseline_oracle.hpp"
#include "ahr/bench_harness.hpp"
#include "ahr/synthetic.hpp"

using namespace ahr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCorrectness = 1;
constexpr int kExitUsage = 2;

struct Correctness : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Args {
    int threads = 0;
    uint64_t seed = kDefaultSeed;
    std::string config;

    std::string gr, co, in, out, index, fc_index, pairs, synthetic;
    int k = 2;
    long long s = -1, t = -1;
    size_t random = 0;
    bool stats = false, verify = false, no_timing = false, series = false;
    std::vector<int> resolutions;
    std::vector<int> buckets = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    size_t per_bucket = 1000, warmup = 10, lmax_samples = 16, samples = 1000;
};

std::string fmt_length(double d) {
    if (std::isinf(d)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", d);
    return buf;
}

std::string file_magic(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open " + path);
    char m[4] = {0, 0, 0, 0};
    f.read(m, 4);
    return std::string(m, 4);
}

RoadNetwork synthetic_network(const std::string& spec, uint64_t seed) {
    // kind:size, e.g. planar:2000 or grid:100x80
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw ValidationError("synthetic spec must look like planar:N or grid:WxH");
    std::string kind = spec.substr(0, colon), size = spec.substr(colon + 1);
    try {
        if (kind == "planar") return random_planar(NodeId(std::stoul(size)), seed);
        if (kind == "grid") {
            auto x = size.find('x');
            if (x == std::string::npos) throw ValidationError("grid size must be WxH");
            GridSpec g;
            g.width = std::stoi(size.substr(0, x));
            g.height = std::stoi(size.substr(x + 1));
            return manhattan_grid(g, seed);
        }
    } catch (const std::logic_error&) {
        throw ValidationError("bad synthetic size '" + size + "'");
    }
    throw ValidationError("unknown synthetic kind '" + kind + "'");
}

void report_network(const RoadNetwork& net) {
    std::cerr << "n=" << net.n() << " m=" << net.m() << " d_max/d_min=" << net.d_max() / net.d_min()
              << " h=" << compute_h(net) << " max_degree=" << net.max_degree();
    if (net.snapped_nodes() > 0) std::cerr << " snapped=" << net.snapped_nodes();
    if (net.perturbed()) std::cerr << " k=" << net.k() << " tau'=" << net.tau_prime();
    std::cerr << '\n';
}

// Either index kind behind one query interface.
struct LoadedIndex {
    std::string kind;
    std::unique_ptr<AhHierarchy> ah;
    std::unique_ptr<FcHierarchy> fc;
    RoadNetwork base;

    NodeId n() const { return base.n(); }
    PathWeight distance(NodeId s, NodeId t, QueryStats* st) const {
        return ah ? ah->distance(s, t, st) : fc->distance(s, t, st);
    }
};

LoadedIndex load_index(const std::string& path) {
    LoadedIndex li;
    std::string m = file_magic(path);
    if (m == "AHI1") {
        li.kind = "ah";
        li.ah = std::make_unique<AhHierarchy>(load_ah(path));
        li.base = li.ah->base_network();
    } else if (m == "FCH1") {
        li.kind = "fc";
        li.fc = std::make_unique<FcHierarchy>(load_fc(path));
        std::vector<Edge> es;
        for (const auto& e : li.fc->edges)
            if (!e.shortcut) es.push_back({e.tail, e.head, e.w});
        li.base = RoadNetwork::build(li.fc->coords, std::move(es), li.fc->k);
    } else {
        throw ValidationError(path + " is not an AH or FC index");
    }
    return li;
}

RoadNetwork maybe_perturb(const RoadNetwork& net, int k, uint64_t seed) {
    if (k > 0 && !net.perturbed()) return perturb(net, k, seed);
    return net;
}

std::vector<std::pair<NodeId, NodeId>> query_pairs(const Args& a, NodeId n) {
    std::vector<std::pair<NodeId, NodeId>> out;
    auto check = [&](long long v) {
        if (v < 0 || v >= (long long)n) throw ValidationError("node id " + std::to_string(v) + " out of range");
        return NodeId(v);
    };
    if (a.s >= 0 || a.t >= 0) out.push_back({check(a.s), check(a.t)});
    if (!a.pairs.empty()) {
        std::ifstream f(a.pairs);
        if (!f) throw ValidationError("cannot open " + a.pairs);
        std::string line;
        int ln = 0;
        while (std::getline(f, line)) {
            ++ln;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream is(line);
            long long s, t;
            if (!(is >> s >> t)) throw ParseError(a.pairs + ":" + std::to_string(ln) + ": expected 's t'");
            out.push_back({check(s), check(t)});
        }
    }
    if (a.random > 0) {
        std::mt19937_64 rng(a.seed);
        for (size_t i = 0; i < a.random; ++i)
            out.push_back({NodeId(draw_below(rng, n)), NodeId(draw_below(rng, n))});
    }
    if (out.empty()) throw ValidationError("no queries: give --s/--t, --pairs or --random");
    return out;
}

int cmd_convert(const Args& a) {
    RoadNetwork net;
    if (!a.synthetic.empty()) {
        net = synthetic_network(a.synthetic, a.seed);
    } else {
        if (a.gr.empty() || a.co.empty()) throw ValidationError("convert needs --gr and --co (or --synthetic)");
        net = parse_dimacs_files(a.gr, a.co);
    }
    save_snapshot(net, a.out);
    report_network(net);
    return kExitOk;
}

int cmd_perturb(const Args& a) {
    RoadNetwork net = load_snapshot(a.in);
    if (net.perturbed()) throw ValidationError("input is already perturbed");
    RoadNetwork p = perturb(net, a.k, a.seed);
    save_snapshot(p, a.out);
    report_network(p);
    return kExitOk;
}

int cmd_build_fc(const Args& a) {
    auto t0 = std::chrono::steady_clock::now();
    RoadNetwork net = maybe_perturb(load_snapshot(a.in), a.k, a.seed);
    GridHierarchy g = build_grids(net);
    FcHierarchy H = build_fc(net, g);
    save_fc(H, a.out);
    std::map<int, size_t> per;
    for (int l : H.assignment.level) ++per[l];
    std::cerr << "levels";
    for (auto [l, c] : per) std::cerr << ' ' << l << ':' << c;
    std::cerr << "\nedges original=" << H.edges.size() - H.shortcut_count() << " shortcuts=" << H.shortcut_count()
              << "\ntime total=" << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
              << "s\n";
    return kExitOk;
}

int cmd_build_ah(const Args& a) {
    RoadNetwork net = load_snapshot(a.in);
    AhOptions opt;
    opt.k = a.k;
    opt.seed = a.seed;
    AhBuildReport rep;
    AhHierarchy H = build_ah(net, opt, &rep);
    save_ah(H, a.out);
    std::cerr << rep.to_string();
    return kExitOk;
}

int cmd_query(const Args& a, bool with_path) {
    LoadedIndex li = load_index(a.index);
    auto pairs = query_pairs(a, li.n());
    size_t mismatches = 0;
    for (auto [s, t] : pairs) {
        QueryStats st;
        std::vector<NodeId> path;
        PathWeight d;
        uint64_t subs = 0;
        if (with_path) {
            if (!li.ah) throw ValidationError("path needs an AH index");
            auto r = li.ah->shortest_path(s, t, &st);
            d = r.distance;
            path = std::move(r.nodes);
            subs = r.substitutions;
        } else {
            d = li.distance(s, t, &st);
        }
        std::cout << s << ' ' << t << ' ' << fmt_length(d.length);
        if (with_path)
            for (NodeId v : path) std::cout << ' ' << v;
        if (a.stats) std::cout << " settled=" << st.settled << " relaxed=" << st.relaxed;
        std::cout << '\n';
        if (a.verify) {
            SearchResult o = dijkstra(li.base, s, t);
            bool ok = o.distance == d;
            if (ok && with_path && !d.is_infinite()) {
                ok = is_graph_path(li.base, path) && path.front() == s && path.back() == t &&
                     path_weight(li.base, path) == d && (path.size() == 1 ? subs == 0 : subs + 1 <= 2 * (path.size() - 1));
            }
            if (!ok) {
                ++mismatches;
                std::cerr << "mismatch " << s << ' ' << t << ": index=" << to_string(d)
                          << " oracle=" << to_string(o.distance) << '\n';
            }
        }
    }
    if (a.verify) {
        std::cerr << "verified " << pairs.size() << " queries, " << mismatches << " mismatches\n";
        if (mismatches) return kExitCorrectness;
    }
    return kExitOk;
}

int cmd_profile(const Args& a) {
    RoadNetwork net = load_snapshot(a.in);
    ArterialProfile p = arterial_profile(net, a.resolutions);
    std::string csv = profile_csv(p);
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream f(a.out);
        if (!f) throw ValidationError("cannot write " + a.out);
        f << csv;
    }
    for (int r : p.skipped) std::cerr << "skipped r=" << r << " (too many regions)\n";
    std::cerr << "regions examined " << p.regions_examined << '\n';
    return kExitOk;
}

int cmd_bench(const Args& a) {
    LoadedIndex li = load_index(a.index);
    std::unique_ptr<FcHierarchy> fc;
    if (!a.fc_index.empty()) {
        if (file_magic(a.fc_index) != "FCH1") throw ValidationError(a.fc_index + " is not an FC index");
        fc = std::make_unique<FcHierarchy>(load_fc(a.fc_index));
        if (fc->n() != li.n()) throw ValidationError("FC and AH indices cover different networks");
    }
    const RoadNetwork& net = li.base;
    QueryGenOptions qo;
    qo.per_bucket = a.per_bucket;
    qo.seed = a.seed;
    qo.lmax_samples = a.lmax_samples;
    qo.buckets = a.buckets;
    std::vector<std::string> warnings;
    auto sets = generate_query_sets(net, qo, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

    std::vector<BenchMethod> methods;
    methods.push_back({"dijkstra", [&](NodeId s, NodeId t, QueryStats& st) {
                           SearchResult r = dijkstra(net, s, t);
                           st.settled = r.settled;
                           st.relaxed = r.relaxed;
                           return r.distance;
                       }});
    methods.push_back({"bidijkstra", [&](NodeId s, NodeId t, QueryStats& st) {
                           SearchResult r = bidirectional_dijkstra(net, s, t);
                           st.settled = r.settled;
                           st.relaxed = r.relaxed;
                           return r.distance;
                       }});
    if (fc) methods.push_back({"fc", [&](NodeId s, NodeId t, QueryStats& st) { return fc->distance(s, t, &st); }});
    if (li.fc) methods.push_back({"fc", [&](NodeId s, NodeId t, QueryStats& st) { return li.fc->distance(s, t, &st); }});
    if (li.ah) {
        methods.push_back({"ah", [&](NodeId s, NodeId t, QueryStats& st) { return li.ah->distance(s, t, &st); }});
        methods.push_back({"ah-path", [&](NodeId s, NodeId t, QueryStats& st) {
                               return li.ah->shortest_path(s, t, &st).distance;
                           }});
    }
    BenchOptions bo;
    bo.warmup = a.warmup;
    bo.timing = !a.no_timing;
    std::vector<BenchRecord> recs;
    try {
        recs = run_bench(methods, sets, bo);
    } catch (const BenchMismatch& e) {
        throw Correctness(e.what());
    }
    std::string csv = a.series ? bench_series_csv(recs) : bench_csv(recs);
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream f(a.out);
        if (!f) throw ValidationError("cannot write " + a.out);
        f << csv;
    }
    return kExitOk;
}

int cmd_verify(const Args& a) {
    size_t failures = 0;
    auto fail = [&](const std::string& what) {
        ++failures;
        std::cerr << "FAIL " << what << '\n';
    };
    if (!a.in.empty()) {
        RoadNetwork net = load_snapshot(a.in);
        std::stringstream buf;
        write_snapshot(net, buf);
        if (!(read_snapshot(buf) == net)) fail("snapshot round trip");
        if (compute_h(net) > int(std::ceil(std::log2(net.d_max() / net.d_min())))) fail("h bound");
        std::cerr << "network ok n=" << net.n() << '\n';
    }
    if (!a.index.empty()) {
        LoadedIndex li = load_index(a.index);
        const RoadNetwork& net = li.base;
        std::mt19937_64 rng(a.seed);
        size_t bad = 0;
        for (size_t i = 0; i < a.samples && net.n() > 0; ++i) {
            NodeId s = NodeId(draw_below(rng, net.n())), t = NodeId(draw_below(rng, net.n()));
            PathWeight d = li.distance(s, t, nullptr);
            if (d != dijkstra(net, s, t).distance) {
                if (++bad <= 5) fail("distance " + std::to_string(s) + " " + std::to_string(t));
            }
        }
        if (bad > 5) fail(std::to_string(bad) + " distance mismatches in total");
        if (li.ah) {
            size_t bad_unpack = 0;
            for (uint32_t e = 0; e < li.ah->edges.size(); ++e) {
                std::vector<NodeId> p{li.ah->edges[e].tail};
                li.ah->unpack(e, p);
                if (!is_graph_path(net, p) || path_weight(net, p) != li.ah->edges[e].w) ++bad_unpack;
            }
            if (bad_unpack) fail(std::to_string(bad_unpack) + " shortcuts unpack to a different length");
        }
        std::cerr << li.kind << " index checked with " << a.samples << " queries\n";
    }
    if (a.in.empty() && a.index.empty()) throw ValidationError("verify needs --in and/or --index");
    if (failures) return kExitCorrectness;
    std::cerr << "all checks passed\n";
    return kExitOk;
}

struct App {
    CLI::App app{"Arterial-hierarchy route planning: build indices, answer queries, profile, benchmark"};
    Args a;
    std::map<std::string, CLI::App*> subs;

    App() {
        app.require_subcommand(1);
        app.add_option("--threads", a.threads, "worker threads (default: AH_THREADS or all cores)");
        app.add_option("--seed", a.seed, "random seed")->capture_default_str();
        app.add_option("--config", a.config, "key=value file; flags on the command line win");

        auto* c = sub("convert", "DIMACS .gr/.co (or a synthetic network) to a binary snapshot");
        c->add_option("--gr", a.gr, "DIMACS graph file");
        c->add_option("--co", a.co, "DIMACS coordinate file");
        c->add_option("--synthetic", a.synthetic, "planar:N or grid:WxH instead of DIMACS input");
        c->add_option("--out", a.out, "snapshot to write")->required();

        auto* p = sub("perturb", "attach random nuance vectors to every edge");
        p->add_option("--in", a.in, "input snapshot")->required();
        p->add_option("--out", a.out, "output snapshot")->required();
        p->add_option("--k", a.k, "nuance dimension (1..4)")->capture_default_str();

        for (const char* name : {"build-fc", "build-ah"}) {
            auto* b = sub(name, std::string(name) == "build-fc" ? "build the FC index" : "build the AH index");
            b->add_option("--in", a.in, "network snapshot")->required();
            b->add_option("--out", a.out, "index file to write")->required();
            b->add_option("--k", a.k, "perturbation dimension for unperturbed input, 0 disables")
                ->capture_default_str();
        }

        for (const char* name : {"query", "path"}) {
            auto* q = sub(name, std::string(name) == "query" ? "distance queries" : "shortest path queries");
            q->add_option("--index", a.index, "AH or FC index")->required();
            q->add_option("--s", a.s, "source node id");
            q->add_option("--t", a.t, "target node id");
            q->add_option("--pairs", a.pairs, "file with one 's t' pair per line");
            q->add_option("--random", a.random, "also run N seeded random pairs");
            q->add_flag("--stats", a.stats, "append settled/relaxed counters");
            q->add_flag("--verify", a.verify, "cross-check every answer against Dijkstra");
        }

        auto* pr = sub("profile-ad", "arterial-edge counts per region on 2^r x 2^r grids");
        pr->add_option("--in", a.in, "network snapshot")->required();
        pr->add_option("--r", a.resolutions, "resolutions, e.g. --r 3 4 5")->delimiter(',');
        pr->add_option("--out", a.out, "CSV file (default stdout)");

        auto* be = sub("bench", "distance-bucketed query benchmark");
        be->add_option("--index", a.index, "AH (or FC) index")->required();
        be->add_option("--fc-index", a.fc_index, "optional FC index to include");
        be->add_option("--buckets", a.buckets, "bucket indices 1..10")->delimiter(',');
        be->add_option("--per-bucket", a.per_bucket, "queries per bucket")->capture_default_str();
        be->add_option("--warmup", a.warmup, "untimed queries per method and bucket")->capture_default_str();
        be->add_option("--lmax-samples", a.lmax_samples, "random Dijkstra sweeps for l_max")->capture_default_str();
        be->add_option("--out", a.out, "CSV file (default stdout)");
        be->add_flag("--no-timing", a.no_timing, "write 0 for times so output is reproducible");
        be->add_flag("--series", a.series, "one row per bucket, one settled column per method");

        auto* v = sub("verify", "consistency checks on a snapshot and/or index");
        v->add_option("--in", a.in, "network snapshot");
        v->add_option("--index", a.index, "AH or FC index");
        v->add_option("--samples", a.samples, "random queries checked against Dijkstra")->capture_default_str();
    }

    CLI::App* sub(const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        subs[name] = s;
        return s;
    }
    CLI::App* chosen() const {
        for (auto& [name, s] : subs)
            if (s->parsed()) return s;
        return nullptr;
    }
};

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open config " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int ln = 0;
    while (std::getline(f, line)) {
        ++ln;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto eq = line.find('=');
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos) throw ParseError(path + ":" + std::to_string(ln) + ": expected key=value");
        kv.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return kv;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto first = std::make_unique<App>();
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        first->app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return first->app.exit(e) == 0 ? kExitOk : kExitUsage;
    }
    std::unique_ptr<App> final_app = std::move(first);
    if (!final_app->a.config.empty()) {
        // config values fill in only what the command line left unset
        CLI::App* sc = final_app->chosen();
        std::vector<std::string> extra_global, extra_sub;
        for (auto& [key, val] : read_config(final_app->a.config)) {
            std::string flag = "--" + key;
            CLI::Option* so = sc->get_option_no_throw(flag);
            CLI::Option* go = final_app->app.get_option_no_throw(flag);
            CLI::Option* o = so ? so : go;
            if (!o || o->count() > 0) continue;
            auto& dst = so ? extra_sub : extra_global;
            if (o->get_expected_min() == 0) {
                if (val == "true" || val == "1" || val == "yes") dst.push_back(flag);
            } else {
                dst.push_back(flag);
                dst.push_back(val);
            }
        }
        std::vector<std::string> merged = extra_global;
        size_t pos = 0;
        while (pos < args.size() && args[pos] != sc->get_name()) ++pos;
        merged.insert(merged.end(), args.begin(), args.begin() + long(std::min(pos + 1, args.size())));
        merged.insert(merged.end(), extra_sub.begin(), extra_sub.end());
        if (pos + 1 < args.size()) merged.insert(merged.end(), args.begin() + long(pos + 1), args.end());
        auto second = std::make_unique<App>();
        std::vector<std::string> r2(merged.rbegin(), merged.rend());
        try {
            second->app.parse(r2);
        } catch (const CLI::ParseError& e) {
            return second->app.exit(e) == 0 ? kExitOk : kExitUsage;
        }
        final_app = std::move(second);
    }
    Args& a = final_app->a;
    int threads = a.threads > 0 ? a.threads : threads_from_env();
    if (threads > 0) set_threads(threads);
    const std::string cmd = final_app->chosen()->get_name();
    if (cmd == "convert") return cmd_convert(a);
    if (cmd == "perturb") return cmd_perturb(a);
    if (cmd == "build-fc") return cmd_build_fc(a);
    if (cmd == "build-ah") return cmd_build_ah(a);
    if (cmd == "query") return cmd_query(a, false);
    if (cmd == "path") return cmd_query(a, true);
    if (cmd == "profile-ad") return cmd_profile(a);
    if (cmd == "bench") return cmd_bench(a);
    if (cmd == "verify") return cmd_verify(a);
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Correctness& e) {
        std::cerr << "correctness failure: " << e.what() << '\n';
        return kExitCorrectness;
    } catch (const InvariantError& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return kExitCorrectness;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
