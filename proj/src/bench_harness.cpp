#include "ahr/bench_harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ahr/baseline_oracle.hpp"

namespace ahr {

std::pair<double, double> bucket_bounds(int i, double lmax) {
    return {std::ldexp(lmax, i - 11), std::ldexp(lmax, i - 10)};
}

int bucket_of(double d, double lmax) {
    for (int i = 1; i <= 10; ++i) {
        auto [lo, hi] = bucket_bounds(i, lmax);
        if (d >= lo && d < hi) return i;
    }
    return 0;
}

double estimate_lmax(const RoadNetwork& net, size_t samples, uint64_t seed) {
    const NodeId n = net.n();
    if (n == 0) return 0;
    std::vector<NodeId> sources;
    if (samples >= n) {
        for (NodeId v = 0; v < n; ++v) sources.push_back(v);
    } else {
        NodeId ext[4] = {0, 0, 0, 0};
        for (NodeId v = 1; v < n; ++v) {
            const Coord& c = net.coord(v);
            if (c.x < net.coord(ext[0]).x) ext[0] = v;
            if (c.x > net.coord(ext[1]).x) ext[1] = v;
            if (c.y < net.coord(ext[2]).y) ext[2] = v;
            if (c.y > net.coord(ext[3]).y) ext[3] = v;
        }
        sources.assign(ext, ext + 4);
        std::mt19937_64 rng(seed);
        for (size_t i = 0; i < samples; ++i) sources.push_back(NodeId(draw_below(rng, n)));
        std::sort(sources.begin(), sources.end());
        sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    }
    double best = 0;
    for (NodeId s : sources) {
        ShortestPathTree t = dijkstra_tree(net, s);
        for (const auto& d : t.dist)
            if (!d.is_infinite()) best = std::max(best, d.length);
    }
    return best;
}

std::vector<QuerySet> generate_query_sets(const RoadNetwork& net, const QueryGenOptions& opt,
                                          std::vector<std::string>* warnings) {
    const NodeId n = net.n();
    const double lmax = opt.lmax > 0 ? opt.lmax : estimate_lmax(net, opt.lmax_samples, opt.seed);
    std::vector<QuerySet> sets;
    for (int b : opt.buckets) {
        if (b < 1 || b > 10) throw ContractError("bucket index must be in 1..10");
        QuerySet q;
        q.bucket = b;
        std::tie(q.lo, q.hi) = bucket_bounds(b, lmax);
        sets.push_back(q);
    }
    if (n < 2 || opt.per_bucket == 0) return sets;
    // several sources per bucket so one sweep does not dominate a set
    const size_t per_source = std::max<size_t>(1, opt.per_bucket / 16);
    const size_t max_sources = std::min<size_t>(n, std::max<size_t>(400, 2 * opt.per_bucket));
    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::vector<NodeId>> cand(sets.size());
    for (size_t tries = 0; tries < max_sources; ++tries) {
        bool all_full = true;
        for (const auto& q : sets) all_full &= q.pairs.size() >= opt.per_bucket;
        if (all_full) break;
        NodeId s = NodeId(draw_below(rng, n));
        ShortestPathTree tree = dijkstra_tree(net, s);
        for (auto& c : cand) c.clear();
        for (NodeId t = 0; t < n; ++t) {
            const auto& d = tree.dist[t];
            if (d.is_infinite()) continue;
            for (size_t i = 0; i < sets.size(); ++i)
                if (d.length >= sets[i].lo && d.length < sets[i].hi) cand[i].push_back(t);
        }
        for (size_t i = 0; i < sets.size(); ++i) {
            auto& q = sets[i];
            auto& c = cand[i];
            size_t take = std::min({per_source, opt.per_bucket - std::min(opt.per_bucket, q.pairs.size()), c.size()});
            for (size_t j = 0; j < take; ++j) {
                std::swap(c[j], c[j + draw_below(rng, c.size() - j)]);
                q.pairs.push_back({s, c[j]});
            }
        }
    }
    if (warnings) {
        for (const auto& q : sets) {
            if (q.pairs.size() < opt.per_bucket)
                warnings->push_back("bucket " + std::to_string(q.bucket) + " has " + std::to_string(q.pairs.size()) +
                                    " of " + std::to_string(opt.per_bucket) + " pairs");
        }
    }
    return sets;
}

std::vector<BenchRecord> run_bench(const std::vector<BenchMethod>& methods, const std::vector<QuerySet>& sets,
                                   const BenchOptions& opt) {
    using Clock = std::chrono::steady_clock;
    std::vector<BenchRecord> out;
    for (const auto& qs : sets) {
        if (qs.pairs.empty()) continue;
        std::vector<PathWeight> ref;
        for (size_t mi = 0; mi < methods.size(); ++mi) {
            const auto& m = methods[mi];
            QueryStats scratch;
            for (size_t i = 0; i < std::min(opt.warmup, qs.pairs.size()); ++i)
                m.query(qs.pairs[i].first, qs.pairs[i].second, scratch);
            BenchRecord r;
            r.method = m.name;
            r.bucket = qs.bucket;
            double total_us = 0, settled = 0, relaxed = 0;
            for (size_t i = 0; i < qs.pairs.size(); ++i) {
                auto [s, t] = qs.pairs[i];
                QueryStats st;
                auto t0 = Clock::now();
                PathWeight d = m.query(s, t, st);
                auto t1 = Clock::now();
                total_us += std::chrono::duration<double, std::micro>(t1 - t0).count();
                settled += double(st.settled);
                relaxed += double(st.relaxed);
                if (mi == 0) {
                    ref.push_back(d);
                } else if (d != ref[i]) {
                    throw BenchMismatch("distance mismatch for pair " + std::to_string(s) + " " + std::to_string(t) +
                                        ": " + methods[0].name + "=" + to_string(ref[i]) + " " + m.name + "=" +
                                        to_string(d));
                }
            }
            const double q = double(qs.pairs.size());
            r.queries = qs.pairs.size();
            r.mean_time_us = opt.timing ? total_us / q : 0.0;
            r.mean_settled = settled / q;
            r.mean_relaxed = relaxed / q;
            out.push_back(r);
        }
    }
    return out;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream os;
    os << "method,bucket,queries,mean_time_us,mean_settled,mean_relaxed\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%s,%d,%llu,%.3f,%.3f,%.3f\n", r.method.c_str(), r.bucket,
                      static_cast<unsigned long long>(r.queries), r.mean_time_us, r.mean_settled, r.mean_relaxed);
        os << buf;
    }
    return os.str();
}

std::string bench_series_csv(const std::vector<BenchRecord>& records) {
    std::vector<std::string> methods;
    std::map<int, std::map<std::string, double>> rows;
    for (const auto& r : records) {
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
        rows[r.bucket][r.method] = r.mean_settled;
    }
    std::ostringstream os;
    os << "bucket";
    for (const auto& m : methods) os << ',' << m;
    os << '\n';
    char buf[64];
    for (const auto& [b, vals] : rows) {
        os << b;
        for (const auto& m : methods) {
            auto it = vals.find(m);
            if (it == vals.end()) {
                os << ',';
            } else {
                std::snprintf(buf, sizeof buf, ",%.3f", it->second);
                os << buf;
            }
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace ahr
