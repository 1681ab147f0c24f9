#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ahr/fc_index.hpp"

namespace ahr {

struct QuerySet {
    int bucket = 1;  // 1..10
    std::vector<std::pair<NodeId, NodeId>> pairs;
    double lo = 0, hi = 0;  // distance bounds, half-open
};

struct BenchRecord {
    std::string method;
    int bucket = 0;
    uint64_t queries = 0;
    double mean_time_us = 0;
    double mean_settled = 0;
    double mean_relaxed = 0;
};

// Bounds of bucket i: [2^(i-11) l, 2^(i-10) l).
std::pair<double, double> bucket_bounds(int i, double lmax);
int bucket_of(double distance, double lmax);  // 0 if outside every bucket

// Max distance over Dijkstra sweeps from `samples` random sources plus the
// four extreme-coordinate nodes. samples >= n sweeps every node.
double estimate_lmax(const RoadNetwork& net, size_t samples, uint64_t seed);

struct QueryGenOptions {
    size_t per_bucket = 1000;
    uint64_t seed = kDefaultSeed;
    size_t lmax_samples = 16;
    double lmax = 0;  // 0: estimate
    std::vector<int> buckets = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};
std::vector<QuerySet> generate_query_sets(const RoadNetwork& net, const QueryGenOptions& opt,
                                          std::vector<std::string>* warnings = nullptr);

struct BenchMethod {
    std::string name;
    std::function<PathWeight(NodeId, NodeId, QueryStats&)> query;
};

struct BenchOptions {
    size_t warmup = 10;
    bool timing = true;  // false writes 0 times so the CSV is reproducible
};

class BenchMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The first method is the reference; any disagreement throws BenchMismatch.
std::vector<BenchRecord> run_bench(const std::vector<BenchMethod>& methods, const std::vector<QuerySet>& sets,
                                   const BenchOptions& opt = {});

std::string bench_csv(const std::vector<BenchRecord>& records);
// one row per bucket, one settled-count column per method
std::string bench_series_csv(const std::vector<BenchRecord>& records);

}  // namespace ahr
