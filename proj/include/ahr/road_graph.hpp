#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ahr/common.hpp"

namespace ahr {

struct Edge {
    NodeId tail = 0;
    NodeId head = 0;
    PathWeight w;
};

// Immutable directed network with CSR out- and in-adjacency.
// Edges are sorted by (tail, head); out_edges(u) is a contiguous slice.
class RoadNetwork {
public:
    RoadNetwork() = default;

    // Drops self-loops, keeps the minimum of parallel arcs, sorts.
    static RoadNetwork build(std::vector<Coord> coords, std::vector<Edge> edges, int k = 0,
                             uint64_t tau_prime = 0);

    NodeId n() const { return NodeId(coords_.size()); }
    size_t m() const { return edges_.size(); }
    const Coord& coord(NodeId v) const { return coords_[v]; }
    const std::vector<Coord>& coords() const { return coords_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }

    std::span<const Edge> out_edges(NodeId u) const {
        return {edges_.data() + out_off_[u], edges_.data() + out_off_[u + 1]};
    }
    EdgeId out_begin(NodeId u) const { return out_off_[u]; }
    EdgeId out_end(NodeId u) const { return out_off_[u + 1]; }
    std::span<const EdgeId> in_edges(NodeId v) const {
        return {in_ids_.data() + in_off_[v], in_ids_.data() + in_off_[v + 1]};
    }
    EdgeId find_edge(NodeId u, NodeId v) const;

    int max_degree() const { return max_degree_; }
    double d_max() const { return d_max_; }
    double d_min() const { return d_min_; }
    int k() const { return k_; }
    uint64_t tau_prime() const { return tau_prime_; }
    bool perturbed() const { return k_ > 0; }
    int snapped_nodes() const { return snapped_; }
    bool weakly_connected() const;

    bool operator==(const RoadNetwork& o) const;

private:
    std::vector<Coord> coords_;
    std::vector<Edge> edges_;
    std::vector<EdgeId> out_off_;
    std::vector<EdgeId> in_off_;
    std::vector<EdgeId> in_ids_;
    int max_degree_ = 0;
    double d_max_ = 0;
    double d_min_ = 0;
    int k_ = 0;
    uint64_t tau_prime_ = 0;
    int snapped_ = 0;
};

RoadNetwork parse_dimacs(std::istream& gr, std::istream& co);
RoadNetwork parse_dimacs_files(const std::string& gr_path, const std::string& co_path);
void write_dimacs(const RoadNetwork& net, std::ostream& gr, std::ostream& co);

// ARNW snapshot
void write_snapshot(const RoadNetwork& net, std::ostream& out);
RoadNetwork read_snapshot(std::istream& in);
void save_snapshot(const RoadNetwork& net, const std::string& path);
RoadNetwork load_snapshot(const std::string& path);

int compute_h(const RoadNetwork& net);

// tau = 32 h n^3 C(delta,2); saturates at the max of unsigned __int128
unsigned __int128 perturbation_tau(uint64_t n, uint64_t delta, uint64_t h);
// smallest t with t^k >= tau
uint64_t perturbation_tau_prime(unsigned __int128 tau, int k);
RoadNetwork perturb(const RoadNetwork& net, int k, uint64_t seed);
// perturb with an explicit nuance range [0, tau_prime)
RoadNetwork perturb_with_range(const RoadNetwork& net, int k, uint64_t tau_prime, uint64_t seed);

// <0, 0, >0. Node sequences break remaining ties when both are supplied.
int compare_path_weights(const PathWeight& a, const PathWeight& b,
                         const std::vector<NodeId>* seq_a = nullptr,
                         const std::vector<NodeId>* seq_b = nullptr);

PathWeight path_weight(const RoadNetwork& net, const std::vector<NodeId>& path);
bool is_graph_path(const RoadNetwork& net, const std::vector<NodeId>& path);

}  // namespace ahr
