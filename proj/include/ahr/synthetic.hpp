#pragma once

#include <vector>

#include "ahr/road_graph.hpp"

namespace ahr {

struct GridSpec {
    int width = 10;
    int height = 10;
    int avenue_every = 0;  // every k-th row/column is fast; 0 disables
    int street_min = 5, street_max = 10;
    int avenue_min = 1, avenue_max = 3;
};

// Integer lattice with 4-neighbour two-way streets.
RoadNetwork manhattan_grid(const GridSpec& spec, uint64_t seed);

// Roads only along the given rows and columns, a node at every integer
// point of a road. Any edge crossing a vertical line lies on a row road.
RoadNetwork avenue_network(int width, int height, const std::vector<int>& rows, const std::vector<int>& cols,
                           uint64_t seed);

// Random points joined to near neighbours under a degree cap, then
// stitched into one component. Integer lengths >= 1.
RoadNetwork random_planar(NodeId n, uint64_t seed, int max_degree = 4, int max_len_factor = 3);

// Small graphs whose lengths come from {1,2}, so many local paths tie.
RoadNetwork tie_heavy(NodeId n, uint64_t seed);

RoadNetwork path_network(const std::vector<double>& lengths);

}  // namespace ahr
