#pragma once

// Seeded instance generators: RND (uniform in a disc) and DFS (activities
// picked along a depth-first walk of a road graph), plus a synthetic road
// graph for when no map is available.

#include <cstdint>
#include <vector>

#include "msp/model.hpp"

namespace msp {

struct ScenarioParams {
  int drones = 5;  // m
  int load = 4;    // x, activities per drone
  Seconds min_duration = 60;
  Seconds max_duration = 300;  // capture lengths are whole minutes in between
  Seconds beta = 60;
  Seconds batch_runtime = 11;  // rho per batch
  Seconds deadline_offset = 120;
  std::int64_t gamma_lo = 1;
  std::int64_t gamma_hi = 5;
  Seconds horizon = 14'400;
  double radius = 3'500.0;
  double altitude = 50.0;
  Seconds slack_lo = 60;  // DFS spacing slack
  Seconds slack_hi = 300;
  DroneSpec fleet;  // count is overwritten by `drones`
  std::uint64_t seed = 1;

  int activity_count() const { return drones * load; }
};

ProblemInstance gen_rnd(const ScenarioParams& params);

struct RoadEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double length = 0.0;
};

struct RoadGraph {
  std::vector<Point3> vertices;
  std::vector<RoadEdge> edges;

  // neighbour lists in ascending vertex index
  std::vector<std::vector<std::size_t>> adjacency() const;
  bool connected() const;
};

// Random geometric graph in the disc, joined into one component by
// nearest-pair edges between components.
RoadGraph synth_road_graph(double radius, int vertex_count, std::uint64_t seed, double altitude = 50.0);

// Throws MspError if the walk runs out of vertices before n picks.
ProblemInstance gen_dfs(const RoadGraph& graph, const ScenarioParams& params);

}  // namespace msp
