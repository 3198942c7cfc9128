#pragma once

// ST-DBSCAN over activities: two points are neighbours when their waypoints
// are within eps_space meters AND their capture starts within eps_time
// seconds. Noise points come back as singleton clusters.

#include <vector>

#include "msp/model.hpp"

namespace msp {

struct DbscanParams {
  double eps_space = 1000.0;  // m
  Seconds eps_time = 1800;    // s
  int min_pts = 2;
};

struct Cluster {
  int id = 0;
  std::vector<std::size_t> members;  // instance indices, ascending (t_start, id)
  Seconds window_lo = 0;             // earliest take-off: min(t - F(depot, waypoint))
  Seconds window_hi = 0;             // latest landing: max(t_end + F(waypoint, depot))
  bool noise = false;
};

// Clusters sorted by window_lo, ties by smallest member id; ids follow that order.
std::vector<Cluster> st_dbscan(const PreparedInstance& inst, const DbscanParams& params);

// Neighbourhoods (each list includes the point itself, ascending index).
// The parallel kernel must agree element-for-element with the serial one.
std::vector<std::vector<std::size_t>> neighborhoods(const PreparedInstance& inst, const DbscanParams& params);
std::vector<std::vector<std::size_t>> neighborhoods_serial(const PreparedInstance& inst, const DbscanParams& params);

struct DroneAllocation {
  std::vector<std::vector<int>> drones;  // per cluster, ascending drone id
  std::vector<int> starved;              // clusters that received no drone
};

// Sequential proportional allocation: cluster i gets
// floor(free_i * |C_i| / remaining) drones (at least one if any is free),
// where free_i counts drones released by clusters with window_hi <= window_lo_i
// and remaining counts activities in clusters i, i+1, ...
DroneAllocation allocate_drones(const std::vector<Cluster>& clusters, int drone_count);

}  // namespace msp
