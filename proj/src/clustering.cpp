#include "msp/clustering.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace msp {

namespace {

bool are_neighbors(const PreparedInstance& inst, const DbscanParams& p, std::size_t i, std::size_t j) {
  const Activity& a = inst.activity(i);
  const Activity& b = inst.activity(j);
  const Seconds dt = a.t_start > b.t_start ? a.t_start - b.t_start : b.t_start - a.t_start;
  return dt <= p.eps_time && distance(a.waypoint, b.waypoint) <= p.eps_space;
}

void check_params(const DbscanParams& p) {
  if (!(p.eps_space > 0.0) || p.eps_time <= 0) throw MspError("st_dbscan: eps_space and eps_time must be positive");
  if (p.min_pts < 1) throw MspError("st_dbscan: min_pts must be at least 1");
}

}  // namespace

std::vector<std::vector<std::size_t>> neighborhoods_serial(const PreparedInstance& inst, const DbscanParams& params) {
  const std::size_t n = inst.size();
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || are_neighbors(inst, params, i, j)) out[i].push_back(j);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> neighborhoods(const PreparedInstance& inst, const DbscanParams& params) {
  const auto n = static_cast<std::int64_t>(inst.size());
  std::vector<std::vector<std::size_t>> out(inst.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    auto& row = out[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < n; ++j) {
      if (i == j || are_neighbors(inst, params, static_cast<std::size_t>(i), static_cast<std::size_t>(j))) {
        row.push_back(static_cast<std::size_t>(j));
      }
    }
  }
  return out;
}

std::vector<Cluster> st_dbscan(const PreparedInstance& inst, const DbscanParams& params) {
  check_params(params);
  const std::size_t n = inst.size();
  const auto nbrs = neighborhoods(inst, params);

  constexpr int kUnvisited = -2;
  constexpr int kNoise = -1;
  std::vector<int> label(n, kUnvisited);
  int next = 0;
  const auto min_pts = static_cast<std::size_t>(params.min_pts);

  for (std::size_t p = 0; p < n; ++p) {
    if (label[p] != kUnvisited) continue;
    if (nbrs[p].size() < min_pts) {
      label[p] = kNoise;
      continue;
    }
    const int c = next++;
    label[p] = c;
    std::deque<std::size_t> seeds(nbrs[p].begin(), nbrs[p].end());
    while (!seeds.empty()) {
      const std::size_t q = seeds.front();
      seeds.pop_front();
      if (label[q] == kNoise) label[q] = c;  // border point
      if (label[q] != kUnvisited) continue;
      label[q] = c;
      if (nbrs[q].size() >= min_pts) seeds.insert(seeds.end(), nbrs[q].begin(), nbrs[q].end());
    }
  }

  std::vector<Cluster> clusters(static_cast<std::size_t>(next));
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] >= 0) {
      clusters[static_cast<std::size_t>(label[i])].members.push_back(i);
    } else {
      Cluster single;
      single.members.push_back(i);
      single.noise = true;
      clusters.push_back(std::move(single));
    }
  }

  for (Cluster& c : clusters) {
    std::sort(c.members.begin(), c.members.end(), [&](std::size_t a, std::size_t b) {
      const Activity& x = inst.activity(a);
      const Activity& y = inst.activity(b);
      return x.t_start != y.t_start ? x.t_start < y.t_start : x.id < y.id;
    });
    c.window_lo = std::numeric_limits<Seconds>::max();
    c.window_hi = std::numeric_limits<Seconds>::min();
    for (std::size_t m : c.members) {
      const Activity& a = inst.activity(m);
      c.window_lo = std::min(c.window_lo, a.t_start - inst.flight_from_depot(m));
      c.window_hi = std::max(c.window_hi, a.t_end + inst.flight_to_depot(m));
    }
  }

  auto min_id = [&](const Cluster& c) {
    ActivityId best = std::numeric_limits<ActivityId>::max();
    for (std::size_t m : c.members) best = std::min(best, inst.activity(m).id);
    return best;
  };
  std::sort(clusters.begin(), clusters.end(), [&](const Cluster& a, const Cluster& b) {
    return a.window_lo != b.window_lo ? a.window_lo < b.window_lo : min_id(a) < min_id(b);
  });
  for (std::size_t i = 0; i < clusters.size(); ++i) clusters[i].id = static_cast<int>(i);
  return clusters;
}

DroneAllocation allocate_drones(const std::vector<Cluster>& clusters, int drone_count) {
  DroneAllocation out;
  out.drones.resize(clusters.size());
  std::vector<Seconds> busy_until(static_cast<std::size_t>(std::max(drone_count, 0)),
                                  std::numeric_limits<Seconds>::min());
  std::int64_t remaining = 0;
  for (const Cluster& c : clusters) remaining += static_cast<std::int64_t>(c.members.size());

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const Cluster& c = clusters[i];
    std::vector<int> free;
    for (std::size_t d = 0; d < busy_until.size(); ++d) {
      if (busy_until[d] <= c.window_lo) free.push_back(static_cast<int>(d));
    }
    // longest-idle first so a drone still flying home is picked last
    std::stable_sort(free.begin(), free.end(), [&](int a, int b) {
      return busy_until[static_cast<std::size_t>(a)] < busy_until[static_cast<std::size_t>(b)];
    });
    const auto size = static_cast<std::int64_t>(c.members.size());
    std::int64_t take = remaining > 0 ? static_cast<std::int64_t>(free.size()) * size / remaining : 0;
    if (take == 0 && !free.empty()) take = 1;
    for (std::int64_t k = 0; k < take; ++k) {
      const int d = free[static_cast<std::size_t>(k)];
      out.drones[i].push_back(d);
      busy_until[static_cast<std::size_t>(d)] = c.window_hi;
    }
    if (out.drones[i].empty()) out.starved.push_back(static_cast<int>(i));
    remaining -= size;
  }
  return out;
}

}  // namespace msp
