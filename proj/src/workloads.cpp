#include "msp/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "msp/rng.hpp"

namespace msp {

namespace {

void check_params(const ScenarioParams& p) {
  if (p.drones < 1 || p.load < 1) throw MspError("scenario: drones and load must be at least 1");
  if (p.min_duration < 60 || p.max_duration < p.min_duration) {
    throw MspError("scenario: capture duration range must be whole minutes, at least 1");
  }
  if (p.beta <= 0 || p.batch_runtime < 0 || p.deadline_offset < 0 || p.horizon <= 0) {
    throw MspError("scenario: beta, horizon must be positive; runtime and deadline offset non-negative");
  }
  if (p.gamma_lo < 0 || p.gamma_hi < p.gamma_lo) throw MspError("scenario: bad utility range");
  if (!(p.radius > 0.0)) throw MspError("scenario: radius must be positive");
  if (p.slack_lo < 0 || p.slack_hi < p.slack_lo) throw MspError("scenario: bad slack range");
}

ProblemInstance empty_instance(const ScenarioParams& p) {
  ProblemInstance inst;
  inst.depot.location = {0.0, 0.0, 0.0};
  inst.depot.mission_horizon = p.horizon;
  inst.depot.max_trips_per_drone = p.load;
  inst.fleet = p.fleet;
  inst.fleet.count = p.drones;
  inst.beta = p.beta;
  return inst;
}

Point3 point_in_disc(Rng& rng, double radius, double altitude) {
  const auto r = static_cast<std::int64_t>(std::floor(radius));
  for (;;) {
    const std::int64_t x = rng.uniform_int(-r, r);
    const std::int64_t y = rng.uniform_int(-r, r);
    if (static_cast<double>(x * x + y * y) <= radius * radius) {
      return {static_cast<double>(x), static_cast<double>(y), altitude};
    }
  }
}

// Fills the capture window, compute load and utilities, in a fixed draw order.
Activity make_activity(Rng& rng, const ScenarioParams& p, ActivityId id, const Point3& where, Seconds t_start) {
  Activity a;
  a.id = id;
  a.waypoint = where;
  a.t_start = t_start;
  a.t_end = t_start + 60 * rng.uniform_int(p.min_duration / 60, p.max_duration / 60);
  a.deadline = a.t_end + p.deadline_offset;
  const std::int64_t q = (a.t_end - a.t_start + p.beta - 1) / p.beta;
  a.kappa = p.batch_runtime * p.fleet.proc_speed * q;
  a.gamma_capture = Rational(rng.uniform_int(p.gamma_lo, p.gamma_hi));
  a.gamma_onboard = Rational(rng.uniform_int(p.gamma_lo, p.gamma_hi));
  a.gamma_ontime = Rational(rng.uniform_int(p.gamma_lo, p.gamma_hi));
  return a;
}

}  // namespace

ProblemInstance gen_rnd(const ScenarioParams& params) {
  check_params(params);
  ProblemInstance inst = empty_instance(params);
  Rng rng(params.seed);
  const int n = params.activity_count();
  for (int i = 0; i < n; ++i) {
    const Point3 where = point_in_disc(rng, params.radius, params.altitude);
    const Seconds t = rng.uniform_int(1, params.horizon);
    inst.activities.push_back(make_activity(rng, params, i + 1, where, t));
  }
  return inst;
}

std::vector<std::vector<std::size_t>> RoadGraph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(vertices.size());
  for (const RoadEdge& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

bool RoadGraph::connected() const {
  if (vertices.empty()) return true;
  const auto adj = adjacency();
  std::vector<bool> seen(vertices.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == vertices.size();
}

RoadGraph synth_road_graph(double radius, int vertex_count, std::uint64_t seed, double altitude) {
  if (vertex_count < 2) throw MspError("synth_road_graph: need at least 2 vertices");
  if (!(radius > 0.0)) throw MspError("synth_road_graph: radius must be positive");
  RoadGraph g;
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(vertex_count);
  for (std::size_t i = 0; i < n; ++i) g.vertices.push_back(point_in_disc(rng, radius, altitude));

  // about four neighbours per vertex on average
  const double reach = radius * std::sqrt(4.0 / static_cast<double>(vertex_count));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double d = distance(g.vertices[u], g.vertices[v]);
      if (d <= reach) g.edges.push_back({u, v, d});
    }
  }

  // union-find, then bridge the component of vertex 0 to its nearest outsider
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const RoadEdge& e : g.edges) parent[find(e.u)] = find(e.v);
  for (;;) {
    const std::size_t root = find(0);
    double best = std::numeric_limits<double>::infinity();
    std::size_t bu = 0;
    std::size_t bv = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (find(u) != root) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (find(v) == root) continue;
        const double d = distance(g.vertices[u], g.vertices[v]);
        if (d < best) {
          best = d;
          bu = u;
          bv = v;
        }
      }
    }
    if (!std::isfinite(best)) break;
    g.edges.push_back({std::min(bu, bv), std::max(bu, bv), best});
    parent[find(bu)] = find(bv);
  }
  return g;
}

ProblemInstance gen_dfs(const RoadGraph& graph, const ScenarioParams& params) {
  check_params(params);
  if (graph.vertices.empty()) throw MspError("gen_dfs: empty road graph");
  ProblemInstance inst = empty_instance(params);
  Rng rng(params.seed);
  const std::size_t want = static_cast<std::size_t>(params.activity_count());

  // neighbour lists with edge lengths, ascending neighbour index
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(graph.vertices.size());
  for (const RoadEdge& e : graph.edges) {
    adj[e.u].emplace_back(e.v, e.length);
    adj[e.v].emplace_back(e.u, e.length);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());

  std::size_t start = 0;
  for (std::size_t v = 1; v < graph.vertices.size(); ++v) {
    if (distance(graph.vertices[v], inst.depot.location) < distance(graph.vertices[start], inst.depot.location)) {
      start = v;
    }
  }

  int chance = 1;  // selection probability in tenths
  double walked = distance(inst.depot.location, graph.vertices[start]);
  Seconds prev_end = 0;
  auto visit = [&](std::size_t v) {
    if (rng.uniform_int(0, 9) >= chance) {
      chance = std::min(chance + 1, 10);
      return;
    }
    chance = 1;
    const auto travel = static_cast<Seconds>(std::ceil(walked / params.fleet.speed));
    const Seconds t = prev_end + travel + rng.uniform_int(params.slack_lo, params.slack_hi);
    const auto id = static_cast<ActivityId>(inst.activities.size()) + 1;
    inst.activities.push_back(make_activity(rng, params, id, graph.vertices[v], t));
    prev_end = inst.activities.back().t_end;
    walked = 0.0;
  };

  std::vector<bool> seen(graph.vertices.size(), false);
  struct Frame {
    std::size_t vertex;
    std::size_t next;
    double back;  // length of the edge we came in on
  };
  std::vector<Frame> stack{{start, 0, 0.0}};
  seen[start] = true;
  visit(start);
  while (!stack.empty() && inst.activities.size() < want) {
    Frame& top = stack.back();
    const auto& row = adj[top.vertex];
    while (top.next < row.size() && seen[row[top.next].first]) ++top.next;
    if (top.next == row.size()) {
      walked += top.back;
      stack.pop_back();
      continue;
    }
    const auto [v, len] = row[top.next++];
    seen[v] = true;
    walked += len;
    stack.push_back({v, 0, len});
    visit(v);
  }
  if (inst.activities.size() < want) {
    throw MspError("gen_dfs: road graph exhausted after " + std::to_string(inst.activities.size()) + " of " +
                   std::to_string(want) + " activities (short by " +
                   std::to_string(want - inst.activities.size()) + ")");
  }
  return inst;
}

}  // namespace msp
