#include "msp/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "msp/rng.hpp"

namespace msp {

Workload parse_workload(const std::string& name) {
  if (name == "rnd") return Workload::kRnd;
  if (name == "dfs") return Workload::kDfs;
  throw MspError("unknown workload '" + name + "' (expected rnd or dfs)");
}

std::string to_string(Workload w) { return w == Workload::kRnd ? "rnd" : "dfs"; }

RoadGraph suite_graph(const ScenarioParams& base, int max_activities, std::uint64_t seed, int vertices) {
  // a pick every four or so vertices, with room to spare
  if (vertices <= 0) vertices = std::max(400, 6 * max_activities);
  return synth_road_graph(base.radius, vertices, derive_seed(seed, {0x67726170ULL}), base.altitude);
}

ProblemInstance make_instance(Workload w, const ScenarioParams& params, const RoadGraph* graph) {
  if (w == Workload::kRnd) return gen_rnd(params);
  if (graph == nullptr) throw MspError("dfs workload needs a road graph");
  return gen_dfs(*graph, params);
}

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return s;
}

namespace {

constexpr Algorithm kAlgos[] = {Algorithm::kJsc, Algorithm::kVrc, Algorithm::kOpt};

struct RunMetrics {
  bool ran = false;
  bool skipped = false;
  bool valid = true;
  double utility_per_drone = 0.0;
  double runtime_ms = 0.0;
  double scheduled_pct = 0.0;
  double capture = 0.0;
  double onboard = 0.0;
  double ontime = 0.0;
};

}  // namespace

std::vector<CellStats> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.repeats < 1) throw MspError("experiment: repeats must be at least 1");
  std::vector<std::pair<int, int>> cells;
  int largest = 0;
  for (int m : cfg.drones) {
    for (int x : cfg.loads) {
      cells.emplace_back(m, x);
      largest = std::max(largest, m * x);
    }
  }

  std::optional<RoadGraph> graph = cfg.graph;
  if (cfg.suite == Workload::kDfs && !graph) graph = suite_graph(cfg.base, largest, cfg.seed, cfg.graph_vertices);

  const std::size_t n_algos = std::size(kAlgos);
  const auto tasks = static_cast<std::int64_t>(cells.size()) * cfg.repeats;
  std::vector<RunMetrics> results(static_cast<std::size_t>(tasks) * n_algos);
  std::vector<std::string> errors(static_cast<std::size_t>(tasks));
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t task = 0; task < tasks; ++task) {
    const auto ci = static_cast<std::size_t>(task / cfg.repeats);
    const auto rep = static_cast<std::uint64_t>(task % cfg.repeats);
    try {
      ScenarioParams p = cfg.base;
      p.drones = cells[ci].first;
      p.load = cells[ci].second;
      p.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(ci), rep});
      const ProblemInstance inst = make_instance(cfg.suite, p, graph ? &*graph : nullptr);
      const PreparedInstance prepared(inst);
      for (std::size_t a = 0; a < n_algos; ++a) {
        RunMetrics& r = results[static_cast<std::size_t>(task) * n_algos + a];
        if (kAlgos[a] == Algorithm::kOpt) {
          if (!cfg.include_opt) continue;
          try {
            check_caps(inst, cfg.solver.caps);
          } catch (const CapsExceeded&) {
            r.skipped = true;
            continue;
          }
        }
        const SolveResult solved = run_solver(kAlgos[a], inst, cfg.solver);
        const UtilityReport rep_u = compute_utility(solved.schedule, prepared);
        const double m = p.drones;
        r.ran = true;
        r.valid = validate_schedule(solved.schedule, prepared).empty();
        r.utility_per_drone = rep_u.total.to_double() / m;
        r.runtime_ms = solved.runtime_ms;
        r.scheduled_pct = 100.0 * rep_u.scheduled_fraction();
        r.capture = rep_u.capture_total.to_double() / m;
        r.onboard = rep_u.onboard_total.to_double() / m;
        r.ontime = rep_u.ontime_total.to_double() / m;
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(task)] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw MspError("experiment: " + e);
  }

  std::vector<CellStats> out;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    for (std::size_t a = 0; a < n_algos; ++a) {
      CellStats s;
      s.drones = cells[ci].first;
      s.load = cells[ci].second;
      s.activities = s.drones * s.load;
      s.algo = kAlgos[a];
      std::vector<double> util, runtime, pct, cap, onb, ont;
      for (int rep = 0; rep < cfg.repeats; ++rep) {
        const RunMetrics& r = results[(ci * static_cast<std::size_t>(cfg.repeats) + static_cast<std::size_t>(rep)) *
                                          n_algos + a];
        if (r.skipped) ++s.skipped;
        if (!r.ran) continue;
        ++s.runs;
        if (!r.valid) ++s.invalid;
        util.push_back(r.utility_per_drone);
        runtime.push_back(r.runtime_ms);
        pct.push_back(r.scheduled_pct);
        cap.push_back(r.capture);
        onb.push_back(r.onboard);
        ont.push_back(r.ontime);
      }
      if (s.runs == 0 && s.skipped == 0) continue;  // opt disabled
      s.utility_per_drone = summarize(util);
      s.runtime_ms = summarize(runtime);
      s.scheduled_pct = summarize(pct);
      s.capture_per_drone = summarize(cap);
      s.onboard_per_drone = summarize(onb);
      s.ontime_per_drone = summarize(ont);
      out.push_back(s);
    }
  }
  return out;
}

std::string experiment_csv(Workload suite, const std::vector<CellStats>& cells) {
  std::ostringstream out;
  out << "suite,m,x,n,algo,runs,skipped,invalid,"
         "utility_per_drone_mean,utility_per_drone_std,runtime_ms_mean,runtime_ms_std,"
         "scheduled_pct_mean,scheduled_pct_std,capture_per_drone_mean,capture_per_drone_std,"
         "onboard_per_drone_mean,onboard_per_drone_std,ontime_per_drone_mean,ontime_per_drone_std\n";
  out << std::fixed << std::setprecision(6);
  for (const CellStats& c : cells) {
    out << to_string(suite) << ',' << c.drones << ',' << c.load << ',' << c.activities << ',' << to_string(c.algo)
        << ',' << c.runs << ',' << c.skipped << ',' << c.invalid;
    for (const Summary* s : {&c.utility_per_drone, &c.runtime_ms, &c.scheduled_pct, &c.capture_per_drone,
                             &c.onboard_per_drone, &c.ontime_per_drone}) {
      out << ',' << s->mean << ',' << s->std;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace msp
