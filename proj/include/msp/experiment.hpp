#pragma once

// Grid runner: for every (m, x) cell and repeat, generate an instance, run
// each solver, validate, and aggregate mean/std per cell.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msp/solvers.hpp"
#include "msp/workloads.hpp"

namespace msp {

enum class Workload { kRnd, kDfs };

Workload parse_workload(const std::string& name);  // rnd | dfs
std::string to_string(Workload w);

// One graph serves a whole DFS suite; size scales with the largest cell.
RoadGraph suite_graph(const ScenarioParams& base, int max_activities, std::uint64_t seed, int vertices = 0);

ProblemInstance make_instance(Workload w, const ScenarioParams& params, const RoadGraph* graph);

struct ExperimentConfig {
  Workload suite = Workload::kRnd;
  std::vector<int> drones{5, 10, 20, 50};
  std::vector<int> loads{2, 4, 8};
  int repeats = 10;
  std::uint64_t seed = 1;
  ScenarioParams base;
  SolverOptions solver;
  bool include_opt = true;  // only where the instance fits the caps
  std::optional<RoadGraph> graph;  // DFS; synthesized when absent
  int graph_vertices = 0;          // 0 = automatic
  int threads = 0;                 // 0 = OpenMP default
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single run
};

struct CellStats {
  int drones = 0;
  int load = 0;
  int activities = 0;
  Algorithm algo = Algorithm::kJsc;
  int runs = 0;
  int skipped = 0;  // above the exact solver's caps
  int invalid = 0;  // schedules that failed validation
  Summary utility_per_drone;
  Summary runtime_ms;
  Summary scheduled_pct;
  Summary capture_per_drone;
  Summary onboard_per_drone;
  Summary ontime_per_drone;
};

std::vector<CellStats> run_experiment(const ExperimentConfig& cfg);

std::string experiment_csv(Workload suite, const std::vector<CellStats>& cells);

Summary summarize(const std::vector<double>& xs);

}  // namespace msp
