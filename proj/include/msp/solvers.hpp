#pragma once

#include <string>

#include "msp/clustering.hpp"
#include "msp/exact.hpp"
#include "msp/vrc.hpp"

namespace msp {

enum class Algorithm { kJsc, kVrc, kOpt };

Algorithm parse_algorithm(const std::string& name);  // jsc | vrc | opt
std::string to_string(Algorithm algo);

struct SolverOptions {
  double reserve = 0.0;
  DbscanParams clustering;
  int knn_k = 3;
  ScoreWeights weights;
  BruteForceConfig caps;
};

struct SolveResult {
  MissionSchedule schedule;
  double runtime_ms = 0.0;  // solver call only
};

SolveResult run_solver(Algorithm algo, const ProblemInstance& inst, const SolverOptions& options = {});

}  // namespace msp
