#include "msp/solvers.hpp"

#include <chrono>

#include "msp/jsc.hpp"

namespace msp {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "jsc") return Algorithm::kJsc;
  if (name == "vrc") return Algorithm::kVrc;
  if (name == "opt") return Algorithm::kOpt;
  throw MspError("unknown algorithm '" + name + "' (expected jsc, vrc or opt)");
}

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kJsc: return "jsc";
    case Algorithm::kVrc: return "vrc";
    case Algorithm::kOpt: return "opt";
  }
  return "?";
}

SolveResult run_solver(Algorithm algo, const ProblemInstance& inst, const SolverOptions& options) {
  SolveResult out;
  const auto t0 = std::chrono::steady_clock::now();
  switch (algo) {
    case Algorithm::kJsc:
      out.schedule = jsc_schedule(inst, JscParams{options.clustering, options.reserve});
      break;
    case Algorithm::kVrc:
      out.schedule = vrc_schedule(inst, VrcParams{options.knn_k, options.reserve, options.weights});
      break;
    case Algorithm::kOpt:
      out.schedule = brute_force_opt(inst, options.caps, options.reserve).schedule;
      break;
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

}  // namespace msp
