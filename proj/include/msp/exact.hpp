#pragma once

// Brute-force optimal solver for desk-scale instances. Used as the oracle
// the heuristics are checked against.

#include <cstdint>
#include <string>

#include "msp/model.hpp"
#include "msp/schedule.hpp"

namespace msp {

struct BruteForceConfig {
  int max_activities = 6;
  int max_drones = 2;
  int max_trips = 2;
  int max_batches = 8;  // summed over all activities

  // "n,m,r,b", e.g. "6,2,2,8"
  static BruteForceConfig parse(const std::string& text);
  std::string str() const;
};

// Thrown when an instance is above the configured caps.
class CapsExceeded : public MspError {
public:
  using MspError::MspError;
};

void check_caps(const ProblemInstance& inst, const BruteForceConfig& cfg);

struct OptResult {
  MissionSchedule schedule;
  Rational utility;
  std::uint64_t trips_evaluated = 0;  // feasible activity subsets
  std::uint64_t batch_orders = 0;     // batch sequences explored
};

// Exhaustive search over drone/trip assignments and batch orders. Ties are
// broken towards the lexicographically smallest labelling (activity 0 first,
// label 0 = dropped, label d + 1 = drone d). Throws CapsExceeded.
OptResult brute_force_opt(const ProblemInstance& inst, const BruteForceConfig& cfg = {}, double reserve = 0.0);

// Single-threaded reference; must return the identical schedule.
OptResult brute_force_opt_serial(const ProblemInstance& inst, const BruteForceConfig& cfg = {},
                                 double reserve = 0.0);

}  // namespace msp
