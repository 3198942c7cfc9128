#pragma once

// Replays a schedule with perturbed energy use to see which trips would run
// out of battery in the field.
//
// Trip legs: leg i < stops flies to stop i and covers the time up to the
// departure from it; the last leg flies home. Trips are numbered drone-major
// (all trips of drone 0, then drone 1, ...).

#include <cstdint>
#include <vector>

#include "msp/model.hpp"
#include "msp/schedule.hpp"

namespace msp {

struct LegFactors {
  double fly = 1.0;
  double hover = 1.0;
  double compute = 1.0;
};

struct EnergyTrace {
  std::vector<std::vector<LegFactors>> trips;

  static EnergyTrace identity(const MissionSchedule& sched);
  static EnergyTrace uniform(const MissionSchedule& sched, double factor);
  // every factor of every leg drawn independently from U[lo, hi)
  static EnergyTrace noise(const MissionSchedule& sched, double lo, double hi, std::uint64_t seed);
};

struct TripReplay {
  int drone = 0;
  int index = 0;
  double planned = 0.0;     // J, nominal
  double needed = 0.0;      // J, perturbed, whole trip
  bool complete = true;
  double deficit = 0.0;     // (needed - E) / E for incomplete trips
  std::size_t stops_done = 0;
};

struct EmulationReport {
  Rational expected_utility;
  Rational effective_utility;
  std::vector<TripReplay> trips;
  std::size_t incomplete = 0;

  double incomplete_rate() const {
    return trips.empty() ? 0.0 : static_cast<double>(incomplete) / static_cast<double>(trips.size());
  }
  double mean_deficit() const;
  double max_deficit() const;
};

// Before each leg the drone checks that the energy spent so far, plus the
// leg, plus the flight home from the leg's end still fits the battery; if
// not it heads home from where it is. Captures finished before that point
// and batches that completed by then keep their utility. Throws MspError if
// the trace does not match the schedule's trip and leg counts.
EmulationReport replay(const MissionSchedule& sched, const PreparedInstance& inst, const EnergyTrace& trace);

}  // namespace msp
