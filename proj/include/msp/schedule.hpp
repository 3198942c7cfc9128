#pragma once

// Solver output: trips, compute slots, dropped activities, plus the
// validator and utility accounting that every solver is measured against.

#include <string>
#include <vector>

#include "msp/model.hpp"

namespace msp {

// One depot-to-depot flight. departures[i] is always t_end of activity i.
struct Trip {
  int drone = 0;
  int index = 0;  // 0-based position in the drone's trip list
  std::vector<ActivityId> activities;
  std::vector<Seconds> arrivals;
  std::vector<Seconds> departures;
  Seconds takeoff = 0;
  Seconds landing = 0;

  bool empty() const { return activities.empty(); }
};

// Half-open [start, end) execution of batch `batch` (1-based) of `activity`.
struct ComputeSlot {
  ActivityId activity = 0;
  int batch = 1;
  Seconds start = 0;
  Seconds end = 0;

  Seconds length() const { return end - start; }
  friend bool operator==(const ComputeSlot&, const ComputeSlot&) = default;
};

struct DroneMission {
  std::vector<Trip> trips;
  std::vector<ComputeSlot> slots;  // bound to the drone, sorted by start
};

struct MissionSchedule {
  std::vector<DroneMission> drones;
  std::vector<ActivityId> dropped;

  std::size_t scheduled_count() const;
};

struct TripTimes {
  Seconds fly = 0;
  Seconds hover = 0;
};

// Flying time sums every leg including both depot legs; hover sums
// early-arrival wait plus capture, i.e. sum(t_end - arrival). Throws
// MspError naming the activity when a waypoint is reached after its t_start.
TripTimes trip_times(const Trip& trip, const PreparedInstance& inst);

enum class ViolationKind {
  kUnknownActivity,
  kDuplicateAssignment,
  kUnaccountedActivity,
  kTooManyDrones,
  kTooManyTrips,
  kTripIndex,
  kEmptyTrip,
  kTimingShape,
  kTakeoffBeforeEpoch,
  kRouteTiming,
  kLateArrival,
  kDepartureMismatch,
  kLandingMismatch,
  kHorizonExceeded,
  kTripOverlap,
  kSlotActivityNotOnDrone,
  kSlotBatchIndex,
  kSlotDuration,
  kCaptureIncomplete,
  kBatchOrder,
  kBatchNotPrefix,
  kSlotAfterLanding,
  kSlotOverlap,
  kEnergyExceeded,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

// Strict integer check of every schedule constraint; returns all violations.
std::vector<Violation> validate_schedule(const MissionSchedule& sched, const PreparedInstance& inst);

struct ActivityUtility {
  ActivityId id = 0;
  int drone = -1;          // -1 when dropped
  int captured = 0;        // u
  Rational onboard;        // u-bar, fraction of batches completed before landing
  Rational ontime;         // u-double-bar, fraction completed by the deadline
  Rational total;          // U
};

struct UtilityReport {
  std::vector<ActivityUtility> activities;  // instance order
  Rational capture_total;
  Rational onboard_total;
  Rational ontime_total;
  Rational total;
  std::vector<Rational> per_drone;
  std::size_t scheduled = 0;

  double scheduled_fraction() const {
    return activities.empty() ? 0.0 : static_cast<double>(scheduled) / static_cast<double>(activities.size());
  }
};

UtilityReport compute_utility(const MissionSchedule& sched, const PreparedInstance& inst);

// Builds a trip for an ordered activity sequence with the latest possible
// takeoff (arrival at the first waypoint exactly at its t_start).
Trip make_trip(const PreparedInstance& inst, const std::vector<std::size_t>& seq, int drone, int index);

}  // namespace msp
