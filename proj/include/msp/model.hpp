#pragma once

// Problem input types: depot, fleet, activities, batches.
//
// Units throughout: integer seconds from mission epoch 0, meters, joules,
// FLOP. Utilities are exact rationals.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "msp/rational.hpp"

namespace msp {

using Seconds = std::int64_t;
using Joules = std::int64_t;
using ActivityId = std::int64_t;

class MspError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

double distance(const Point3& p, const Point3& q);

struct DepotConfig {
  Point3 location;
  Seconds mission_horizon = 0;
  int max_trips_per_drone = 1;
};

// One spec for the whole (homogeneous) fleet. Powers are J/s.
struct DroneSpec {
  int count = 1;
  double speed = 4.0;
  std::int64_t fly_power = 750;
  std::int64_t hover_power = 700;
  std::int64_t compute_power = 20;
  Joules battery = 1'350'000;
  std::int64_t proc_speed = 1'000'000'000'000;  // FLOPS
};

struct Activity {
  ActivityId id = 0;
  Point3 waypoint;
  Seconds t_start = 0;
  Seconds t_end = 0;
  std::int64_t kappa = 0;  // FLOP for the whole capture
  Seconds deadline = 0;
  Rational gamma_capture;
  Rational gamma_onboard;
  Rational gamma_ontime;

  Rational max_utility() const { return gamma_capture + gamma_onboard + gamma_ontime; }
};

struct BatchSet {
  ActivityId owner = 0;
  Seconds beta = 0;
  int count = 0;                   // q
  Rational per_batch_cost;         // kappa / q, exact
  Seconds per_batch_runtime = 0;   // ceil(kappa / (q * pi))
  std::vector<Seconds> available;  // capture-complete time of batch k at [k-1]

  Seconds available_at(int k) const { return available.at(static_cast<std::size_t>(k - 1)); }
};

struct ProblemInstance {
  DepotConfig depot;
  DroneSpec fleet;
  Seconds beta = 60;
  std::vector<Activity> activities;
};

// ceil(|p - q| / speed)
Seconds flight_time(const Point3& p, const Point3& q, const DroneSpec& spec);

// Throws MspError when t_start >= t_end or beta/pi are not positive.
BatchSet derive_batches(const Activity& a, Seconds beta, std::int64_t proc_speed);

struct InstanceViolation {
  std::string what;
  std::string detail;
};

// Every violated type invariant, in input order. Empty means valid.
std::vector<InstanceViolation> validate_instance(const ProblemInstance& inst);

// Read-only view with the derived data every solver needs: batches, the
// depot/waypoint flight-time matrix and id lookup. Node 0 is the depot,
// node i + 1 is activities[i].
class PreparedInstance {
public:
  explicit PreparedInstance(const ProblemInstance& inst);

  const ProblemInstance& instance() const { return *inst_; }
  const DroneSpec& fleet() const { return inst_->fleet; }
  const DepotConfig& depot() const { return inst_->depot; }
  std::size_t size() const { return inst_->activities.size(); }

  const Activity& activity(std::size_t i) const { return inst_->activities[i]; }
  const BatchSet& batches(std::size_t i) const { return batches_[i]; }

  // index into activities; throws MspError for unknown ids
  std::size_t index_of(ActivityId id) const;
  bool contains(ActivityId id) const { return by_id_.count(id) != 0; }

  Seconds flight_between(std::size_t i, std::size_t j) const { return flight_[(i + 1) * stride_ + (j + 1)]; }
  Seconds flight_from_depot(std::size_t i) const { return flight_[i + 1]; }
  Seconds flight_to_depot(std::size_t i) const { return flight_[(i + 1) * stride_]; }

  // per-batch on-board and on-time utility (gamma / q)
  const Rational& onboard_per_batch(std::size_t i) const { return onboard_per_batch_[i]; }
  const Rational& ontime_per_batch(std::size_t i) const { return ontime_per_batch_[i]; }

private:
  const ProblemInstance* inst_;
  std::vector<BatchSet> batches_;
  std::vector<Seconds> flight_;
  std::size_t stride_;
  std::unordered_map<ActivityId, std::size_t> by_id_;
  std::vector<Rational> onboard_per_batch_;
  std::vector<Rational> ontime_per_batch_;
};

// Budget after withholding a reserve fraction in [0,1): floor((1 - r) * E).
Joules energy_budget(Joules battery, double reserve);

}  // namespace msp
