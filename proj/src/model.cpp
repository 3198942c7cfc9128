#include "msp/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace msp {

double distance(const Point3& p, const Point3& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  const double dz = p.z - q.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Seconds flight_time(const Point3& p, const Point3& q, const DroneSpec& spec) {
  if (!(spec.speed > 0.0)) throw MspError("flight_time: speed must be positive");
  return static_cast<Seconds>(std::ceil(distance(p, q) / spec.speed));
}

BatchSet derive_batches(const Activity& a, Seconds beta, std::int64_t proc_speed) {
  if (beta <= 0) throw MspError("derive_batches: beta must be positive");
  if (proc_speed <= 0) throw MspError("derive_batches: processing speed must be positive");
  if (a.t_start >= a.t_end) {
    throw MspError("derive_batches: activity " + std::to_string(a.id) + " has an empty capture window");
  }
  if (a.kappa < 0) throw MspError("derive_batches: negative compute cost");

  const Seconds window = a.t_end - a.t_start;
  BatchSet b;
  b.owner = a.id;
  b.beta = beta;
  b.count = static_cast<int>((window + beta - 1) / beta);
  b.per_batch_cost = Rational(a.kappa, b.count);

  const __int128 denom = static_cast<__int128>(b.count) * proc_speed;
  b.per_batch_runtime = static_cast<Seconds>((static_cast<__int128>(a.kappa) + denom - 1) / denom);

  b.available.reserve(static_cast<std::size_t>(b.count));
  for (int k = 1; k <= b.count; ++k) {
    b.available.push_back(std::min(a.t_start + k * beta, a.t_end));
  }
  return b;
}

std::vector<InstanceViolation> validate_instance(const ProblemInstance& inst) {
  std::vector<InstanceViolation> out;
  auto add = [&](std::string what, std::string detail) { out.push_back({std::move(what), std::move(detail)}); };

  if (inst.depot.mission_horizon <= 0) add("non-positive mission horizon", "");
  if (inst.depot.max_trips_per_drone < 1) add("max trips per drone below 1", "");
  if (inst.beta <= 0) add("non-positive batch duration", "");

  const DroneSpec& f = inst.fleet;
  if (f.count <= 0) add("non-positive drone count", "");
  if (!(f.speed > 0.0)) add("non-positive speed", "");
  if (f.fly_power <= 0) add("non-positive fly power", "");
  if (f.hover_power <= 0) add("non-positive hover power", "");
  if (f.compute_power <= 0) add("non-positive compute power", "");
  if (f.battery <= 0) add("non-positive battery capacity", "");
  if (f.proc_speed <= 0) add("non-positive processing speed", "");

  std::unordered_set<ActivityId> seen;
  for (const Activity& a : inst.activities) {
    const std::string id = "activity " + std::to_string(a.id);
    if (!seen.insert(a.id).second) add("duplicate activity id", id);
    if (a.t_end <= a.t_start) add("empty capture window", id);
    if (a.deadline < a.t_end) add("deadline precedes capture end", id);
    if (a.t_start < 0) add("capture starts before mission epoch", id);
    if (a.kappa < 0) add("negative compute cost", id);
    if (a.gamma_capture < 0 || a.gamma_onboard < 0 || a.gamma_ontime < 0) add("negative utility", id);
  }
  return out;
}

PreparedInstance::PreparedInstance(const ProblemInstance& inst) : inst_(&inst), stride_(inst.activities.size() + 1) {
  const auto n = inst.activities.size();
  batches_.reserve(n);
  onboard_per_batch_.reserve(n);
  ontime_per_batch_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Activity& a = inst.activities[i];
    if (!by_id_.emplace(a.id, i).second) throw MspError("duplicate activity id " + std::to_string(a.id));
    batches_.push_back(derive_batches(a, inst.beta, inst.fleet.proc_speed));
    const int q = batches_.back().count;
    onboard_per_batch_.push_back(a.gamma_onboard / Rational(q));
    ontime_per_batch_.push_back(a.gamma_ontime / Rational(q));
  }

  flight_.assign(stride_ * stride_, 0);
  auto point = [&](std::size_t node) -> const Point3& {
    return node == 0 ? inst.depot.location : inst.activities[node - 1].waypoint;
  };
  for (std::size_t i = 0; i < stride_; ++i) {
    for (std::size_t j = i + 1; j < stride_; ++j) {
      const Seconds f = flight_time(point(i), point(j), inst.fleet);
      flight_[i * stride_ + j] = f;
      flight_[j * stride_ + i] = f;
    }
  }
}

std::size_t PreparedInstance::index_of(ActivityId id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw MspError("unknown activity id " + std::to_string(id));
  return it->second;
}

Joules energy_budget(Joules battery, double reserve) {
  if (reserve < 0.0 || reserve >= 1.0) throw MspError("reserve must lie in [0, 1)");
  if (reserve == 0.0) return battery;
  // reserve is read to parts per million so 0.1 of 1350000 lands on 1215000 exactly
  const auto ppm = static_cast<__int128>(std::llround(reserve * 1e6));
  return static_cast<Joules>(static_cast<__int128>(battery) * (1'000'000 - ppm) / 1'000'000);
}

}  // namespace msp
