#pragma once

#include <algorithm>

#include "msp/model.hpp"
#include "msp/rng.hpp"
#include "msp/workloads.hpp"

namespace test {

inline msp::Activity activity(msp::ActivityId id, msp::Point3 where, msp::Seconds t, msp::Seconds t_end,
                              msp::Seconds deadline, std::int64_t kappa = 0, std::int64_t g = 5,
                              std::int64_t gb = 3, std::int64_t gbb = 3) {
  msp::Activity a;
  a.id = id;
  a.waypoint = where;
  a.t_start = t;
  a.t_end = t_end;
  a.deadline = deadline;
  a.kappa = kappa;
  a.gamma_capture = msp::Rational(g);
  a.gamma_onboard = msp::Rational(gb);
  a.gamma_ontime = msp::Rational(gbb);
  return a;
}

// Default drone parameters; proc_speed 1 so kappa is runtime in seconds per batch times q.
inline msp::ProblemInstance base_instance(int drones = 1, int trips = 1, msp::Seconds horizon = 14'400) {
  msp::ProblemInstance inst;
  inst.depot.mission_horizon = horizon;
  inst.depot.max_trips_per_drone = trips;
  inst.fleet.count = drones;
  inst.fleet.proc_speed = 1;
  inst.beta = 60;
  return inst;
}

inline std::int64_t total_batches(const msp::ProblemInstance& inst) {
  std::int64_t q = 0;
  for (const msp::Activity& a : inst.activities) q += msp::derive_batches(a, inst.beta, inst.fleet.proc_speed).count;
  return q;
}

// Desk-scale instances for oracle checks: n <= 5, m <= 2, r_max <= 2,
// at most 8 batches, compact geography so activities compete.
inline msp::ProblemInstance tiny_instance(std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    msp::Rng rng(msp::derive_seed(seed, {attempt}));
    msp::ScenarioParams p;
    p.drones = static_cast<int>(rng.uniform_int(1, 2));
    p.load = p.drones == 1 ? static_cast<int>(rng.uniform_int(2, 5)) : 2;
    p.min_duration = 60;
    p.max_duration = 180;
    p.horizon = 3'600;
    p.radius = 2'000.0;
    p.batch_runtime = rng.uniform_int(0, 1) == 0 ? 11 : 98;
    p.fleet.battery = rng.uniform_int(0, 1) == 0 ? 1'350'000 : 500'000;
    p.seed = msp::derive_seed(seed, {attempt, 1});
    msp::ProblemInstance inst = msp::gen_rnd(p);
    inst.depot.max_trips_per_drone = std::min(p.load, 2);
    if (total_batches(inst) <= 8) return inst;
  }
}

}  // namespace test
