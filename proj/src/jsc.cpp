#include "msp/jsc.hpp"

#include <algorithm>

#include "msp/energy.hpp"
#include "msp/interval_scheduler.hpp"

namespace msp {

int affordable_batches(const BatchSet& batches, Joules spare, const DroneSpec& spec) {
  if (spare < 0) return 0;
  const Joules per_batch = batches.per_batch_runtime * spec.compute_power;
  if (per_batch == 0) return batches.count;
  return static_cast<int>(std::min<Joules>(batches.count, spare / per_batch));
}

namespace {

struct DroneState {
  std::vector<std::vector<std::size_t>> trips;
  SlotTimeline timeline;
};

}  // namespace

MissionSchedule jsc_schedule(const ProblemInstance& problem, const JscParams& params) {
  const PreparedInstance inst(problem);
  const DroneSpec& spec = inst.fleet();
  const Joules budget = energy_budget(spec.battery, params.reserve);
  const int r_max = inst.depot().max_trips_per_drone;
  const Seconds horizon = inst.depot().mission_horizon;

  const std::vector<Cluster> clusters = st_dbscan(inst, params.clustering);
  const DroneAllocation alloc = allocate_drones(clusters, spec.count);

  std::vector<DroneState> drones;
  drones.reserve(static_cast<std::size_t>(spec.count));
  for (int d = 0; d < spec.count; ++d) drones.push_back({{}, SlotTimeline(d)});

  MissionSchedule out;

  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t a : clusters[c].members) {
      bool assigned = false;
      for (int d : alloc.drones[c]) {
        DroneState& drone = drones[static_cast<std::size_t>(d)];
        int trip = -1;
        SequenceTiming timing;

        if (!drone.trips.empty()) {
          std::vector<std::size_t> seq = drone.trips.back();
          seq.push_back(a);
          timing = sequence_timing(inst, seq);
          const int last = static_cast<int>(drone.trips.size()) - 1;
          const Joules needed =
              fly_hover_energy(timing, spec) + compute_energy(drone.timeline.compute_in_trip(last), spec);
          if (timing.in_time && timing.landing <= horizon && needed <= budget) {
            drone.trips.back().push_back(a);
            drone.timeline.set_landing(last, timing.landing);
            trip = last;
          }
        }
        if (trip < 0 && static_cast<int>(drone.trips.size()) < r_max) {
          const std::vector<std::size_t> seq{a};
          timing = sequence_timing(inst, seq);
          const Seconds free_from =
              drone.trips.empty() ? 0 : drone.timeline.trip(static_cast<int>(drone.trips.size()) - 1).end;
          if (timing.takeoff >= free_from && fly_hover_feasible(seq, inst, params.reserve)) {
            drone.trips.push_back(seq);
            trip = drone.timeline.add_trip(timing.takeoff, timing.landing);
          }
        }
        if (trip < 0) continue;

        const Joules spare =
            budget - fly_hover_energy(timing, spec) - compute_energy(drone.timeline.compute_in_trip(trip), spec);
        drone.timeline.register_owner(
            BatchOwner::from_instance(inst, a, trip, affordable_batches(inst.batches(a), spare, spec)));
        best_assignment(drone.timeline, a);
        assigned = true;
        break;
      }
      if (!assigned) out.dropped.push_back(inst.activity(a).id);
    }
  }

  out.drones.resize(drones.size());
  for (std::size_t d = 0; d < drones.size(); ++d) {
    for (std::size_t r = 0; r < drones[d].trips.size(); ++r) {
      out.drones[d].trips.push_back(make_trip(inst, drones[d].trips[r], static_cast<int>(d), static_cast<int>(r)));
    }
    out.drones[d].slots = drones[d].timeline.slots();
  }
  std::sort(out.dropped.begin(), out.dropped.end());
  return out;
}

}  // namespace msp
