#include "msp/schedule.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace msp {

std::size_t MissionSchedule::scheduled_count() const {
  std::size_t n = 0;
  for (const DroneMission& d : drones) {
    for (const Trip& t : d.trips) n += t.activities.size();
  }
  return n;
}

TripTimes trip_times(const Trip& trip, const PreparedInstance& inst) {
  TripTimes out;
  if (trip.empty()) return out;
  if (trip.arrivals.size() != trip.activities.size() || trip.departures.size() != trip.activities.size()) {
    throw MspError("trip_times: timing arrays do not match the activity list");
  }
  Seconds prev_departure = trip.takeoff;
  for (std::size_t i = 0; i < trip.activities.size(); ++i) {
    const Activity& a = inst.activity(inst.index_of(trip.activities[i]));
    if (trip.arrivals[i] > a.t_start) {
      throw MspError("trip_times: late arrival at activity " + std::to_string(a.id));
    }
    out.fly += trip.arrivals[i] - prev_departure;
    out.hover += a.t_end - trip.arrivals[i];
    prev_departure = trip.departures[i];
  }
  out.fly += trip.landing - prev_departure;
  return out;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kUnknownActivity: return "unknown activity";
    case ViolationKind::kDuplicateAssignment: return "activity assigned more than once";
    case ViolationKind::kUnaccountedActivity: return "activity neither scheduled nor dropped";
    case ViolationKind::kTooManyDrones: return "more drones than the fleet";
    case ViolationKind::kTooManyTrips: return "too many trips";
    case ViolationKind::kTripIndex: return "trip index mismatch";
    case ViolationKind::kEmptyTrip: return "empty trip";
    case ViolationKind::kTimingShape: return "timing arrays malformed";
    case ViolationKind::kTakeoffBeforeEpoch: return "takeoff before mission epoch";
    case ViolationKind::kRouteTiming: return "route timing inconsistent";
    case ViolationKind::kLateArrival: return "late arrival";
    case ViolationKind::kDepartureMismatch: return "departure before capture end";
    case ViolationKind::kLandingMismatch: return "landing time inconsistent";
    case ViolationKind::kHorizonExceeded: return "landing after mission horizon";
    case ViolationKind::kTripOverlap: return "trips overlap";
    case ViolationKind::kSlotActivityNotOnDrone: return "slot for activity not flown by drone";
    case ViolationKind::kSlotBatchIndex: return "slot batch index out of range";
    case ViolationKind::kSlotDuration: return "slot duration differs from batch runtime";
    case ViolationKind::kCaptureIncomplete: return "capture incomplete";
    case ViolationKind::kBatchOrder: return "batch order";
    case ViolationKind::kBatchNotPrefix: return "batches not a prefix";
    case ViolationKind::kSlotAfterLanding: return "slot ends after landing";
    case ViolationKind::kSlotOverlap: return "slot overlap";
    case ViolationKind::kEnergyExceeded: return "energy exceeds battery";
  }
  return "unknown";
}

namespace {

struct Placement {
  int drone;
  int trip;
};

std::string act(ActivityId id) { return "activity " + std::to_string(id); }

}  // namespace

std::vector<Violation> validate_schedule(const MissionSchedule& sched, const PreparedInstance& inst) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind k, std::string msg) { out.push_back({k, std::move(msg)}); };

  const DroneSpec& spec = inst.fleet();
  const DepotConfig& depot = inst.depot();

  if (sched.drones.size() > static_cast<std::size_t>(spec.count)) {
    add(ViolationKind::kTooManyDrones, std::to_string(sched.drones.size()) + " drones for a fleet of " +
                                           std::to_string(spec.count));
  }

  // single assignment
  std::unordered_map<ActivityId, Placement> placed;
  std::unordered_map<ActivityId, int> seen_count;
  for (std::size_t d = 0; d < sched.drones.size(); ++d) {
    const auto& trips = sched.drones[d].trips;
    for (std::size_t r = 0; r < trips.size(); ++r) {
      for (ActivityId id : trips[r].activities) {
        if (!inst.contains(id)) {
          add(ViolationKind::kUnknownActivity, act(id) + " in drone " + std::to_string(d) + " trip " + std::to_string(r));
          continue;
        }
        if (++seen_count[id] > 1) add(ViolationKind::kDuplicateAssignment, act(id));
        placed.emplace(id, Placement{static_cast<int>(d), static_cast<int>(r)});
      }
    }
  }
  for (ActivityId id : sched.dropped) {
    if (!inst.contains(id)) {
      add(ViolationKind::kUnknownActivity, act(id) + " in dropped list");
      continue;
    }
    if (++seen_count[id] > 1) add(ViolationKind::kDuplicateAssignment, act(id) + " (dropped)");
  }
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const ActivityId id = inst.activity(i).id;
    if (seen_count.count(id) == 0) add(ViolationKind::kUnaccountedActivity, act(id));
  }

  for (std::size_t d = 0; d < sched.drones.size(); ++d) {
    const DroneMission& mission = sched.drones[d];
    const std::string drone_tag = "drone " + std::to_string(d);

    if (mission.trips.size() > static_cast<std::size_t>(depot.max_trips_per_drone)) {
      add(ViolationKind::kTooManyTrips, drone_tag + " flies " + std::to_string(mission.trips.size()) + " trips");
    }

    // route timing
    for (std::size_t r = 0; r < mission.trips.size(); ++r) {
      const Trip& trip = mission.trips[r];
      const std::string trip_tag = drone_tag + " trip " + std::to_string(r);
      if (trip.index != static_cast<int>(r) || trip.drone != static_cast<int>(d)) {
        add(ViolationKind::kTripIndex, trip_tag);
      }
      if (trip.empty()) {
        add(ViolationKind::kEmptyTrip, trip_tag);
        continue;
      }
      if (trip.arrivals.size() != trip.activities.size() || trip.departures.size() != trip.activities.size()) {
        add(ViolationKind::kTimingShape, trip_tag);
        continue;
      }
      if (trip.takeoff < 0) add(ViolationKind::kTakeoffBeforeEpoch, trip_tag);

      bool known = std::all_of(trip.activities.begin(), trip.activities.end(),
                               [&](ActivityId id) { return inst.contains(id); });
      if (!known) continue;

      Seconds prev_departure = trip.takeoff;
      std::size_t prev_node = 0;
      bool at_depot = true;
      for (std::size_t i = 0; i < trip.activities.size(); ++i) {
        const std::size_t idx = inst.index_of(trip.activities[i]);
        const Activity& a = inst.activity(idx);
        const Seconds leg = at_depot ? inst.flight_from_depot(idx) : inst.flight_between(prev_node, idx);
        if (trip.arrivals[i] != prev_departure + leg) {
          add(ViolationKind::kRouteTiming, trip_tag + " arrival at " + act(a.id) + " is " +
                                              std::to_string(trip.arrivals[i]) + ", expected " +
                                              std::to_string(prev_departure + leg));
        }
        if (trip.arrivals[i] > a.t_start) {
          add(ViolationKind::kLateArrival, trip_tag + " reaches " + act(a.id) + " at " +
                                              std::to_string(trip.arrivals[i]) + " after capture start " +
                                              std::to_string(a.t_start));
        }
        if (trip.departures[i] != a.t_end) {
          add(ViolationKind::kDepartureMismatch, trip_tag + " " + act(a.id));
        }
        prev_departure = trip.departures[i];
        prev_node = idx;
        at_depot = false;
      }
      const Seconds expected_landing = prev_departure + inst.flight_to_depot(prev_node);
      if (trip.landing != expected_landing) {
        add(ViolationKind::kLandingMismatch, trip_tag + " lands at " + std::to_string(trip.landing) +
                                                 ", expected " + std::to_string(expected_landing));
      }
      if (trip.landing > depot.mission_horizon) {
        add(ViolationKind::kHorizonExceeded, trip_tag + " lands at " + std::to_string(trip.landing));
      }
      if (r + 1 < mission.trips.size() && trip.landing > mission.trips[r + 1].takeoff) {
        add(ViolationKind::kTripOverlap, trip_tag + " lands after the next takeoff");
      }
    }

    // compute slots
    std::map<ActivityId, std::vector<const ComputeSlot*>> by_activity;
    std::vector<Seconds> compute_per_trip(mission.trips.size(), 0);
    for (const ComputeSlot& s : mission.slots) {
      const std::string slot_tag = drone_tag + " slot " + act(s.activity) + " batch " + std::to_string(s.batch);
      auto where = placed.find(s.activity);
      if (!inst.contains(s.activity) || where == placed.end() || where->second.drone != static_cast<int>(d)) {
        add(ViolationKind::kSlotActivityNotOnDrone, slot_tag);
        continue;
      }
      const std::size_t idx = inst.index_of(s.activity);
      const BatchSet& b = inst.batches(idx);
      if (s.batch < 1 || s.batch > b.count) {
        add(ViolationKind::kSlotBatchIndex, slot_tag);
        continue;
      }
      if (s.end - s.start != b.per_batch_runtime) {
        add(ViolationKind::kSlotDuration, slot_tag);
      }
      if (s.start < b.available_at(s.batch)) {
        add(ViolationKind::kCaptureIncomplete, slot_tag + " starts at " + std::to_string(s.start) +
                                                   " before capture completes at " +
                                                   std::to_string(b.available_at(s.batch)));
      }
      const Trip& trip = mission.trips[static_cast<std::size_t>(where->second.trip)];
      if (s.end > trip.landing) {
        add(ViolationKind::kSlotAfterLanding, slot_tag + " ends at " + std::to_string(s.end) + " after landing " +
                                                  std::to_string(trip.landing));
      }
      compute_per_trip[static_cast<std::size_t>(where->second.trip)] += s.length();
      by_activity[s.activity].push_back(&s);
    }

    for (auto& [id, slots] : by_activity) {
      std::sort(slots.begin(), slots.end(), [](const ComputeSlot* a, const ComputeSlot* b) { return a->batch < b->batch; });
      for (std::size_t k = 0; k < slots.size(); ++k) {
        if (slots[k]->batch != static_cast<int>(k) + 1) {
          add(ViolationKind::kBatchNotPrefix, drone_tag + " " + act(id));
          break;
        }
        if (k > 0 && slots[k - 1]->end > slots[k]->start) {
          add(ViolationKind::kBatchOrder, drone_tag + " " + act(id) + " batch " + std::to_string(k + 1) +
                                              " starts before batch " + std::to_string(k) + " ends");
        }
      }
    }

    // one batch at a time on a drone, across all of its trips
    std::vector<const ComputeSlot*> ordered;
    ordered.reserve(mission.slots.size());
    for (const ComputeSlot& s : mission.slots) {
      if (s.end > s.start) ordered.push_back(&s);
    }
    std::sort(ordered.begin(), ordered.end(), [](const ComputeSlot* a, const ComputeSlot* b) {
      return a->start != b->start ? a->start < b->start : a->end < b->end;
    });
    const ComputeSlot* reach = nullptr;
    for (const ComputeSlot* s : ordered) {
      if (reach != nullptr && reach->end > s->start) {
        add(ViolationKind::kSlotOverlap, drone_tag + " [" + std::to_string(reach->start) + "," +
                                             std::to_string(reach->end) + ") and [" + std::to_string(s->start) +
                                             "," + std::to_string(s->end) + ")");
      }
      if (reach == nullptr || s->end > reach->end) reach = s;
    }

    // energy per trip
    for (std::size_t r = 0; r < mission.trips.size(); ++r) {
      const Trip& trip = mission.trips[r];
      if (trip.empty() || trip.arrivals.size() != trip.activities.size() ||
          trip.departures.size() != trip.activities.size()) {
        continue;
      }
      Seconds fly = 0;
      Seconds hover = 0;
      Seconds prev = trip.takeoff;
      for (std::size_t i = 0; i < trip.activities.size(); ++i) {
        fly += trip.arrivals[i] - prev;
        hover += trip.departures[i] - trip.arrivals[i];
        prev = trip.departures[i];
      }
      fly += trip.landing - prev;
      const Joules energy = fly * spec.fly_power + hover * spec.hover_power + compute_per_trip[r] * spec.compute_power;
      if (energy > spec.battery) {
        add(ViolationKind::kEnergyExceeded, drone_tag + " trip " + std::to_string(r) + " needs " +
                                                std::to_string(energy) + " J of " + std::to_string(spec.battery));
      }
    }
  }
  return out;
}

UtilityReport compute_utility(const MissionSchedule& sched, const PreparedInstance& inst) {
  struct Where {
    int drone;
    Seconds landing;
  };
  std::unordered_map<ActivityId, Where> flown;
  for (std::size_t d = 0; d < sched.drones.size(); ++d) {
    for (const Trip& t : sched.drones[d].trips) {
      for (ActivityId id : t.activities) flown.emplace(id, Where{static_cast<int>(d), t.landing});
    }
  }

  // completed batches per activity, each batch counted once
  std::unordered_map<ActivityId, std::vector<int>> onboard_batches;
  std::unordered_map<ActivityId, std::vector<int>> ontime_batches;
  for (std::size_t d = 0; d < sched.drones.size(); ++d) {
    for (const ComputeSlot& s : sched.drones[d].slots) {
      auto it = flown.find(s.activity);
      if (it == flown.end() || it->second.drone != static_cast<int>(d) || !inst.contains(s.activity)) continue;
      if (s.end > it->second.landing) continue;
      onboard_batches[s.activity].push_back(s.batch);
      if (s.end <= inst.activity(inst.index_of(s.activity)).deadline) ontime_batches[s.activity].push_back(s.batch);
    }
  }
  auto distinct = [](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::int64_t>(std::unique(v.begin(), v.end()) - v.begin());
  };

  UtilityReport rep;
  rep.per_drone.assign(sched.drones.size(), Rational(0));
  rep.activities.reserve(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Activity& a = inst.activity(i);
    ActivityUtility au;
    au.id = a.id;
    auto it = flown.find(a.id);
    if (it != flown.end()) {
      const auto q = static_cast<std::int64_t>(inst.batches(i).count);
      au.drone = it->second.drone;
      au.captured = 1;
      au.onboard = Rational(distinct(onboard_batches[a.id]), q);
      au.ontime = Rational(distinct(ontime_batches[a.id]), q);
      au.total = a.gamma_capture + au.onboard * a.gamma_onboard + au.ontime * a.gamma_ontime;
      rep.capture_total += a.gamma_capture;
      rep.onboard_total += au.onboard * a.gamma_onboard;
      rep.ontime_total += au.ontime * a.gamma_ontime;
      rep.total += au.total;
      rep.per_drone[static_cast<std::size_t>(au.drone)] += au.total;
      ++rep.scheduled;
    }
    rep.activities.push_back(std::move(au));
  }
  return rep;
}

Trip make_trip(const PreparedInstance& inst, const std::vector<std::size_t>& seq, int drone, int index) {
  Trip t;
  t.drone = drone;
  t.index = index;
  if (seq.empty()) return t;
  t.activities.reserve(seq.size());
  t.arrivals.reserve(seq.size());
  t.departures.reserve(seq.size());
  t.takeoff = inst.activity(seq.front()).t_start - inst.flight_from_depot(seq.front());
  Seconds prev_departure = t.takeoff;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const Activity& a = inst.activity(seq[k]);
    const Seconds leg = k == 0 ? inst.flight_from_depot(seq[k]) : inst.flight_between(seq[k - 1], seq[k]);
    t.activities.push_back(a.id);
    t.arrivals.push_back(prev_departure + leg);
    t.departures.push_back(a.t_end);
    prev_departure = a.t_end;
  }
  t.landing = prev_departure + inst.flight_to_depot(seq.back());
  return t;
}

}  // namespace msp
