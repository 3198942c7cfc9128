#include "msp/emulator.hpp"

#include <algorithm>

#include "msp/rng.hpp"

namespace msp {

namespace {

template <typename Fn>
EnergyTrace shaped(const MissionSchedule& sched, Fn&& make) {
  EnergyTrace t;
  for (const DroneMission& d : sched.drones) {
    for (const Trip& trip : d.trips) {
      std::vector<LegFactors> legs(trip.activities.size() + 1);
      for (LegFactors& f : legs) f = make();
      t.trips.push_back(std::move(legs));
    }
  }
  return t;
}

struct Leg {
  Seconds begin = 0;
  Seconds end = 0;
  Seconds fly = 0;
  Seconds hover = 0;
  Seconds compute = 0;
};

Seconds overlap(Seconds a0, Seconds a1, Seconds b0, Seconds b1) {
  return std::max<Seconds>(0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

EnergyTrace EnergyTrace::identity(const MissionSchedule& sched) {
  return shaped(sched, [] { return LegFactors{}; });
}

EnergyTrace EnergyTrace::uniform(const MissionSchedule& sched, double factor) {
  return shaped(sched, [factor] { return LegFactors{factor, factor, factor}; });
}

EnergyTrace EnergyTrace::noise(const MissionSchedule& sched, double lo, double hi, std::uint64_t seed) {
  if (!(lo > 0.0) || hi < lo) throw MspError("noise trace: factors must satisfy 0 < lo <= hi");
  Rng rng(seed);
  return shaped(sched, [&] {
    LegFactors f;
    f.fly = rng.uniform_real(lo, hi);
    f.hover = rng.uniform_real(lo, hi);
    f.compute = rng.uniform_real(lo, hi);
    return f;
  });
}

double EmulationReport::mean_deficit() const {
  double sum = 0.0;
  for (const TripReplay& t : trips) {
    if (!t.complete) sum += t.deficit;
  }
  return incomplete == 0 ? 0.0 : sum / static_cast<double>(incomplete);
}

double EmulationReport::max_deficit() const {
  double best = 0.0;
  for (const TripReplay& t : trips) {
    if (!t.complete) best = std::max(best, t.deficit);
  }
  return best;
}

EmulationReport replay(const MissionSchedule& sched, const PreparedInstance& inst, const EnergyTrace& trace) {
  const DroneSpec& spec = inst.fleet();
  const auto battery = static_cast<double>(spec.battery);
  EmulationReport report;
  report.expected_utility = compute_utility(sched, inst).total;

  std::size_t flat = 0;
  for (const DroneMission& drone : sched.drones) {
    for (const Trip& trip : drone.trips) {
      if (flat >= trace.trips.size()) throw MspError("trace has fewer trips than the schedule");
      const std::vector<LegFactors>& factors = trace.trips[flat];
      if (factors.size() != trip.activities.size() + 1) {
        throw MspError("trace trip " + std::to_string(flat) + " has " + std::to_string(factors.size()) +
                       " legs, schedule needs " + std::to_string(trip.activities.size() + 1));
      }
      for (const LegFactors& f : factors) {
        if (!(f.fly > 0.0) || !(f.hover > 0.0) || !(f.compute > 0.0)) {
          throw MspError("trace trip " + std::to_string(flat) + ": factors must be positive");
        }
      }

      std::vector<const ComputeSlot*> slots;
      for (const ComputeSlot& s : drone.slots) {
        if (s.start >= trip.takeoff && s.end <= trip.landing) slots.push_back(&s);
      }

      const std::size_t stops = trip.activities.size();
      std::vector<Leg> legs(stops + 1);
      Seconds prev = trip.takeoff;
      for (std::size_t i = 0; i < stops; ++i) {
        legs[i] = {prev, trip.departures[i], trip.arrivals[i] - prev, trip.departures[i] - trip.arrivals[i], 0};
        prev = trip.departures[i];
      }
      legs[stops] = {prev, trip.landing, trip.landing - prev, 0, 0};
      for (Leg& leg : legs) {
        for (const ComputeSlot* s : slots) leg.compute += overlap(leg.begin, leg.end, s->start, s->end);
      }

      TripReplay out;
      out.drone = trip.drone;
      out.index = trip.index;
      std::vector<double> cost(legs.size());
      for (std::size_t i = 0; i < legs.size(); ++i) {
        const Leg& leg = legs[i];
        const LegFactors& f = factors[i];
        out.planned += static_cast<double>(leg.fly * spec.fly_power + leg.hover * spec.hover_power +
                                           leg.compute * spec.compute_power);
        cost[i] = static_cast<double>(leg.fly * spec.fly_power) * f.fly +
                  static_cast<double>(leg.hover * spec.hover_power) * f.hover +
                  static_cast<double>(leg.compute * spec.compute_power) * f.compute;
        out.needed += cost[i];
      }

      Seconds cutoff = trip.landing;
      out.stops_done = stops;
      if (out.needed > battery) {
        out.complete = false;
        out.deficit = (out.needed - battery) / battery;
        ++report.incomplete;
        // walk the legs until the next one would leave too little to get home
        const double home_factor = factors[stops].fly;
        double spent = 0.0;
        cutoff = stops > 0 ? trip.departures[stops - 1] : trip.takeoff;
        for (std::size_t i = 0; i < stops; ++i) {
          const std::size_t a = inst.index_of(trip.activities[i]);
          const double home = static_cast<double>(inst.flight_to_depot(a) * spec.fly_power) * home_factor;
          if (spent + cost[i] + home > battery) {
            out.stops_done = i;
            cutoff = legs[i].begin;
            break;
          }
          spent += cost[i];
        }
      }

      for (std::size_t i = 0; i < out.stops_done; ++i) {
        const std::size_t a = inst.index_of(trip.activities[i]);
        report.effective_utility += inst.activity(a).gamma_capture;
        for (const ComputeSlot* s : slots) {
          if (s->activity != trip.activities[i] || s->end > cutoff) continue;
          report.effective_utility += inst.onboard_per_batch(a);
          if (s->end <= inst.activity(a).deadline) report.effective_utility += inst.ontime_per_batch(a);
        }
      }
      report.trips.push_back(out);
      ++flat;
    }
  }
  if (flat != trace.trips.size()) throw MspError("trace has more trips than the schedule");
  return report;
}

}  // namespace msp
