#include "msp/energy.hpp"

namespace msp {

EnergyBreakdown trip_energy(const Trip& trip, std::span<const ComputeSlot> slots, const DroneSpec& spec,
                            double reserve) {
  EnergyBreakdown out;
  if (!trip.empty()) {
    Seconds prev_departure = trip.takeoff;
    for (std::size_t i = 0; i < trip.activities.size(); ++i) {
      out.fly += trip.arrivals[i] - prev_departure;
      out.hover += trip.departures[i] - trip.arrivals[i];
      prev_departure = trip.departures[i];
    }
    out.fly += trip.landing - prev_departure;
  }
  for (const ComputeSlot& s : slots) {
    if (s.start < trip.takeoff || s.end > trip.landing || s.end < s.start) {
      throw MspError("trip_energy: slot for activity " + std::to_string(s.activity) + " batch " +
                     std::to_string(s.batch) + " lies outside its trip interval");
    }
    out.compute += s.length();
  }
  out.energy = out.fly * spec.fly_power + out.hover * spec.hover_power + out.compute * spec.compute_power;
  out.capacity = energy_budget(spec.battery, reserve);
  out.feasible = out.energy <= out.capacity;
  return out;
}

SequenceTiming sequence_timing(const PreparedInstance& inst, std::span<const std::size_t> seq) {
  SequenceTiming t;
  if (seq.empty()) return t;

  const Activity& first = inst.activity(seq.front());
  const Seconds out_leg = inst.flight_from_depot(seq.front());
  t.takeoff = first.t_start - out_leg;
  t.in_time = t.takeoff >= 0;
  t.fly = out_leg;
  t.hover = first.t_end - first.t_start;

  for (std::size_t k = 1; k < seq.size(); ++k) {
    const Activity& prev = inst.activity(seq[k - 1]);
    const Activity& cur = inst.activity(seq[k]);
    const Seconds leg = inst.flight_between(seq[k - 1], seq[k]);
    const Seconds arrival = prev.t_end + leg;
    if (arrival > cur.t_start) t.in_time = false;
    t.fly += leg;
    t.hover += cur.t_end - arrival;
  }
  const Seconds back = inst.flight_to_depot(seq.back());
  t.fly += back;
  t.landing = inst.activity(seq.back()).t_end + back;
  return t;
}

bool fly_hover_feasible(std::span<const std::size_t> seq, const PreparedInstance& inst, double reserve) {
  if (seq.empty()) return true;
  const SequenceTiming t = sequence_timing(inst, seq);
  if (!t.in_time) return false;
  if (t.landing > inst.depot().mission_horizon) return false;
  return fly_hover_energy(t, inst.fleet()) <= energy_budget(inst.fleet().battery, reserve);
}

}  // namespace msp
