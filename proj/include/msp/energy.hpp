#pragma once

#include <span>

#include "msp/model.hpp"
#include "msp/schedule.hpp"

namespace msp {

struct EnergyBreakdown {
  Seconds fly = 0;
  Seconds hover = 0;
  Seconds compute = 0;
  Joules energy = 0;
  Joules capacity = 0;
  bool feasible = true;
};

// E = fly * eps_f + hover * eps_h + compute * eps_c against the budget left
// after the reserve. Throws MspError if a slot leaves [takeoff, landing].
EnergyBreakdown trip_energy(const Trip& trip, std::span<const ComputeSlot> slots, const DroneSpec& spec,
                            double reserve = 0.0);

// Timing summary of an ordered activity sequence flown with the latest
// possible takeoff. Empty sequences have all-zero timing.
struct SequenceTiming {
  Seconds takeoff = 0;
  Seconds landing = 0;
  Seconds fly = 0;
  Seconds hover = 0;
  bool in_time = true;  // takeoff >= 0 and every waypoint reached by its t_start
};

SequenceTiming sequence_timing(const PreparedInstance& inst, std::span<const std::size_t> seq);

inline Joules fly_hover_energy(const SequenceTiming& t, const DroneSpec& spec) {
  return t.fly * spec.fly_power + t.hover * spec.hover_power;
}

inline Joules compute_energy(Seconds compute, const DroneSpec& spec) { return compute * spec.compute_power; }

// True iff the induced trip arrives everywhere in time, lands within the
// mission horizon and its flying + hovering energy fits the budget. Batch
// processing energy is ignored.
bool fly_hover_feasible(std::span<const std::size_t> seq, const PreparedInstance& inst, double reserve = 0.0);

}  // namespace msp
