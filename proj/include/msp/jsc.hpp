#pragma once

// Job-Scheduling-Centric heuristic: cluster activities in space and time,
// hand drones to clusters proportionally, greedily append each activity to
// the first allocated drone that can still fly it, then place its batches.

#include "msp/clustering.hpp"
#include "msp/model.hpp"
#include "msp/schedule.hpp"

namespace msp {

struct JscParams {
  DbscanParams clustering;
  double reserve = 0.0;  // battery fraction withheld at planning time
};

MissionSchedule jsc_schedule(const ProblemInstance& inst, const JscParams& params = {});

// Energy-bounded batch prefix: the largest p <= q whose compute energy fits
// in `spare` joules.
int affordable_batches(const BatchSet& batches, Joules spare, const DroneSpec& spec);

}  // namespace msp
