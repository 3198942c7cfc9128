#pragma once

// File formats: msp-instance/1, msp-schedule/1 and msp-roadgraph/1 JSON,
// the per-activity report CSV and the energy trace CSV.

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "msp/emulator.hpp"
#include "msp/model.hpp"
#include "msp/schedule.hpp"
#include "msp/workloads.hpp"

namespace msp {

using Json = nlohmann::ordered_json;

// Malformed or mistyped input files.
class FormatError : public MspError {
public:
  using MspError::MspError;
};

Json instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const Json& doc);

Json schedule_to_json(const MissionSchedule& sched);
MissionSchedule schedule_from_json(const Json& doc);

Json roadgraph_to_json(const RoadGraph& graph);
RoadGraph roadgraph_from_json(const Json& doc);

// activity_id,u,u_bar,u_bbar,U
std::string report_csv(const UtilityReport& report);

// trip_id,leg_index,fly_factor,hover_factor,compute_factor. Rows that are
// absent keep factor 1; rows outside the schedule's shape are an error.
EnergyTrace trace_from_csv(std::istream& in, const MissionSchedule& sched);
std::string trace_to_csv(const EnergyTrace& trace);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Decimal rendering used in CSV output, e.g. "2.666667" or "3".
std::string decimal(const Rational& r, int digits = 6);

}  // namespace msp
