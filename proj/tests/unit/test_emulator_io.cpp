#include <sstream>

#include "doctest.h"
#include "msp/emulator.hpp"
#include "msp/io.hpp"
#include "msp/jsc.hpp"
#include "msp/vrc.hpp"
#include "support.hpp"

using namespace msp;

namespace {

ProblemInstance busy_instance(std::uint64_t seed) {
  ScenarioParams p;
  p.drones = 3;
  p.load = 6;
  p.seed = seed;
  return gen_rnd(p);
}

}  // namespace

TEST_CASE("identity trace reproduces the planned utility") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ProblemInstance inst = busy_instance(seed);
    const PreparedInstance p(inst);
    for (const MissionSchedule& s : {jsc_schedule(inst), vrc_schedule(inst)}) {
      const EmulationReport r = replay(s, p, EnergyTrace::identity(s));
      CHECK(r.effective_utility == r.expected_utility);
      CHECK(r.expected_utility == compute_utility(s, p).total);
      CHECK(r.incomplete == 0);
      CHECK(r.incomplete_rate() == 0.0);
      CHECK(r.max_deficit() == 0.0);
    }
  }
}

TEST_CASE("inflated fly legs on a trip planned at 95 percent") {
  ProblemInstance inst = test::base_instance();
  inst.fleet.hover_power = 0;
  inst.fleet.battery = 1'500'000;
  inst.activities.push_back(test::activity(1, {3800, 0, 0}, 1000, 1060, 1200));
  const PreparedInstance p(inst);
  MissionSchedule s;
  s.drones.resize(1);
  s.drones[0].trips.push_back(make_trip(p, {0}, 0, 0));
  REQUIRE(s.drones[0].trips[0].landing - s.drones[0].trips[0].takeoff == 1960);

  const EmulationReport ok = replay(s, p, EnergyTrace::identity(s));
  REQUIRE(ok.trips.size() == 1);
  CHECK(ok.trips[0].planned == doctest::Approx(0.95 * 1'500'000));

  const EmulationReport r = replay(s, p, EnergyTrace::uniform(s, 1.12));
  CHECK(r.incomplete == 1);
  CHECK_FALSE(r.trips[0].complete);
  CHECK(r.trips[0].needed == doctest::Approx(1'596'000));
  CHECK(r.trips[0].deficit == doctest::Approx(0.064));
  CHECK(r.mean_deficit() == doctest::Approx(0.064));
  CHECK(r.effective_utility < r.expected_utility);
}

TEST_CASE("incomplete trips grow with inflation") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const ProblemInstance inst = busy_instance(seed);
    const PreparedInstance p(inst);
    const MissionSchedule s = vrc_schedule(inst);
    std::size_t last = 0;
    Rational last_utility = compute_utility(s, p).total;
    for (double f = 1.0; f <= 1.6; f += 0.05) {
      const EmulationReport r = replay(s, p, EnergyTrace::uniform(s, f));
      CHECK(r.incomplete >= last);
      CHECK(r.effective_utility <= r.expected_utility);
      CHECK(r.effective_utility <= last_utility);
      last = r.incomplete;
      last_utility = r.effective_utility;
    }
  }
}

TEST_CASE("trace shape must match the schedule") {
  const ProblemInstance inst = busy_instance(2);
  const PreparedInstance p(inst);
  const MissionSchedule s = jsc_schedule(inst);
  EnergyTrace t = EnergyTrace::identity(s);
  REQUIRE_FALSE(t.trips.empty());
  t.trips.back().pop_back();
  CHECK_THROWS_AS(replay(s, p, t), MspError);
  t.trips.pop_back();
  CHECK_THROWS_AS(replay(s, p, t), MspError);
  CHECK_THROWS_AS(EnergyTrace::noise(s, 0.0, 1.0, 1), MspError);
}

TEST_CASE("instance and schedule json round trip") {
  ProblemInstance inst = busy_instance(4);
  inst.activities[0].gamma_ontime = Rational(7, 3);
  const Json doc = instance_to_json(inst);
  CHECK(doc["format"] == "msp-instance/1");
  const ProblemInstance back = instance_from_json(doc);
  CHECK(instance_to_json(back).dump() == doc.dump());
  CHECK(back.activities[0].gamma_ontime == Rational(7, 3));

  const MissionSchedule s = jsc_schedule(inst);
  const Json sd = schedule_to_json(s);
  CHECK(sd["format"] == "msp-schedule/1");
  const MissionSchedule s2 = schedule_from_json(sd);
  CHECK(schedule_to_json(s2).dump() == sd.dump());
  const PreparedInstance p(back);
  CHECK(validate_schedule(s2, p).empty());

  const RoadGraph g = synth_road_graph(1000, 20, 3);
  const Json gd = roadgraph_to_json(g);
  CHECK(gd["format"] == "msp-roadgraph/1");
  CHECK(roadgraph_to_json(roadgraph_from_json(gd)).dump() == gd.dump());
}

TEST_CASE("malformed json is a FormatError") {
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"format":"msp-instance/1"})")), FormatError);
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"format":"nope"})")), FormatError);
  Json doc = instance_to_json(busy_instance(1));
  doc["activities"][0]["t_start"] = "soon";
  CHECK_THROWS_AS(instance_from_json(doc), FormatError);
  CHECK_THROWS_AS(schedule_from_json(Json::parse("[]")), FormatError);
}

TEST_CASE("csv outputs") {
  CHECK(decimal(Rational(8, 3)) == "2.666667");
  CHECK(decimal(Rational(3)) == "3");
  CHECK(decimal(Rational(-1, 2)) == "-0.5");

  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {1200, 0, 0}, 300, 480, 600, 33));
  const PreparedInstance p(inst);
  MissionSchedule s;
  s.drones.resize(1);
  s.drones[0].trips.push_back(make_trip(p, {0}, 0, 0));
  s.drones[0].slots = {{1, 1, 360, 371}, {1, 2, 700, 711}};
  const std::string csv = report_csv(compute_utility(s, p));
  CHECK(csv == "activity_id,u,u_bar,u_bbar,U\n1,1,0.666667,0.333333,8\n");

  EnergyTrace t = EnergyTrace::noise(s, 0.9, 1.1, 5);
  std::istringstream in(trace_to_csv(t));
  const EnergyTrace back = trace_from_csv(in, s);
  REQUIRE(back.trips.size() == t.trips.size());
  CHECK(back.trips[0][1].fly == doctest::Approx(t.trips[0][1].fly));

  std::istringstream partial("trip_id,leg_index,fly_factor,hover_factor,compute_factor\n0,1,1.5,1,1\n");
  const EnergyTrace sparse = trace_from_csv(partial, s);
  CHECK(sparse.trips[0][0].fly == 1.0);
  CHECK(sparse.trips[0][1].fly == 1.5);
  std::istringstream outside("trip_id,leg_index,fly_factor,hover_factor,compute_factor\n3,0,1,1,1\n");
  CHECK_THROWS_AS(trace_from_csv(outside, s), FormatError);
}
