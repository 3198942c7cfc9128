#include <algorithm>

#include "doctest.h"
#include "msp/energy.hpp"
#include "msp/schedule.hpp"
#include "support.hpp"

using namespace msp;

namespace {

bool has(const std::vector<Violation>& v, ViolationKind kind) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

// One activity 1200 m out (300 s flight), captured [300, 480), q = 3, rho = 11.
ProblemInstance one_far() {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {1200, 0, 0}, 300, 480, 600, 33));
  return inst;
}

MissionSchedule one_trip(const PreparedInstance& p, std::vector<ComputeSlot> slots) {
  MissionSchedule s;
  s.drones.resize(1);
  s.drones[0].trips.push_back(make_trip(p, {0}, 0, 0));
  s.drones[0].slots = std::move(slots);
  return s;
}

}  // namespace

TEST_CASE("trip_times hand examples") {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {0, 0, 0}, 100, 220, 300));
  inst.activities.push_back(test::activity(2, {1200, 0, 0}, 360, 540, 700));
  const PreparedInstance p(inst);

  Trip near = make_trip(p, {0}, 0, 0);
  TripTimes t = trip_times(near, p);
  CHECK(t.fly == 0);
  CHECK(t.hover == 120);

  // arrive 60 s early, capture 180 s
  Trip far;
  far.activities = {2};
  far.takeoff = 0;
  far.arrivals = {300};
  far.departures = {540};
  far.landing = 840;
  t = trip_times(far, p);
  CHECK(t.fly == 600);
  CHECK(t.hover == 240);

  // both in sequence: the second is reached exactly at its t
  ProblemInstance chain = test::base_instance();
  chain.activities.push_back(test::activity(1, {0, 0, 0}, 100, 220, 300));
  chain.activities.push_back(test::activity(2, {1200, 0, 0}, 520, 700, 800));
  const PreparedInstance pc(chain);
  Trip both = make_trip(pc, {0, 1}, 0, 0);
  REQUIRE(both.arrivals.size() == 2);
  CHECK(both.arrivals[1] == 220 + 300);
  t = trip_times(both, pc);
  CHECK(t.fly == 600);
  CHECK(t.hover == 120 + 180);

  far.arrivals = {370};
  far.takeoff = 70;
  CHECK_THROWS_WITH_AS(trip_times(far, p), doctest::Contains("2"), MspError);
}

TEST_CASE("compute_utility U = 5 + 2 + 1") {
  const ProblemInstance inst = one_far();
  const PreparedInstance p(inst);
  // batch 1 on time, batch 2 on board only, batch 3 never run
  MissionSchedule s = one_trip(p, {{1, 1, 360, 371}, {1, 2, 700, 711}});
  CHECK(validate_schedule(s, p).empty());
  const UtilityReport r = compute_utility(s, p);
  REQUIRE(r.activities.size() == 1);
  CHECK(r.activities[0].captured == 1);
  CHECK(r.activities[0].onboard == Rational(2, 3));
  CHECK(r.activities[0].ontime == Rational(1, 3));
  CHECK(r.total == Rational(8));
  CHECK(r.per_drone.at(0) == Rational(8));

  s = one_trip(p, {{1, 1, 360, 371}, {1, 2, 420, 431}, {1, 3, 480, 491}});
  CHECK(compute_utility(s, p).total == inst.activities[0].max_utility());

  MissionSchedule dropped;
  dropped.drones.resize(1);
  dropped.dropped = {1};
  CHECK(validate_schedule(dropped, p).empty());
  const UtilityReport d = compute_utility(dropped, p);
  CHECK(d.total == Rational(0));
  CHECK(d.activities[0].drone == -1);
  CHECK(d.scheduled == 0);
}

TEST_CASE("validator catches overlap and early compute") {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {0, 0, 0}, 0, 60, 400, 10));
  inst.activities.push_back(test::activity(2, {0, 0, 0}, 60, 90, 400, 15));
  const PreparedInstance p(inst);

  MissionSchedule s;
  s.drones.resize(1);
  s.drones[0].trips.push_back(make_trip(p, {0, 1}, 0, 0));
  s.drones[0].trips[0].landing = 200;  // hover at the depot waypoint; fly-home leg is zero
  s.drones[0].slots = {{1, 1, 100, 110}, {2, 1, 105, 120}};
  auto v = validate_schedule(s, p);
  CHECK(has(v, ViolationKind::kSlotOverlap));
  CHECK(to_string(ViolationKind::kSlotOverlap) == "slot overlap");

  s.drones[0].trips[0].landing = 90;
  s.drones[0].slots = {{1, 1, 59, 69}};  // available at 60
  v = validate_schedule(s, p);
  CHECK(has(v, ViolationKind::kCaptureIncomplete));
  CHECK(to_string(ViolationKind::kCaptureIncomplete) == "capture incomplete");

  s.drones[0].slots = {{1, 1, 60, 70}, {2, 1, 90, 105}};  // ends after landing
  v = validate_schedule(s, p);
  CHECK(has(v, ViolationKind::kSlotAfterLanding));
}

TEST_CASE("validator structural checks") {
  const ProblemInstance inst = one_far();
  const PreparedInstance p(inst);
  MissionSchedule s = one_trip(p, {});
  CHECK(validate_schedule(s, p).empty());

  MissionSchedule twice = s;
  twice.dropped = {1};
  CHECK(has(validate_schedule(twice, p), ViolationKind::kDuplicateAssignment));

  MissionSchedule missing;
  missing.drones.resize(1);
  CHECK(has(validate_schedule(missing, p), ViolationKind::kUnaccountedActivity));

  MissionSchedule late = s;
  late.drones[0].trips[0].takeoff += 10;
  late.drones[0].trips[0].arrivals[0] += 10;
  CHECK(has(validate_schedule(late, p), ViolationKind::kLateArrival));

  MissionSchedule gap = one_trip(p, {{1, 2, 420, 431}});
  CHECK(has(validate_schedule(gap, p), ViolationKind::kBatchNotPrefix));

  MissionSchedule shortslot = one_trip(p, {{1, 1, 360, 370}});
  CHECK(has(validate_schedule(shortslot, p), ViolationKind::kSlotDuration));

  ProblemInstance weak = inst;
  weak.fleet.battery = 500'000;
  const PreparedInstance pw(weak);
  CHECK(has(validate_schedule(one_trip(pw, {}), pw), ViolationKind::kEnergyExceeded));
}

TEST_CASE("trip energy examples") {
  DroneSpec spec;
  Trip t;
  t.activities = {1};
  t.takeoff = 0;
  t.arrivals = {300};
  t.departures = {600};
  t.landing = 900;
  const std::vector<ComputeSlot> slots{{1, 1, 610, 621}, {1, 2, 630, 652}};
  const EnergyBreakdown e = trip_energy(t, slots, spec);
  CHECK(e.fly == 600);
  CHECK(e.hover == 300);
  CHECK(e.compute == 33);
  CHECK(e.energy == 660'660);
  CHECK(e.capacity == 1'350'000);
  CHECK(e.feasible);

  Trip empty;
  const EnergyBreakdown z = trip_energy(empty, {}, spec);
  CHECK(z.energy == 0);
  CHECK(z.feasible);

  Trip longer;
  longer.activities = {1};
  longer.takeoff = 0;
  longer.arrivals = {901};
  longer.departures = {901};
  longer.landing = 1801;
  const EnergyBreakdown over = trip_energy(longer, {}, spec);
  CHECK(over.energy == 1801 * 750);
  CHECK_FALSE(over.feasible);
  longer.arrivals = {900};
  longer.departures = {900};
  longer.landing = 1800;
  CHECK(trip_energy(longer, {}, spec).feasible);

  const std::vector<ComputeSlot> outside{{1, 1, 1800, 1811}};
  CHECK_THROWS_AS(trip_energy(longer, outside, spec), MspError);

  // reserve tightens the budget
  CHECK_FALSE(trip_energy(t, slots, spec, 0.6).feasible);
}

TEST_CASE("trip energy scales with the powers") {
  Trip t;
  t.activities = {1};
  t.arrivals = {250};
  t.departures = {410};
  t.landing = 700;
  const std::vector<ComputeSlot> slots{{1, 1, 500, 540}};
  DroneSpec a;
  DroneSpec b = a;
  b.fly_power *= 3;
  b.hover_power *= 3;
  b.compute_power *= 3;
  const EnergyBreakdown ea = trip_energy(t, slots, a);
  CHECK(trip_energy(t, slots, b).energy == 3 * ea.energy);
  CHECK(ea.energy == ea.fly * 750 + ea.hover * 700 + ea.compute * 20);
}

TEST_CASE("fly_hover_feasible") {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {0, 0, 0}, 500, 600, 700));
  // F = 100 from activity 1, but only a 50 s gap
  inst.activities.push_back(test::activity(2, {400, 0, 0}, 650, 700, 800));
  inst.activities.push_back(test::activity(3, {400, 0, 0}, 800, 900, 1000));
  const PreparedInstance p(inst);
  const std::vector<std::size_t> none;
  CHECK(fly_hover_feasible(none, p));
  const std::vector<std::size_t> one{0};
  CHECK(fly_hover_feasible(one, p));
  const std::vector<std::size_t> tight{0, 1};
  CHECK_FALSE(fly_hover_feasible(tight, p));
  const std::vector<std::size_t> extended{0, 1, 2};
  CHECK_FALSE(fly_hover_feasible(extended, p));
  const std::vector<std::size_t> ok{0, 2};
  CHECK(fly_hover_feasible(ok, p));
}

TEST_CASE("removing the last activity never raises trip energy") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ProblemInstance inst = test::tiny_instance(seed);
    const PreparedInstance p(inst);
    std::vector<std::size_t> order(inst.activities.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return inst.activities[a].t_start < inst.activities[b].t_start; });
    for (std::size_t len = order.size(); len > 1; --len) {
      const std::vector<std::size_t> longer(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(len));
      const std::vector<std::size_t> shorter(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(len - 1));
      const SequenceTiming full = sequence_timing(p, longer);
      if (!full.in_time) continue;
      CHECK(fly_hover_energy(sequence_timing(p, shorter), inst.fleet) <= fly_hover_energy(full, inst.fleet));
    }
  }
}
