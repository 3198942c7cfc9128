#include <algorithm>

#include "doctest.h"
#include "msp/exact.hpp"
#include "msp/jsc.hpp"
#include "msp/vrc.hpp"
#include "support.hpp"

using namespace msp;

namespace {

Joules total_energy(const std::vector<RouteDraft>& drafts) {
  Joules e = 0;
  for (const RouteDraft& d : drafts) e += d.energy;
  return e;
}

// Best strictly improving, temporally feasible tail swap over every pair.
Joules best_swap_saving(const PreparedInstance& p, const std::vector<RouteDraft>& drafts) {
  Joules best = 0;
  for (std::size_t a = 0; a < drafts.size(); ++a) {
    for (std::size_t b = a + 1; b < drafts.size(); ++b) {
      const auto& x = drafts[a].stops;
      const auto& y = drafts[b].stops;
      for (std::size_t i = 0; i <= x.size(); ++i) {
        for (std::size_t j = 0; j <= y.size(); ++j) {
          std::vector<std::size_t> l(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i));
          l.insert(l.end(), y.begin() + static_cast<std::ptrdiff_t>(j), y.end());
          std::vector<std::size_t> r(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(j));
          r.insert(r.end(), x.begin() + static_cast<std::ptrdiff_t>(i), x.end());
          const RouteDraft dl = RouteDraft::make(p, l);
          const RouteDraft dr = RouteDraft::make(p, r);
          if (!dl.temporal_ok || !dr.temporal_ok || !drafts[a].temporal_ok || !drafts[b].temporal_ok) continue;
          best = std::max(best, drafts[a].energy + drafts[b].energy - dl.energy - dr.energy);
        }
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("knn route construction") {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {800, 0, 50}, 1000, 1100, 1200));
  {
    const PreparedInstance p(inst);
    const auto drafts = build_routes_knn(p, 3);
    REQUIRE(drafts.size() == 1);
    CHECK(drafts[0].stops == std::vector<std::size_t>{0});
    CHECK(drafts[0].temporal_ok);
  }

  // collinear, staggered windows: the far point comes first in time
  inst.activities.clear();
  inst.activities.push_back(test::activity(1, {1200, 0, 50}, 3000, 3060, 3200));
  inst.activities.push_back(test::activity(2, {400, 0, 50}, 1000, 1060, 1200));
  inst.activities.push_back(test::activity(3, {800, 0, 50}, 2000, 2060, 2200));
  {
    const PreparedInstance p(inst);
    const auto drafts = build_routes_knn(p, 3);
    REQUIRE(drafts.size() == 1);
    CHECK(drafts[0].stops == std::vector<std::size_t>{1, 2, 0});
  }

  // identical windows cannot be chained
  inst.activities.clear();
  inst.activities.push_back(test::activity(1, {400, 0, 50}, 1000, 1060, 1200));
  inst.activities.push_back(test::activity(2, {-400, 0, 50}, 1000, 1060, 1200));
  {
    const PreparedInstance p(inst);
    const auto drafts = build_routes_knn(p, 3);
    CHECK(drafts.size() == 2);
    CHECK_THROWS_AS(build_routes_knn(p, 0), MspError);
  }
}

TEST_CASE("knn covers every activity exactly once") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioParams sp;
    sp.drones = 4;
    sp.load = 6;
    sp.seed = seed;
    const ProblemInstance inst = gen_rnd(sp);
    const PreparedInstance p(inst);
    std::vector<int> seen(inst.activities.size(), 0);
    for (const RouteDraft& d : build_routes_knn(p, 3)) {
      for (std::size_t s : d.stops) ++seen[s];
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}

TEST_CASE("two_opt_star uncrosses depot legs") {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {-1000, 0, 50}, 1000, 1060, 1200));
  inst.activities.push_back(test::activity(2, {1000, 0, 50}, 3000, 3060, 3200));
  inst.activities.push_back(test::activity(3, {1000, 100, 50}, 1000, 1060, 1200));
  inst.activities.push_back(test::activity(4, {-1000, 100, 50}, 3000, 3060, 3200));
  const PreparedInstance p(inst);

  const std::vector<RouteDraft> single{RouteDraft::make(p, {0, 1})};
  const auto same = two_opt_star(p, single);
  REQUIRE(same.size() == 1);
  CHECK(same[0].stops == single[0].stops);

  const std::vector<RouteDraft> crossing{RouteDraft::make(p, {0, 1}), RouteDraft::make(p, {2, 3})};
  const Joules before = total_energy(crossing);
  const Joules expect_saving = best_swap_saving(p, crossing);
  REQUIRE(expect_saving > 0);
  const auto out = two_opt_star(p, crossing);
  CHECK(total_energy(out) <= before - expect_saving);
  CHECK(best_swap_saving(p, out) == 0);
  // fixed point
  const auto again = two_opt_star(p, out);
  REQUIRE(again.size() == out.size());
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(again[i].stops == out[i].stops);
}

TEST_CASE("two_opt_star reaches a local optimum and never adds energy") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioParams sp;
    sp.drones = 3;
    sp.load = 5;
    sp.radius = 1500;
    sp.seed = seed;
    const ProblemInstance inst = gen_rnd(sp);
    const PreparedInstance p(inst);
    const auto drafts = build_routes_knn(p, 2);
    const auto out = two_opt_star(p, drafts);
    CHECK(total_energy(out) <= total_energy(drafts));
    CHECK(best_swap_saving(p, out) == 0);
    std::size_t stops = 0;
    for (const RouteDraft& d : out) {
      stops += d.stops.size();
      CHECK((d.temporal_ok || d.stops.size() == 1));
    }
    CHECK(stops == inst.activities.size());
  }
}

TEST_CASE("score_edges") {
  ProblemInstance inst = test::base_instance();
  for (int i = 0; i < 4; ++i) {
    inst.activities.push_back(test::activity(i + 1, {400.0 * (i + 1), 0, 50}, 1000 + 300 * i, 1100 + 300 * i,
                                             1200 + 300 * i));
  }
  const PreparedInstance p(inst);
  const std::vector<std::size_t> stops{0, 1, 2, 3};

  auto scores = score_edges(p, stops, inst.fleet.battery);
  REQUIRE(scores.size() == 3);
  CHECK(viable_trips(p, stops, inst.fleet.battery).size() == 1);
  for (const SplitScore& s : scores) {
    CHECK(s.energy < 1.0);
    CHECK(s.compute == 0.0);
    CHECK(s.total == doctest::Approx(s.energy + s.utility));
  }

  // budget that fits the first two stops but not the third
  const std::vector<std::size_t> two{0, 1};
  const std::vector<std::size_t> three{0, 1, 2};
  const Joules e2 = fly_hover_energy(sequence_timing(p, two), inst.fleet);
  const Joules e3 = fly_hover_energy(sequence_timing(p, three), inst.fleet);
  REQUIRE(e2 < e3);
  const auto trips = viable_trips(p, stops, e2);
  REQUIRE(trips.size() >= 2);
  CHECK(trips[0] == std::pair<std::size_t, std::size_t>{0, 1});
  scores = score_edges(p, stops, e2);
  CHECK(scores[1].energy == doctest::Approx(1.0));
  CHECK(scores[1].energy > scores[0].energy);
  const std::vector<std::size_t> one{0};
  CHECK(scores[0].energy ==
        doctest::Approx(static_cast<double>(fly_hover_energy(sequence_timing(p, one), inst.fleet)) / e2));
}

TEST_CASE("compute score counts batches that clash with other activities") {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {400, 0, 50}, 1000, 1060, 1400, 120));
  inst.activities.push_back(test::activity(2, {400, 0, 50}, 1070, 1130, 1400, 50));
  const PreparedInstance p(inst);
  // batch of 1 runs [1060, 1180), batch of 2 runs [1130, 1180)
  const auto scores = score_edges(p, {0, 1}, inst.fleet.battery);
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].compute == doctest::Approx(0.5));
}

TEST_CASE("split_routes") {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {1000, 0, 50}, 1000, 1300, 1400));
  inst.activities.push_back(test::activity(2, {1000, 0, 50}, 1400, 1700, 1800));
  const PreparedInstance p(inst);
  const std::vector<RouteDraft> drafts{RouteDraft::make(p, {0, 1})};

  SplitResult r = split_routes(p, drafts, inst.fleet.battery);
  REQUIRE(r.trips.size() == 1);
  CHECK(r.trips[0] == std::vector<std::size_t>{0, 1});

  const Joules tight = drafts[0].energy - 1;
  r = split_routes(p, drafts, tight);
  CHECK(r.trips.size() == 2);
  CHECK(r.dropped.empty());
}

TEST_CASE("split_routes covers every waypoint once") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ScenarioParams sp;
    sp.drones = 1;
    sp.load = 12;
    sp.seed = seed;
    const ProblemInstance inst = gen_rnd(sp);
    const PreparedInstance p(inst);
    const auto drafts = build_routes_knn(p, 3);
    const Joules budget = 600'000;
    const SplitResult r = split_routes(p, drafts, budget);
    std::vector<int> seen(inst.activities.size(), 0);
    for (const auto& trip : r.trips) {
      const SequenceTiming t = sequence_timing(p, trip);
      CHECK(t.in_time);
      CHECK(fly_hover_energy(t, inst.fleet) <= budget);
      for (std::size_t s : trip) ++seen[s];
    }
    for (std::size_t s : r.dropped) ++seen[s];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}

TEST_CASE("vrc matches jsc on a single activity") {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {400, 0, 50}, 600, 780, 900, 33));
  const PreparedInstance p(inst);
  const MissionSchedule v = vrc_schedule(inst);
  const MissionSchedule j = jsc_schedule(inst);
  CHECK(validate_schedule(v, p).empty());
  CHECK(compute_utility(v, p).total == compute_utility(j, p).total);
  CHECK(v.drones[0].slots == j.drones[0].slots);
}

TEST_CASE("vrc schedules validate and stay below the optimum") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const ProblemInstance inst = test::tiny_instance(seed);
    const PreparedInstance p(inst);
    const MissionSchedule s = vrc_schedule(inst);
    const auto v = validate_schedule(s, p);
    CHECK_MESSAGE(v.empty(), "seed ", seed, ": ", (v.empty() ? "" : v[0].message));
    CHECK(compute_utility(s, p).total <= brute_force_opt(inst).utility);
  }
}
