#include <algorithm>
#include <functional>

#include "doctest.h"
#include "msp/interval_scheduler.hpp"
#include "msp/rng.hpp"

using namespace msp;

namespace {

BatchOwner owner(std::size_t activity, Seconds runtime, Seconds deadline, std::vector<Seconds> available,
                 Rational onboard = Rational(1), Rational ontime = Rational(1)) {
  BatchOwner o;
  o.activity = activity;
  o.id = static_cast<ActivityId>(activity) + 1;
  o.trip = 0;
  o.runtime = runtime;
  o.deadline = deadline;
  o.available = std::move(available);
  o.onboard_value = onboard;
  o.ontime_value = ontime;
  o.planned = static_cast<int>(o.available.size());
  return o;
}

SlotTimeline timeline(Seconds landing) {
  SlotTimeline tl;
  tl.add_trip(0, landing);
  return tl;
}

// disjointness, chain order, capture-before-compute, landing bound
void check_consistent(const SlotTimeline& tl) {
  const auto occ = tl.occupants();
  for (std::size_t i = 0; i + 1 < occ.size(); ++i) {
    if (occ[i].end > occ[i].start && occ[i + 1].end > occ[i + 1].start) CHECK(occ[i].end <= occ[i + 1].start);
  }
  for (const auto& o : occ) {
    const BatchOwner& w = tl.owner(o.activity);
    CHECK(o.start >= w.available[static_cast<std::size_t>(o.batch - 1)]);
    CHECK(o.end <= tl.landing_of(o.activity));
    if (o.batch > 1) {
      auto prev = tl.start_of(o.activity, o.batch - 1);
      REQUIRE(prev);
      CHECK(*prev + w.runtime <= o.start);
    }
  }
}

}  // namespace

TEST_CASE("default_assign hand example") {
  SlotTimeline tl = timeline(600);
  tl.register_owner(owner(0, 11, 180, {60, 120}));
  const AssignOutcome out = default_assign(tl, 0);
  CHECK(out.placed == std::vector<int>{1, 2});
  CHECK(out.unscheduled.empty());
  const auto slots = tl.slots();
  REQUIRE(slots.size() == 2);
  CHECK(slots[0] == ComputeSlot{1, 1, 60, 71});
  CHECK(slots[1] == ComputeSlot{1, 2, 120, 131});
}

TEST_CASE("default_assign with no room") {
  SlotTimeline tl = timeline(120);
  tl.register_owner(owner(0, 70, 120, {60, 120}));
  const AssignOutcome out = default_assign(tl, 0);
  CHECK(out.placed.empty());
  CHECK(out.unscheduled == std::vector<int>{1, 2});
  CHECK(tl.size() == 0);
}

TEST_CASE("default_assign falls back to the schedulable interval") {
  SlotTimeline tl = timeline(400);
  tl.register_owner(owner(1, 120, 1000, {0}));
  tl.insert(1, 1, 60);  // covers P = [60, 180)
  tl.register_owner(owner(0, 11, 180, {60}));
  const BatchWindows w = batch_windows(tl, 0, 1);
  CHECK(w.preferred == Interval{60, 180});
  CHECK(w.schedulable == Interval{180, 400});
  CHECK(w.free_preferred.empty());
  default_assign(tl, 0);
  CHECK(tl.start_of(0, 1) == 180);
  CHECK_FALSE(tl.is_on_time(0, 1));
  CHECK(tl.utility() == Rational(1 + 2));
}

TEST_CASE("earliest_fit and free_gaps agree with a linear scan") {
  Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    SlotTimeline tl = timeline(200);
    std::vector<Interval> busy;
    for (std::size_t a = 0; a < 6; ++a) {
      const Seconds len = rng.uniform_int(0, 20);
      const Seconds s = rng.uniform_int(0, 180);
      tl.register_owner(owner(a, len, 200, {0}));
      if (tl.is_free(s, s + len)) {
        tl.insert(a, 1, s);
        if (len > 0) busy.push_back({s, s + len});
      }
    }
    auto free_at = [&](Seconds s, Seconds e) {
      if (e <= s) return true;
      for (const Interval& b : busy) {
        if (b.start < e && s < b.end) return false;
      }
      return true;
    };
    const Seconds lo = rng.uniform_int(0, 150);
    const Seconds hi = lo + rng.uniform_int(0, 60);
    const Seconds len = rng.uniform_int(0, 15);
    std::optional<Seconds> expect;
    for (Seconds s = lo; s + len <= hi; ++s) {
      if (free_at(s, s + len)) {
        expect = s;
        break;
      }
    }
    CHECK(tl.earliest_fit(lo, hi, len) == expect);

    std::vector<Interval> gaps;
    for (Seconds t = lo; t < hi; ++t) {
      if (!free_at(t, t + 1)) continue;
      if (!gaps.empty() && gaps.back().end == t) {
        gaps.back().end = t + 1;
      } else {
        gaps.push_back({t, t + 1});
      }
    }
    CHECK(tl.free_gaps(lo, hi) == gaps);
  }
}

TEST_CASE("zero-length slots never conflict") {
  SlotTimeline tl = timeline(100);
  tl.register_owner(owner(0, 0, 100, {10, 10}));
  tl.register_owner(owner(1, 20, 100, {0}));
  tl.insert(1, 1, 0);
  default_assign(tl, 0);
  CHECK(tl.start_of(0, 1) == 10);
  CHECK(tl.start_of(0, 2) == 10);
  CHECK(tl.utility() == Rational(2 + 4));
}

// Exhaustive best over placements that are either on time or start at or
// after the deadline, the two windows the default pass uses.
Rational oracle_single(const SlotTimeline& base, const BatchOwner& o, Seconds landing) {
  Rational best;
  std::function<void(SlotTimeline&, int, Seconds, Rational)> go = [&](SlotTimeline& tl, int k, Seconds prev_end,
                                                                       Rational acc) {
    best = std::max(best, acc);
    if (k > o.planned) return;
    const Seconds lo = std::max(o.available[static_cast<std::size_t>(k - 1)], prev_end);
    for (Seconds s = lo; s + o.runtime <= landing; ++s) {
      const bool on_time = s + o.runtime <= o.deadline;
      if (!on_time && s < o.deadline) continue;
      if (!tl.is_free(s, s + o.runtime)) continue;
      tl.insert(o.activity, k, s);
      go(tl, k + 1, s + o.runtime, acc + (on_time ? o.onboard_value + o.ontime_value : o.onboard_value));
      tl.erase(o.activity, k);
    }
  };
  SlotTimeline tl = base;
  go(tl, 1, 0, Rational(0));
  return best;
}

TEST_CASE("default_assign is optimal for one activity against fixed occupancy") {
  Rng rng(5);
  for (int round = 0; round < 60; ++round) {
    const Seconds landing = 60;
    SlotTimeline tl = timeline(landing);
    for (std::size_t a = 1; a <= 3; ++a) {
      const Seconds len = rng.uniform_int(1, 8);
      const Seconds s = rng.uniform_int(0, landing - len);
      tl.register_owner(owner(a, len, landing, {0}, Rational(0), Rational(0)));
      if (tl.is_free(s, s + len)) tl.insert(a, 1, s);
    }
    const int q = static_cast<int>(rng.uniform_int(1, 3));
    std::vector<Seconds> avail;
    for (int k = 1; k <= q; ++k) avail.push_back(5 * k);
    const Seconds deadline = 5 * q + rng.uniform_int(0, 30);
    const BatchOwner o = owner(0, rng.uniform_int(1, 6), deadline, avail);
    tl.register_owner(o);
    const Rational expect = oracle_single(tl, o, landing);
    default_assign(tl, 0);
    check_consistent(tl);
    CHECK(tl.utility() == expect);
  }
}

namespace {

// A: batch available at 0, deadline 15. B: late whatever happens (deadline 5).
SlotTimeline two_activity_case() {
  SlotTimeline tl = timeline(40);
  tl.register_owner(owner(1, 10, 5, {0}));
  default_assign(tl, 1);
  tl.register_owner(owner(0, 10, 15, {0}));
  return tl;
}

Rational exhaustive_pair(const SlotTimeline& base) {
  Rational best;
  const BatchOwner& a = base.owner(0);
  const BatchOwner& b = base.owner(1);
  for (Seconds sa = -1; sa + a.runtime <= 40; ++sa) {
    for (Seconds sb = -1; sb + b.runtime <= 40; ++sb) {
      Rational u;
      if (sa >= 0 && sb >= 0 && sa < sb + b.runtime && sb < sa + a.runtime) continue;
      if (sa >= 0) u += sa + a.runtime <= a.deadline ? a.onboard_value + a.ontime_value : a.onboard_value;
      if (sb >= 0) u += sb + b.runtime <= b.deadline ? b.onboard_value + b.ontime_value : b.onboard_value;
      best = std::max(best, u);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("test_and_swap displaces a late victim") {
  SlotTimeline tl = two_activity_case();
  CHECK(tl.start_of(1, 1) == 5);
  default_assign(tl, 0);
  CHECK(tl.start_of(0, 1) == 15);
  CHECK_FALSE(tl.is_on_time(0, 1));
  const Rational before = tl.utility();

  CHECK(test_and_swap(tl) == 1);
  check_consistent(tl);
  CHECK(tl.start_of(0, 1) == 0);
  CHECK(tl.is_on_time(0, 1));
  CHECK(tl.start_of(1, 1) == 10);
  CHECK(tl.utility() == before + Rational(1));
  CHECK(tl.utility() == exhaustive_pair(tl));
}

TEST_CASE("test_and_swap without violations is a fixed point") {
  SlotTimeline tl = timeline(600);
  tl.register_owner(owner(0, 11, 180, {60, 120}));
  default_assign(tl, 0);
  const auto before = tl.slots();
  CHECK(test_and_swap(tl) == 0);
  CHECK(tl.slots() == before);
}

TEST_CASE("contended slot goes to the higher per-batch utility") {
  for (const bool a_wins : {true, false}) {
    SlotTimeline tl = timeline(40);
    tl.register_owner(owner(1, 10, 10, {0}, Rational(1, 2), Rational(1, 2)));
    default_assign(tl, 1);
    const Rational va = a_wins ? Rational(1) : Rational(1, 4);
    tl.register_owner(owner(0, 10, 10, {0}, va, va));
    default_assign(tl, 0);
    CHECK(tl.start_of(0, 1) == 10);
    test_and_swap(tl);
    check_consistent(tl);
    if (a_wins) {
      CHECK(tl.start_of(0, 1) == 0);
      CHECK(tl.start_of(1, 1) == 10);
    } else {
      CHECK(tl.start_of(1, 1) == 0);
      CHECK(tl.start_of(0, 1) == 10);
    }
  }
}

TEST_CASE("best_assignment choice") {
  SlotTimeline plain = timeline(600);
  plain.register_owner(owner(0, 11, 180, {60, 120}));
  CHECK(best_assignment(plain, 0) == AssignmentChoice::kDefault);
  CHECK(plain.size() == 2);

  SlotTimeline tl = two_activity_case();
  CHECK(best_assignment(tl, 0) == AssignmentChoice::kTestAndSwap);
  CHECK(tl.is_on_time(0, 1));

  // equal per-batch utility: no swap, tie keeps the default
  SlotTimeline tie = timeline(40);
  tie.register_owner(owner(1, 10, 10, {0}));
  default_assign(tie, 1);
  tie.register_owner(owner(0, 10, 10, {0}));
  CHECK(best_assignment(tie, 0) == AssignmentChoice::kDefault);
  CHECK(tie.start_of(1, 1) == 0);
}

TEST_CASE("test_and_swap never lowers utility on random timelines") {
  Rng rng(23);
  for (int round = 0; round < 300; ++round) {
    SlotTimeline tl = timeline(rng.uniform_int(40, 120));
    const int owners = static_cast<int>(rng.uniform_int(2, 4));
    for (int a = 0; a < owners; ++a) {
      const int q = static_cast<int>(rng.uniform_int(1, 2));
      const Seconds t = rng.uniform_int(0, 30);
      std::vector<Seconds> avail;
      for (int k = 1; k <= q; ++k) avail.push_back(t + 10 * k);
      tl.register_owner(owner(static_cast<std::size_t>(a), rng.uniform_int(1, 12), t + 10 * q + rng.uniform_int(0, 25),
                              avail, Rational(rng.uniform_int(1, 5), q), Rational(rng.uniform_int(1, 5), q)));
      SlotTimeline plain = tl;
      default_assign(plain, static_cast<std::size_t>(a));
      best_assignment(tl, static_cast<std::size_t>(a));
      check_consistent(tl);
      CHECK(tl.utility() >= plain.utility());
    }
    const Rational before = tl.utility();
    test_and_swap(tl);
    check_consistent(tl);
    CHECK(tl.utility() >= before);
  }
}
