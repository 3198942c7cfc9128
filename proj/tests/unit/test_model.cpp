#include "doctest.h"
#include "msp/model.hpp"
#include "support.hpp"

using namespace msp;

TEST_CASE("rational arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(5, 3) > Rational(3, 2));
  CHECK(Rational::parse("2.75") == Rational(11, 4));
  CHECK(Rational::parse("-3/9") == Rational(-1, 3));
  CHECK(Rational::parse("1e3") == Rational(1000));
  CHECK(Rational(22, 7).str() == "22/7");
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS(Rational::parse("abc"));
}

TEST_CASE("flight_time examples") {
  DroneSpec s;
  CHECK(flight_time({0, 0, 0}, {0, 0, 0}, s) == 0);
  CHECK(flight_time({0, 0, 0}, {1200, 0, 0}, s) == 300);
  CHECK(flight_time({0, 0, 0}, {3000, 4000, 0}, s) == 1250);
  // ceiling
  CHECK(flight_time({0, 0, 0}, {1201, 0, 0}, s) == 301);
}

TEST_CASE("flight_time symmetry and triangle slack") {
  DroneSpec s;
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Point3 p{rng.uniform_real(-3000, 3000), rng.uniform_real(-3000, 3000), 50};
    Point3 q{rng.uniform_real(-3000, 3000), rng.uniform_real(-3000, 3000), 50};
    Point3 r{rng.uniform_real(-3000, 3000), rng.uniform_real(-3000, 3000), 0};
    CHECK(flight_time(p, q, s) == flight_time(q, p, s));
    CHECK(flight_time(p, r, s) <= flight_time(p, q, s) + flight_time(q, r, s) + 1);
  }
}

TEST_CASE("derive_batches examples") {
  Activity a = test::activity(1, {}, 0, 180, 300, 0);
  BatchSet b = derive_batches(a, 60, 1);
  CHECK(b.count == 3);
  CHECK(b.available == std::vector<Seconds>{60, 120, 180});

  a.t_end = 150;
  b = derive_batches(a, 60, 1);
  CHECK(b.count == 3);
  CHECK(b.available == std::vector<Seconds>{60, 120, 150});  // last batch clamps to t_end

  // kappa / q / pi = 11 s per batch
  a.t_end = 180;
  a.kappa = 3 * 11 * 1'000'000'000'000LL;
  b = derive_batches(a, 60, 1'000'000'000'000LL);
  CHECK(b.per_batch_runtime == 11);
  CHECK(b.per_batch_cost == Rational(11'000'000'000'000LL));

  // non-divisible kappa keeps an exact rational per-batch cost
  a.kappa = 100;
  b = derive_batches(a, 60, 7);
  CHECK(b.per_batch_cost == Rational(100, 3));
  CHECK(b.per_batch_runtime == 5);  // ceil(100 / 21)
  CHECK((b.per_batch_cost * Rational(3)).num() == 100);

  a.kappa = 0;
  CHECK(derive_batches(a, 60, 7).per_batch_runtime == 0);

  a.t_end = a.t_start;
  CHECK_THROWS_AS(derive_batches(a, 60, 1), MspError);
}

TEST_CASE("validate_instance reports every violation") {
  ProblemInstance inst = test::base_instance();
  inst.activities.push_back(test::activity(1, {}, 0, 60, 100));
  CHECK(validate_instance(inst).empty());

  inst.activities.push_back(test::activity(2, {}, 100, 100, 200));
  inst.activities.push_back(test::activity(3, {}, 100, 200, 150));
  const auto v = validate_instance(inst);
  REQUIRE(v.size() == 2);
  CHECK(v[0].what == "empty capture window");
  CHECK(v[1].what == "deadline precedes capture end");

  inst.activities.push_back(test::activity(1, {}, 0, 60, 100));
  inst.fleet.speed = 0;
  CHECK(validate_instance(inst).size() == 4);
}

TEST_CASE("energy budget with reserve") {
  CHECK(energy_budget(1'350'000, 0.0) == 1'350'000);
  CHECK(energy_budget(1'350'000, 0.10) == 1'215'000);
  CHECK_THROWS(energy_budget(100, 1.0));
  CHECK_THROWS(energy_budget(100, -0.1));
}
