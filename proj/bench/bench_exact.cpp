// Parallel vs serial kernels: brute-force optimum and ST-DBSCAN
// neighbourhoods. Checks the results agree and prints wall-clock times.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "msp/clustering.hpp"
#include "msp/exact.hpp"
#include "msp/workloads.hpp"

namespace {

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
  if (reps <= 0) {
    std::cerr << "usage: bench_exact [repetitions > 0]\n";
    return 2;
  }
  bool agree = true;

  msp::ScenarioParams p;
  p.drones = 2;
  p.load = 3;
  p.max_duration = 120;
  p.horizon = 3600;
  p.radius = 1500.0;
  msp::BruteForceConfig caps;
  caps.max_trips = 3;
  caps.max_batches = 12;

  double par = 0.0;
  double ser = 0.0;
  for (int r = 0; r < reps; ++r) {
    p.seed = static_cast<std::uint64_t>(r + 1);
    msp::ProblemInstance inst = msp::gen_rnd(p);
    msp::OptResult a;
    msp::OptResult b;
    par += time_ms([&] { a = msp::brute_force_opt(inst, caps); });
    ser += time_ms([&] { b = msp::brute_force_opt_serial(inst, caps); });
    if (a.utility != b.utility || a.schedule.dropped != b.schedule.dropped) agree = false;
  }
  std::cout << "brute_force_opt  n=6 m=2 reps=" << reps << "  parallel " << par / reps << " ms  serial "
            << ser / reps << " ms\n";

  msp::ScenarioParams big;
  big.drones = 50;
  big.load = 40;
  big.seed = 7;
  const msp::ProblemInstance inst = msp::gen_rnd(big);
  const msp::PreparedInstance prepared(inst);
  std::vector<std::vector<std::size_t>> x;
  std::vector<std::vector<std::size_t>> y;
  const double np = time_ms([&] { x = msp::neighborhoods(prepared, {}); });
  const double ns = time_ms([&] { y = msp::neighborhoods_serial(prepared, {}); });
  if (x != y) agree = false;
  std::cout << "neighborhoods    n=" << inst.activities.size() << "  parallel " << np << " ms  serial " << ns
            << " ms\n";

  std::cout << (agree ? "parallel and serial results agree\n" : "MISMATCH between parallel and serial results\n");
  return agree ? 0 : 1;
}
