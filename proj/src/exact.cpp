#include "msp/exact.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>

#include "msp/energy.hpp"

namespace msp {

BruteForceConfig BruteForceConfig::parse(const std::string& text) {
  BruteForceConfig cfg;
  int* fields[] = {&cfg.max_activities, &cfg.max_drones, &cfg.max_trips, &cfg.max_batches};
  std::istringstream in(text);
  std::string part;
  std::size_t i = 0;
  while (std::getline(in, part, ',')) {
    if (i == 4) throw MspError("opt caps: expected n,m,r,b");
    try {
      std::size_t used = 0;
      *fields[i] = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw MspError("opt caps: bad number '" + part + "'");
    }
    if (*fields[i] < 1) throw MspError("opt caps: every cap must be at least 1");
    ++i;
  }
  if (i != 4) throw MspError("opt caps: expected n,m,r,b");
  return cfg;
}

std::string BruteForceConfig::str() const {
  return std::to_string(max_activities) + "," + std::to_string(max_drones) + "," + std::to_string(max_trips) + "," +
         std::to_string(max_batches);
}

void check_caps(const ProblemInstance& inst, const BruteForceConfig& cfg) {
  std::int64_t batches = 0;
  for (const Activity& a : inst.activities) batches += derive_batches(a, inst.beta, inst.fleet.proc_speed).count;
  const auto n = static_cast<std::int64_t>(inst.activities.size());
  if (n > cfg.max_activities || inst.fleet.count > cfg.max_drones ||
      inst.depot.max_trips_per_drone > cfg.max_trips || batches > cfg.max_batches) {
    throw CapsExceeded("instance (n=" + std::to_string(n) + ", m=" + std::to_string(inst.fleet.count) +
                       ", r_max=" + std::to_string(inst.depot.max_trips_per_drone) +
                       ", batches=" + std::to_string(batches) + ") exceeds brute-force caps n<=" +
                       std::to_string(cfg.max_activities) + ", m<=" + std::to_string(cfg.max_drones) +
                       ", r_max<=" + std::to_string(cfg.max_trips) + ", batches<=" + std::to_string(cfg.max_batches));
  }
}

namespace {

using Mask = std::uint32_t;

struct PlannedSlot {
  std::size_t activity;
  int batch;
  Seconds start;
  Seconds end;
};

struct TripEntry {
  bool feasible = false;
  std::vector<std::size_t> seq;
  SequenceTiming timing;
  Rational value;
  std::vector<PlannedSlot> slots;
  std::uint64_t orders = 0;
};

// Best on-board/on-time value of one trip's batches on a single machine.
//
// Slots are processed in some order; for a fixed order the left-shifted
// schedule (each batch starts at max(availability, previous end)) gives
// every batch its earliest possible end. Value only depends on whether each
// end is <= deadline and <= landing, so it never gets worse by left-shifting
// and enumerating orders with left-shifted starts is exhaustive. Enumerating
// every prefix of every order also covers every batch-prefix choice.
class BatchSearch {
public:
  BatchSearch(const PreparedInstance& inst, const std::vector<std::size_t>& seq, Seconds landing, Seconds max_compute)
      : inst_(inst), landing_(landing), max_compute_(max_compute) {
    for (std::size_t a : seq) {
      const BatchSet& b = inst.batches(a);
      if (b.per_batch_runtime == 0) {
        // free batches: on time at their availability
        for (int k = 1; k <= b.count; ++k) fixed_.push_back({a, k, b.available_at(k), b.available_at(k)});
        fixed_value_ += (inst.onboard_per_batch(a) + inst.ontime_per_batch(a)) * Rational(b.count);
        continue;
      }
      jobs_.push_back(a);
    }
    counts_.assign(jobs_.size(), 0);
    for (std::size_t j = 0; j < jobs_.size(); ++j) {
      const std::size_t a = jobs_[j];
      remaining_ += (inst.onboard_per_batch(a) + inst.ontime_per_batch(a)) * Rational(inst.batches(a).count);
    }
  }

  void run() {
    best_value_ = Rational(0);
    best_path_.clear();
    dfs(std::numeric_limits<Seconds>::min(), 0, Rational(0));
  }

  Rational value() const { return fixed_value_ + best_value_; }
  std::uint64_t nodes() const { return nodes_; }

  std::vector<PlannedSlot> slots() const {
    std::vector<PlannedSlot> out = fixed_;
    out.insert(out.end(), best_path_.begin(), best_path_.end());
    return out;
  }

private:
  void dfs(Seconds cursor, Seconds used, const Rational& value) {
    ++nodes_;
    if (value > best_value_) {
      best_value_ = value;
      best_path_ = path_;
    }
    if (!(value + remaining_ > best_value_)) return;

    for (std::size_t j = 0; j < jobs_.size(); ++j) {
      const std::size_t a = jobs_[j];
      const BatchSet& b = inst_.batches(a);
      if (counts_[j] == b.count) continue;
      const int k = counts_[j] + 1;
      const Seconds start = std::max(b.available_at(k), cursor);
      const Seconds end = start + b.per_batch_runtime;
      if (end > landing_ || used + b.per_batch_runtime > max_compute_) continue;
      const Rational full = inst_.onboard_per_batch(a) + inst_.ontime_per_batch(a);
      const Rational gain = end <= inst_.activity(a).deadline ? full : inst_.onboard_per_batch(a);

      counts_[j] = k;
      remaining_ -= full;
      path_.push_back({a, k, start, end});
      dfs(end, used + b.per_batch_runtime, value + gain);
      path_.pop_back();
      remaining_ += full;
      counts_[j] = k - 1;
    }
  }

  const PreparedInstance& inst_;
  Seconds landing_;
  Seconds max_compute_;
  std::vector<std::size_t> jobs_;
  std::vector<int> counts_;
  std::vector<PlannedSlot> fixed_;
  Rational fixed_value_;
  Rational remaining_;
  std::vector<PlannedSlot> path_;
  std::vector<PlannedSlot> best_path_;
  Rational best_value_;
  std::uint64_t nodes_ = 0;
};

std::vector<std::size_t> members(const PreparedInstance& inst, Mask mask) {
  std::vector<std::size_t> seq;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (mask & (Mask{1} << i)) seq.push_back(i);
  }
  std::sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) {
    const Activity& x = inst.activity(a);
    const Activity& y = inst.activity(b);
    return x.t_start != y.t_start ? x.t_start < y.t_start : x.id < y.id;
  });
  return seq;
}

TripEntry evaluate_trip(const PreparedInstance& inst, Mask mask, Joules budget) {
  TripEntry e;
  e.seq = members(inst, mask);
  e.timing = sequence_timing(inst, e.seq);
  const Joules flying = fly_hover_energy(e.timing, inst.fleet());
  if (!e.timing.in_time || e.timing.landing > inst.depot().mission_horizon || flying > budget) return e;
  e.feasible = true;

  const std::int64_t eps_c = inst.fleet().compute_power;
  const Seconds max_compute = eps_c > 0 ? (budget - flying) / eps_c : std::numeric_limits<Seconds>::max();
  BatchSearch search(inst, e.seq, e.timing.landing, max_compute);
  search.run();
  for (std::size_t a : e.seq) e.value += inst.activity(a).gamma_capture;
  e.value += search.value();
  e.slots = search.slots();
  e.orders = search.nodes();
  return e;
}

// Best way for one drone to fly a set of activities: split the time-sorted
// set into at most r_max consecutive trips that do not overlap.
struct DroneBest {
  bool feasible = false;
  Rational value;
  std::vector<Mask> trips;
};

DroneBest best_split(const PreparedInstance& inst, const std::vector<TripEntry>& table, Mask mask, int r_max) {
  DroneBest best;
  if (mask == 0) {
    best.feasible = true;
    return best;
  }
  const std::vector<std::size_t> seq = members(inst, mask);
  std::vector<Mask> blocks;

  auto recurse = [&](auto&& self, std::size_t from, Seconds free_from, const Rational& value) -> void {
    if (from == seq.size()) {
      if (!best.feasible || value > best.value) {
        best.feasible = true;
        best.value = value;
        best.trips = blocks;
      }
      return;
    }
    if (static_cast<int>(blocks.size()) == r_max) return;
    Mask block = 0;
    for (std::size_t to = from; to < seq.size(); ++to) {
      block |= Mask{1} << seq[to];
      const TripEntry& e = table[block];
      if (!e.feasible) continue;  // a later cut may still work: in-time depends on the first stop
      if (e.timing.takeoff < free_from) continue;
      blocks.push_back(block);
      self(self, to + 1, e.timing.landing, value + e.value);
      blocks.pop_back();
    }
  };
  recurse(recurse, 0, std::numeric_limits<Seconds>::min(), Rational(0));
  return best;
}

struct Labelling {
  bool found = false;
  Rational value;
  std::uint64_t code = 0;

  bool better_than(const Labelling& o) const {
    if (!found) return false;
    if (!o.found) return true;
    if (value != o.value) return value > o.value;
    return code < o.code;
  }
};

Labelling evaluate_labelling(std::uint64_t code, std::size_t n, int m, const std::vector<DroneBest>& drone_best,
                             std::vector<Mask>& masks) {
  masks.assign(static_cast<std::size_t>(m), 0);
  std::uint64_t rest = code;
  const auto base = static_cast<std::uint64_t>(m + 1);
  for (std::size_t i = n; i-- > 0;) {
    const auto label = static_cast<int>(rest % base);
    rest /= base;
    if (label > 0) masks[static_cast<std::size_t>(label - 1)] |= Mask{1} << i;
  }
  Labelling out;
  out.code = code;
  for (Mask mk : masks) {
    const DroneBest& d = drone_best[mk];
    if (!d.feasible) return out;
    out.value += d.value;
  }
  out.found = true;
  return out;
}

OptResult solve(const ProblemInstance& problem, const BruteForceConfig& cfg, double reserve, bool parallel) {
  check_caps(problem, cfg);
  if (problem.activities.size() > 24) throw CapsExceeded("brute force is limited to 24 activities");
  const PreparedInstance inst(problem);
  const std::size_t n = inst.size();
  const int m = inst.fleet().count;
  const Joules budget = energy_budget(inst.fleet().battery, reserve);
  const Mask full = (Mask{1} << n) - 1;
  const auto subsets = static_cast<std::int64_t>(full) + 1;

  std::vector<TripEntry> table(static_cast<std::size_t>(subsets));
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t mk = 1; mk < subsets; ++mk) {
      table[static_cast<std::size_t>(mk)] = evaluate_trip(inst, static_cast<Mask>(mk), budget);
    }
  } else {
    for (std::int64_t mk = 1; mk < subsets; ++mk) {
      table[static_cast<std::size_t>(mk)] = evaluate_trip(inst, static_cast<Mask>(mk), budget);
    }
  }

  std::vector<DroneBest> drone_best(static_cast<std::size_t>(subsets));
  for (std::int64_t mk = 0; mk < subsets; ++mk) {
    drone_best[static_cast<std::size_t>(mk)] =
        best_split(inst, table, static_cast<Mask>(mk), inst.depot().max_trips_per_drone);
  }

  std::uint64_t labellings = 1;
  for (std::size_t i = 0; i < n; ++i) labellings *= static_cast<std::uint64_t>(m + 1);

  Labelling best;
  if (parallel) {
#pragma omp parallel
    {
      Labelling local;
      std::vector<Mask> masks;
#pragma omp for schedule(static) nowait
      for (std::int64_t code = 0; code < static_cast<std::int64_t>(labellings); ++code) {
        const Labelling cand = evaluate_labelling(static_cast<std::uint64_t>(code), n, m, drone_best, masks);
        if (cand.better_than(local)) local = cand;
      }
#pragma omp critical(msp_exact_reduce)
      if (local.better_than(best)) best = local;
    }
  } else {
    std::vector<Mask> masks;
    for (std::uint64_t code = 0; code < labellings; ++code) {
      const Labelling cand = evaluate_labelling(code, n, m, drone_best, masks);
      if (cand.better_than(best)) best = cand;
    }
  }
  // dropping everything is always feasible, so `best` is set

  OptResult out;
  out.utility = best.value;
  std::vector<Mask> masks;
  evaluate_labelling(best.code, n, m, drone_best, masks);
  out.schedule.drones.resize(static_cast<std::size_t>(m));
  Mask used = 0;
  for (int d = 0; d < m; ++d) {
    DroneMission& mission = out.schedule.drones[static_cast<std::size_t>(d)];
    const DroneBest& plan = drone_best[masks[static_cast<std::size_t>(d)]];
    for (std::size_t r = 0; r < plan.trips.size(); ++r) {
      const TripEntry& e = table[plan.trips[r]];
      mission.trips.push_back(make_trip(inst, e.seq, d, static_cast<int>(r)));
      for (const PlannedSlot& s : e.slots) {
        mission.slots.push_back({inst.activity(s.activity).id, s.batch, s.start, s.end});
      }
      used |= plan.trips[r];
    }
    std::sort(mission.slots.begin(), mission.slots.end(), [](const ComputeSlot& a, const ComputeSlot& b) {
      if (a.start != b.start) return a.start < b.start;
      if (a.end != b.end) return a.end < b.end;
      return a.activity != b.activity ? a.activity < b.activity : a.batch < b.batch;
    });
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(used & (Mask{1} << i))) out.schedule.dropped.push_back(inst.activity(i).id);
  }
  std::sort(out.schedule.dropped.begin(), out.schedule.dropped.end());
  for (const TripEntry& e : table) {
    if (e.feasible) ++out.trips_evaluated;
    out.batch_orders += e.orders;
  }
  return out;
}

}  // namespace

OptResult brute_force_opt(const ProblemInstance& inst, const BruteForceConfig& cfg, double reserve) {
  return solve(inst, cfg, reserve, true);
}

OptResult brute_force_opt_serial(const ProblemInstance& inst, const BruteForceConfig& cfg, double reserve) {
  return solve(inst, cfg, reserve, false);
}

}  // namespace msp
