#include "msp/vrc.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <tuple>

#include "msp/interval_scheduler.hpp"
#include "msp/jsc.hpp"

namespace msp {

namespace {

bool temporally_ok(const PreparedInstance& inst, const SequenceTiming& t) {
  return t.in_time && t.landing <= inst.depot().mission_horizon;
}

Joules segment_energy(const PreparedInstance& inst, const std::vector<std::size_t>& stops, std::size_t first,
                      std::size_t last) {
  std::span<const std::size_t> seg(stops.data() + first, last - first + 1);
  return fly_hover_energy(sequence_timing(inst, seg), inst.fleet());
}

Rational capture_utility(const PreparedInstance& inst, const std::vector<std::size_t>& stops, std::size_t first,
                         std::size_t last) {
  Rational u;
  for (std::size_t g = first; g <= last; ++g) u += inst.activity(stops[g]).gamma_capture;
  return u;
}

}  // namespace

RouteDraft RouteDraft::make(const PreparedInstance& inst, std::vector<std::size_t> stops) {
  RouteDraft r;
  r.stops = std::move(stops);
  r.timing = sequence_timing(inst, r.stops);
  r.temporal_ok = temporally_ok(inst, r.timing);
  r.energy = fly_hover_energy(r.timing, inst.fleet());
  return r;
}

std::vector<RouteDraft> build_routes_knn(const PreparedInstance& inst, int k) {
  if (k < 1) throw MspError("build_routes_knn: k must be at least 1");
  const std::size_t n = inst.size();
  const Seconds horizon = inst.depot().mission_horizon;
  std::vector<bool> used(n, false);
  std::size_t left = n;
  std::vector<RouteDraft> drafts;

  struct Candidate {
    double dist;
    ActivityId id;
    std::size_t index;
  };

  while (left > 0) {
    std::vector<std::size_t> route;
    std::vector<Candidate> cands;
    for (;;) {
      cands.clear();
      const Point3& here = route.empty() ? inst.depot().location : inst.activity(route.back()).waypoint;
      for (std::size_t c = 0; c < n; ++c) {
        if (used[c]) continue;
        const Activity& a = inst.activity(c);
        const Seconds arrival = route.empty() ? inst.flight_from_depot(c)
                                              : inst.activity(route.back()).t_end + inst.flight_between(route.back(), c);
        // from the depot "arrival" is the flight time, i.e. takeoff at t - F >= 0
        if (arrival > a.t_start) continue;
        if (a.t_end + inst.flight_to_depot(c) > horizon) continue;
        cands.push_back({distance(here, a.waypoint), a.id, c});
      }
      if (cands.empty()) break;
      const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), cands.size());
      std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                        [](const Candidate& x, const Candidate& y) {
                          return std::tie(x.dist, x.id) < std::tie(y.dist, y.id);
                        });
      const auto pick = std::min_element(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep),
                                         [&](const Candidate& x, const Candidate& y) {
                                           const Activity& ax = inst.activity(x.index);
                                           const Activity& ay = inst.activity(y.index);
                                           return std::tie(ax.t_start, ax.id) < std::tie(ay.t_start, ay.id);
                                         });
      route.push_back(pick->index);
      used[pick->index] = true;
      --left;
    }
    if (route.empty()) {
      // nothing reachable from the depot: park the earliest leftover alone
      std::size_t best = n;
      for (std::size_t c = 0; c < n; ++c) {
        if (used[c]) continue;
        if (best == n || std::tie(inst.activity(c).t_start, inst.activity(c).id) <
                             std::tie(inst.activity(best).t_start, inst.activity(best).id)) {
          best = c;
        }
      }
      route.push_back(best);
      used[best] = true;
      --left;
    }
    drafts.push_back(RouteDraft::make(inst, std::move(route)));
  }
  return drafts;
}

std::vector<RouteDraft> two_opt_star(const PreparedInstance& inst, std::vector<RouteDraft> drafts) {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t a = 0; a < drafts.size(); ++a) {
      for (std::size_t b = a + 1; b < drafts.size(); ++b) {
        const RouteDraft& ra = drafts[a];
        const RouteDraft& rb = drafts[b];
        if (!ra.temporal_ok || !rb.temporal_ok) continue;
        const Joules before = ra.energy + rb.energy;
        Joules best_saving = 0;
        std::size_t best_i = 0;
        std::size_t best_j = 0;

        for (std::size_t i = 0; i <= ra.stops.size(); ++i) {
          for (std::size_t j = 0; j <= rb.stops.size(); ++j) {
            // junction check before building anything
            if (i > 0 && j < rb.stops.size()) {
              const std::size_t from = ra.stops[i - 1];
              const std::size_t to = rb.stops[j];
              if (inst.activity(from).t_end + inst.flight_between(from, to) > inst.activity(to).t_start) continue;
            }
            if (j > 0 && i < ra.stops.size()) {
              const std::size_t from = rb.stops[j - 1];
              const std::size_t to = ra.stops[i];
              if (inst.activity(from).t_end + inst.flight_between(from, to) > inst.activity(to).t_start) continue;
            }
            left.assign(ra.stops.begin(), ra.stops.begin() + static_cast<std::ptrdiff_t>(i));
            left.insert(left.end(), rb.stops.begin() + static_cast<std::ptrdiff_t>(j), rb.stops.end());
            right.assign(rb.stops.begin(), rb.stops.begin() + static_cast<std::ptrdiff_t>(j));
            right.insert(right.end(), ra.stops.begin() + static_cast<std::ptrdiff_t>(i), ra.stops.end());
            const SequenceTiming tl = sequence_timing(inst, left);
            if (!temporally_ok(inst, tl)) continue;
            const SequenceTiming tr = sequence_timing(inst, right);
            if (!temporally_ok(inst, tr)) continue;
            const Joules after = fly_hover_energy(tl, inst.fleet()) + fly_hover_energy(tr, inst.fleet());
            if (before - after > best_saving) {
              best_saving = before - after;
              best_i = i;
              best_j = j;
            }
          }
        }

        if (best_saving > 0) {
          std::vector<std::size_t> new_a(ra.stops.begin(), ra.stops.begin() + static_cast<std::ptrdiff_t>(best_i));
          new_a.insert(new_a.end(), rb.stops.begin() + static_cast<std::ptrdiff_t>(best_j), rb.stops.end());
          std::vector<std::size_t> new_b(rb.stops.begin(), rb.stops.begin() + static_cast<std::ptrdiff_t>(best_j));
          new_b.insert(new_b.end(), ra.stops.begin() + static_cast<std::ptrdiff_t>(best_i), ra.stops.end());
          drafts[a] = RouteDraft::make(inst, std::move(new_a));
          drafts[b] = RouteDraft::make(inst, std::move(new_b));
          improved = true;
        }
      }
    }
    drafts.erase(std::remove_if(drafts.begin(), drafts.end(), [](const RouteDraft& r) { return r.stops.empty(); }),
                 drafts.end());
  }
  return drafts;
}

std::vector<std::pair<std::size_t, std::size_t>> viable_trips(const PreparedInstance& inst,
                                                               const std::vector<std::size_t>& stops, Joules budget) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t first = 0;
  while (first < stops.size()) {
    std::size_t last = first;
    while (last + 1 < stops.size() && segment_energy(inst, stops, first, last + 1) <= budget) ++last;
    out.emplace_back(first, last);
    first = last + 1;
  }
  return out;
}

std::vector<SplitScore> score_edges(const PreparedInstance& inst, const std::vector<std::size_t>& stops,
                                    Joules budget, const ScoreWeights& weights) {
  const std::size_t len = stops.size();
  std::vector<SplitScore> scores(len > 0 ? len - 1 : 0);
  if (len < 2) return scores;

  // energy and utility scores against the viable-trip partition
  const auto trips = viable_trips(inst, stops, budget);
  for (const auto& [first, last] : trips) {
    const Rational trip_utility = capture_utility(inst, stops, first, last);
    for (std::size_t g = first; g <= last && g + 1 < len; ++g) {
      SplitScore& s = scores[g];
      s.energy = std::min(1.0, static_cast<double>(segment_energy(inst, stops, first, g)) / static_cast<double>(budget));

      std::size_t reach = g + 1;
      while (reach + 1 < len && segment_energy(inst, stops, g + 1, reach + 1) <= budget) ++reach;
      if (!trip_utility.is_zero()) s.utility = (capture_utility(inst, stops, g + 1, reach) / trip_utility).to_double();
    }
  }

  // compute score: soft first-fit of every batch into its own preferred
  // interval as if the drone were idle, then count cross-activity overlaps
  struct Soft {
    std::size_t stop;
    Seconds start;
    Seconds end;
  };
  std::vector<Soft> soft;
  for (std::size_t g = 0; g < len; ++g) {
    const BatchSet& b = inst.batches(stops[g]);
    Seconds prev_end = b.available.front();
    for (int k = 1; k <= b.count; ++k) {
      const Seconds start = std::max(b.available_at(k), prev_end);
      soft.push_back({g, start, start + b.per_batch_runtime});
      prev_end = start + b.per_batch_runtime;
    }
  }
  std::vector<std::int64_t> overlaps(len, 0);
  for (const Soft& x : soft) {
    for (const Soft& y : soft) {
      if (x.stop != y.stop && x.start < y.end && y.start < x.end) {
        ++overlaps[x.stop];
        break;
      }
    }
  }
  const auto total_batches = static_cast<double>(soft.size());
  for (std::size_t g = 0; g + 1 < len; ++g) {
    SplitScore& s = scores[g];
    s.compute = total_batches > 0 ? static_cast<double>(overlaps[g]) / total_batches : 0.0;
    s.total = weights.energy * s.energy + weights.utility * s.utility + weights.compute * s.compute;
  }
  return scores;
}

namespace {

void split_recursive(const PreparedInstance& inst, std::vector<std::size_t> stops, Joules budget,
                     const ScoreWeights& weights, SplitResult& out) {
  if (stops.empty()) return;
  const SequenceTiming t = sequence_timing(inst, stops);
  if (temporally_ok(inst, t) && fly_hover_energy(t, inst.fleet()) <= budget) {
    out.trips.push_back(std::move(stops));
    return;
  }
  if (stops.size() == 1) {
    out.dropped.push_back(stops.front());
    return;
  }
  const auto scores = score_edges(inst, stops, budget, weights);
  std::size_t cut = 0;
  for (std::size_t g = 1; g < scores.size(); ++g) {
    if (scores[g].total > scores[cut].total) cut = g;
  }
  std::vector<std::size_t> head(stops.begin(), stops.begin() + static_cast<std::ptrdiff_t>(cut + 1));
  std::vector<std::size_t> tail(stops.begin() + static_cast<std::ptrdiff_t>(cut + 1), stops.end());
  split_recursive(inst, std::move(head), budget, weights, out);
  split_recursive(inst, std::move(tail), budget, weights, out);
}

}  // namespace

SplitResult split_routes(const PreparedInstance& inst, const std::vector<RouteDraft>& drafts, Joules budget,
                         const ScoreWeights& weights) {
  SplitResult out;
  for (const RouteDraft& d : drafts) split_recursive(inst, d.stops, budget, weights, out);
  return out;
}

MissionSchedule vrc_schedule(const ProblemInstance& problem, const VrcParams& params) {
  const PreparedInstance inst(problem);
  const DroneSpec& spec = inst.fleet();
  const Joules budget = energy_budget(spec.battery, params.reserve);

  std::vector<RouteDraft> drafts = build_routes_knn(inst, params.knn_k);
  drafts = two_opt_star(inst, std::move(drafts));
  SplitResult split = split_routes(inst, drafts, budget, params.weights);

  struct Candidate {
    std::vector<std::size_t> stops;
    SequenceTiming timing;
    Rational utility;
  };
  std::vector<Candidate> trips;
  trips.reserve(split.trips.size());
  for (auto& stops : split.trips) {
    Candidate c;
    c.timing = sequence_timing(inst, stops);
    c.utility = capture_utility(inst, stops, 0, stops.size() - 1);
    c.stops = std::move(stops);
    trips.push_back(std::move(c));
  }
  std::stable_sort(trips.begin(), trips.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.utility != y.utility) return x.utility > y.utility;
    if (x.timing.takeoff != y.timing.takeoff) return x.timing.takeoff < y.timing.takeoff;
    return inst.activity(x.stops.front()).id < inst.activity(y.stops.front()).id;
  });

  // first drone whose already-assigned trips leave the window free
  std::vector<std::vector<const Candidate*>> per_drone(static_cast<std::size_t>(spec.count));
  std::vector<std::size_t> dropped = std::move(split.dropped);
  for (const Candidate& c : trips) {
    bool placed = false;
    for (auto& mine : per_drone) {
      if (static_cast<int>(mine.size()) >= inst.depot().max_trips_per_drone) continue;
      const bool clash = std::any_of(mine.begin(), mine.end(), [&](const Candidate* o) {
        return c.timing.takeoff < o->timing.landing && o->timing.takeoff < c.timing.landing;
      });
      if (clash) continue;
      mine.push_back(&c);
      placed = true;
      break;
    }
    if (!placed) dropped.insert(dropped.end(), c.stops.begin(), c.stops.end());
  }

  MissionSchedule out;
  out.drones.resize(per_drone.size());
  for (std::size_t d = 0; d < per_drone.size(); ++d) {
    auto& mine = per_drone[d];
    std::sort(mine.begin(), mine.end(),
              [](const Candidate* x, const Candidate* y) { return x->timing.takeoff < y->timing.takeoff; });
    SlotTimeline timeline(static_cast<int>(d));
    for (std::size_t r = 0; r < mine.size(); ++r) {
      const Candidate& c = *mine[r];
      const int trip = timeline.add_trip(c.timing.takeoff, c.timing.landing);
      const Joules flying = fly_hover_energy(c.timing, spec);
      for (std::size_t a : c.stops) {
        const Joules spare = budget - flying - compute_energy(timeline.compute_in_trip(trip), spec);
        timeline.register_owner(
            BatchOwner::from_instance(inst, a, trip, affordable_batches(inst.batches(a), spare, spec)));
        best_assignment(timeline, a);
      }
      out.drones[d].trips.push_back(make_trip(inst, c.stops, static_cast<int>(d), static_cast<int>(r)));
    }
    out.drones[d].slots = timeline.slots();
  }
  for (std::size_t a : dropped) out.dropped.push_back(inst.activity(a).id);
  std::sort(out.dropped.begin(), out.dropped.end());
  return out;
}

}  // namespace msp
