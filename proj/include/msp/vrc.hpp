#pragma once

// Vehicle-Routing-Centric heuristic: temporal k-NN route construction,
// inter-route 2-opt*, split-score driven splitting into energy-feasible
// trips, utility-ordered drone assignment, then batch placement.

#include <vector>

#include "msp/energy.hpp"
#include "msp/model.hpp"
#include "msp/schedule.hpp"

namespace msp {

struct ScoreWeights {
  double energy = 1.0;
  double utility = 1.0;
  double compute = 1.0;
};

struct VrcParams {
  int knn_k = 3;
  double reserve = 0.0;
  ScoreWeights weights;
};

// Depot-bracketed route over activity indices; the depot legs are implicit.
struct RouteDraft {
  std::vector<std::size_t> stops;
  SequenceTiming timing;
  bool temporal_ok = true;  // in time everywhere and back before the horizon
  Joules energy = 0;        // flying + hovering

  static RouteDraft make(const PreparedInstance& inst, std::vector<std::size_t> stops);
};

struct SplitScore {
  double energy = 0.0;
  double utility = 0.0;
  double compute = 0.0;
  double total = 0.0;
};

std::vector<RouteDraft> build_routes_knn(const PreparedInstance& inst, int k);

// Inter-route tail exchanges until no move strictly lowers total flying +
// hovering energy while keeping both routes temporally feasible.
std::vector<RouteDraft> two_opt_star(const PreparedInstance& inst, std::vector<RouteDraft> drafts);

// Sequential partition of a route into maximal energy-feasible prefixes,
// as [first, last] stop positions.
std::vector<std::pair<std::size_t, std::size_t>> viable_trips(const PreparedInstance& inst,
                                                               const std::vector<std::size_t>& stops, Joules budget);

// One score per edge (stops[g], stops[g + 1]).
std::vector<SplitScore> score_edges(const PreparedInstance& inst, const std::vector<std::size_t>& stops,
                                    Joules budget, const ScoreWeights& weights = {});

struct SplitResult {
  std::vector<std::vector<std::size_t>> trips;
  std::vector<std::size_t> dropped;
};

SplitResult split_routes(const PreparedInstance& inst, const std::vector<RouteDraft>& drafts, Joules budget,
                         const ScoreWeights& weights = {});

MissionSchedule vrc_schedule(const ProblemInstance& inst, const VrcParams& params = {});

}  // namespace msp
