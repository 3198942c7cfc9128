#pragma once

// Batch-to-slot placement on one drone's compute timeline: first-fit default
// assignment, the Test-and-Swap repair pass, and the better of the two.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "msp/model.hpp"
#include "msp/schedule.hpp"

namespace msp {

// What the timeline needs to know about an activity whose batches it hosts.
struct BatchOwner {
  std::size_t activity = 0;  // index into the instance
  ActivityId id = 0;
  int trip = 0;              // capturing trip on this drone
  Seconds runtime = 0;       // per-batch rho
  Seconds deadline = 0;
  std::vector<Seconds> available;
  Rational onboard_value;    // gamma_bar / q
  Rational ontime_value;     // gamma_bbar / q
  int planned = 0;           // batches eligible for placement (energy-bounded prefix)

  static BatchOwner from_instance(const PreparedInstance& inst, std::size_t activity, int trip, int planned);
};

struct Interval {
  Seconds start = 0;
  Seconds end = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Occupied compute slots of one drone as disjoint half-open intervals,
// indexed by start time. Zero-length slots (kappa = 0) never conflict.
class SlotTimeline {
public:
  struct Occupant {
    std::size_t activity;
    int batch;
    Seconds start;
    Seconds end;
  };

  explicit SlotTimeline(int drone = 0) : drone_(drone) {}

  int drone() const { return drone_; }

  int add_trip(Seconds takeoff, Seconds landing);
  void set_landing(int trip, Seconds landing);
  std::size_t trip_count() const { return trips_.size(); }
  const Interval& trip(int index) const { return trips_.at(static_cast<std::size_t>(index)); }

  void register_owner(BatchOwner owner);
  bool has_owner(std::size_t activity) const { return owners_.count(activity) != 0; }
  const BatchOwner& owner(std::size_t activity) const { return owners_.at(activity); }
  Seconds landing_of(std::size_t activity) const { return trip(owner(activity).trip).end; }

  bool is_free(Seconds start, Seconds end) const;
  // Earliest start s >= lo with [s, s + len) free and s + len <= hi.
  std::optional<Seconds> earliest_fit(Seconds lo, Seconds hi, Seconds len) const;
  // Maximal free sub-intervals of [lo, hi) in increasing start order.
  std::vector<Interval> free_gaps(Seconds lo, Seconds hi) const;
  // Occupants intersecting [lo, hi), increasing start (ties: activity id, batch).
  std::vector<Occupant> overlapping(Seconds lo, Seconds hi) const;

  void insert(std::size_t activity, int batch, Seconds start);
  void erase(std::size_t activity, int batch);
  // Removes batch and every later batch of the activity.
  void erase_from(std::size_t activity, int batch);
  std::optional<Seconds> start_of(std::size_t activity, int batch) const;
  bool is_on_time(std::size_t activity, int batch) const;
  int scheduled_batches(std::size_t activity) const;

  Rational slot_value(std::size_t activity, Seconds end) const;
  Rational utility() const;
  Seconds compute_in_trip(int trip) const;
  std::size_t size() const { return where_.size(); }

  // Slots sorted by start, with activity ids.
  std::vector<ComputeSlot> slots() const;
  std::vector<Occupant> occupants() const;

private:
  using Key = std::pair<std::size_t, int>;

  int drone_;
  std::vector<Interval> trips_;
  std::map<std::size_t, BatchOwner> owners_;
  std::map<Seconds, Occupant> busy_;  // non-empty slots keyed by start
  std::map<Key, Occupant> where_;     // every slot, including zero-length
};

// Preferred interval P = [available_k, deadline), schedulable interval
// S = [deadline, landing) and the free part Q of P on the current timeline.
struct BatchWindows {
  Interval preferred;
  Interval schedulable;
  std::vector<Interval> free_preferred;
};

BatchWindows batch_windows(const SlotTimeline& tl, std::size_t activity, int batch);

struct AssignOutcome {
  std::vector<int> placed;
  std::vector<int> unscheduled;
};

// First-fit in Q, else first-fit in S, batch by batch in index order; a
// batch that fits nowhere leaves it and all later batches unscheduled.
AssignOutcome default_assign(SlotTimeline& tl, std::size_t activity);

// One repair pass over batches that miss their deadline, in increasing
// start order. A move is kept only if it strictly raises the utility of
// the timeline. Returns the number of accepted moves.
int test_and_swap(SlotTimeline& tl);

enum class AssignmentChoice { kDefault, kTestAndSwap };

// Default assignment, then Test-and-Swap on a copy; keeps the higher-utility
// timeline (ties keep the default).
AssignmentChoice best_assignment(SlotTimeline& tl, std::size_t activity);

}  // namespace msp
