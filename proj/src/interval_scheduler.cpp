#include "msp/interval_scheduler.hpp"

#include <algorithm>
#include <iterator>
#include <limits>

namespace msp {

BatchOwner BatchOwner::from_instance(const PreparedInstance& inst, std::size_t activity, int trip, int planned) {
  const Activity& a = inst.activity(activity);
  const BatchSet& b = inst.batches(activity);
  BatchOwner o;
  o.activity = activity;
  o.id = a.id;
  o.trip = trip;
  o.runtime = b.per_batch_runtime;
  o.deadline = a.deadline;
  o.available = b.available;
  o.onboard_value = inst.onboard_per_batch(activity);
  o.ontime_value = inst.ontime_per_batch(activity);
  o.planned = std::clamp(planned, 0, b.count);
  return o;
}

int SlotTimeline::add_trip(Seconds takeoff, Seconds landing) {
  trips_.push_back({takeoff, landing});
  return static_cast<int>(trips_.size()) - 1;
}

void SlotTimeline::set_landing(int trip, Seconds landing) { trips_.at(static_cast<std::size_t>(trip)).end = landing; }

void SlotTimeline::register_owner(BatchOwner owner) {
  const std::size_t key = owner.activity;
  owners_.insert_or_assign(key, std::move(owner));
}

bool SlotTimeline::is_free(Seconds start, Seconds end) const {
  if (end <= start) return true;
  auto it = busy_.lower_bound(start);
  if (it != busy_.end() && it->first < end) return false;
  if (it != busy_.begin() && std::prev(it)->second.end > start) return false;
  return true;
}

std::optional<Seconds> SlotTimeline::earliest_fit(Seconds lo, Seconds hi, Seconds len) const {
  if (len <= 0) {
    if (lo <= hi) return lo;
    return std::nullopt;
  }
  Seconds cand = lo;
  auto it = busy_.upper_bound(cand);
  if (it != busy_.begin()) {
    const Occupant& before = std::prev(it)->second;
    cand = std::max(cand, before.end);
  }
  for (; it != busy_.end(); ++it) {
    if (cand + len > hi) return std::nullopt;
    if (it->first >= cand + len) return cand;
    cand = std::max(cand, it->second.end);
  }
  if (cand + len <= hi) return cand;
  return std::nullopt;
}

std::vector<Interval> SlotTimeline::free_gaps(Seconds lo, Seconds hi) const {
  std::vector<Interval> gaps;
  if (hi <= lo) return gaps;
  Seconds cursor = lo;
  auto it = busy_.upper_bound(lo);
  if (it != busy_.begin()) cursor = std::max(cursor, std::prev(it)->second.end);
  for (; it != busy_.end() && it->first < hi; ++it) {
    if (it->first > cursor) gaps.push_back({cursor, it->first});
    cursor = std::max(cursor, it->second.end);
  }
  if (cursor < hi) gaps.push_back({cursor, hi});
  return gaps;
}

std::vector<SlotTimeline::Occupant> SlotTimeline::overlapping(Seconds lo, Seconds hi) const {
  std::vector<Occupant> out;
  if (hi <= lo) return out;
  auto it = busy_.upper_bound(lo);
  if (it != busy_.begin() && std::prev(it)->second.end > lo) --it;
  for (; it != busy_.end() && it->first < hi; ++it) {
    if (it->second.end > lo) out.push_back(it->second);
  }
  return out;
}

void SlotTimeline::insert(std::size_t activity, int batch, Seconds start) {
  const BatchOwner& o = owner(activity);
  const Seconds end = start + o.runtime;
  if (!is_free(start, end)) throw MspError("SlotTimeline::insert: slot overlaps an occupied slot");
  const Key key{activity, batch};
  if (where_.count(key) != 0) throw MspError("SlotTimeline::insert: batch already placed");
  const Occupant occ{activity, batch, start, end};
  where_.emplace(key, occ);
  if (end > start) busy_.emplace(start, occ);
}

void SlotTimeline::erase(std::size_t activity, int batch) {
  auto it = where_.find({activity, batch});
  if (it == where_.end()) return;
  if (it->second.end > it->second.start) busy_.erase(it->second.start);
  where_.erase(it);
}

void SlotTimeline::erase_from(std::size_t activity, int batch) {
  auto it = where_.lower_bound({activity, batch});
  while (it != where_.end() && it->first.first == activity) {
    if (it->second.end > it->second.start) busy_.erase(it->second.start);
    it = where_.erase(it);
  }
}

std::optional<Seconds> SlotTimeline::start_of(std::size_t activity, int batch) const {
  auto it = where_.find({activity, batch});
  if (it == where_.end()) return std::nullopt;
  return it->second.start;
}

bool SlotTimeline::is_on_time(std::size_t activity, int batch) const {
  auto it = where_.find({activity, batch});
  return it != where_.end() && it->second.end <= owner(activity).deadline;
}

int SlotTimeline::scheduled_batches(std::size_t activity) const {
  auto lo = where_.lower_bound({activity, std::numeric_limits<int>::min()});
  auto hi = where_.lower_bound({activity + 1, std::numeric_limits<int>::min()});
  return static_cast<int>(std::distance(lo, hi));
}

Rational SlotTimeline::slot_value(std::size_t activity, Seconds end) const {
  const BatchOwner& o = owner(activity);
  if (end > landing_of(activity)) return Rational(0);
  return end <= o.deadline ? o.onboard_value + o.ontime_value : o.onboard_value;
}

Rational SlotTimeline::utility() const {
  Rational total;
  for (const auto& [key, occ] : where_) total += slot_value(occ.activity, occ.end);
  return total;
}

Seconds SlotTimeline::compute_in_trip(int trip) const {
  Seconds total = 0;
  for (const auto& [key, occ] : where_) {
    if (owner(occ.activity).trip == trip) total += occ.end - occ.start;
  }
  return total;
}

std::vector<SlotTimeline::Occupant> SlotTimeline::occupants() const {
  std::vector<Occupant> out;
  out.reserve(where_.size());
  for (const auto& [key, occ] : where_) out.push_back(occ);
  std::sort(out.begin(), out.end(), [&](const Occupant& a, const Occupant& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    const ActivityId ia = owner(a.activity).id;
    const ActivityId ib = owner(b.activity).id;
    return ia != ib ? ia < ib : a.batch < b.batch;
  });
  return out;
}

std::vector<ComputeSlot> SlotTimeline::slots() const {
  std::vector<ComputeSlot> out;
  for (const Occupant& o : occupants()) out.push_back({owner(o.activity).id, o.batch, o.start, o.end});
  return out;
}

BatchWindows batch_windows(const SlotTimeline& tl, std::size_t activity, int batch) {
  const BatchOwner& o = tl.owner(activity);
  const Seconds available = o.available.at(static_cast<std::size_t>(batch - 1));
  const Seconds landing = tl.landing_of(activity);
  BatchWindows w;
  w.preferred = {available, o.deadline};
  w.schedulable = {o.deadline, std::max(o.deadline, landing)};
  w.free_preferred = tl.free_gaps(available, std::min(o.deadline, landing));
  return w;
}

AssignOutcome default_assign(SlotTimeline& tl, std::size_t activity) {
  const BatchOwner& o = tl.owner(activity);
  const Seconds landing = tl.landing_of(activity);
  AssignOutcome out;

  const int first = tl.scheduled_batches(activity) + 1;
  Seconds prev_end = std::numeric_limits<Seconds>::min();
  if (first > 1) prev_end = *tl.start_of(activity, first - 1) + o.runtime;

  for (int k = first; k <= o.planned; ++k) {
    const Seconds lo = std::max(o.available[static_cast<std::size_t>(k - 1)], prev_end);
    std::optional<Seconds> fit = tl.earliest_fit(lo, std::min(o.deadline, landing), o.runtime);
    if (!fit) fit = tl.earliest_fit(std::max(lo, o.deadline), landing, o.runtime);
    if (!fit) {
      for (int j = k; j <= o.planned; ++j) out.unscheduled.push_back(j);
      break;
    }
    tl.insert(activity, k, *fit);
    out.placed.push_back(k);
    prev_end = *fit + o.runtime;
  }
  return out;
}

namespace {

// Start/end limits for re-placing `batch` given its neighbours in the
// activity's own batch chain.
struct ChainBounds {
  Seconds lo;
  Seconds hi;
};

ChainBounds chain_bounds(const SlotTimeline& tl, std::size_t activity, int batch) {
  const BatchOwner& o = tl.owner(activity);
  ChainBounds b{o.available[static_cast<std::size_t>(batch - 1)], tl.landing_of(activity)};
  if (batch > 1) {
    if (auto prev = tl.start_of(activity, batch - 1)) b.lo = std::max(b.lo, *prev + o.runtime);
  }
  if (auto next = tl.start_of(activity, batch + 1)) b.hi = std::min(b.hi, *next);
  return b;
}

bool rescue(SlotTimeline& tl, std::size_t activity, int batch) {
  const BatchOwner& o = tl.owner(activity);
  const Rational base = tl.utility();
  const ChainBounds own = chain_bounds(tl, activity, batch);
  const Seconds hi_on_time = std::min(own.hi, o.deadline);

  // a preferred slot may have opened up since the default pass
  {
    SlotTimeline cand = tl;
    cand.erase(activity, batch);
    if (auto fit = cand.earliest_fit(own.lo, hi_on_time, o.runtime)) {
      cand.insert(activity, batch, *fit);
      if (cand.utility() > base) {
        tl = std::move(cand);
        return true;
      }
    }
  }

  for (const SlotTimeline::Occupant& victim : tl.overlapping(own.lo, hi_on_time)) {
    if (victim.activity == activity) continue;
    const BatchOwner& vo = tl.owner(victim.activity);

    SlotTimeline cand = tl;
    cand.erase(victim.activity, victim.batch);
    cand.erase(activity, batch);
    auto fit = cand.earliest_fit(own.lo, hi_on_time, o.runtime);
    if (!fit) continue;
    cand.insert(activity, batch, *fit);

    const ChainBounds vb = chain_bounds(cand, victim.activity, victim.batch);
    std::optional<Seconds> vfit;
    if (victim.end > vo.deadline) {
      // victim also late: push it to its next free slot in S
      vfit = cand.earliest_fit(std::max(vb.lo, vo.deadline), vb.hi, vo.runtime);
    } else {
      vfit = cand.earliest_fit(vb.lo, std::min(vb.hi, vo.deadline), vo.runtime);
      if (!vfit) {
        // no room left in the victim's own P: higher per-batch utility keeps the slot
        if (!(o.onboard_value + o.ontime_value > vo.onboard_value + vo.ontime_value)) continue;
        vfit = cand.earliest_fit(std::max(vb.lo, vo.deadline), vb.hi, vo.runtime);
      }
    }
    if (vfit) {
      cand.insert(victim.activity, victim.batch, *vfit);
    } else {
      cand.erase_from(victim.activity, victim.batch + 1);
    }
    if (cand.utility() > base) {
      tl = std::move(cand);
      return true;
    }
  }
  return false;
}

}  // namespace

int test_and_swap(SlotTimeline& tl) {
  std::vector<std::pair<std::size_t, int>> late;
  for (const SlotTimeline::Occupant& occ : tl.occupants()) {
    if (occ.end > tl.owner(occ.activity).deadline) late.emplace_back(occ.activity, occ.batch);
  }
  int moves = 0;
  for (const auto& [activity, batch] : late) {
    if (!tl.start_of(activity, batch) || tl.is_on_time(activity, batch)) continue;
    if (rescue(tl, activity, batch)) ++moves;
  }
  return moves;
}

AssignmentChoice best_assignment(SlotTimeline& tl, std::size_t activity) {
  SlotTimeline by_default = tl;
  default_assign(by_default, activity);
  SlotTimeline swapped = by_default;
  test_and_swap(swapped);
  if (swapped.utility() > by_default.utility()) {
    tl = std::move(swapped);
    return AssignmentChoice::kTestAndSwap;
  }
  tl = std::move(by_default);
  return AssignmentChoice::kDefault;
}

}  // namespace msp
