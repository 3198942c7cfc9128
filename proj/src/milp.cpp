#include "msp/milp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace msp {

std::map<std::string, std::size_t> MilpModel::family_counts() const {
  std::map<std::string, std::size_t> out;
  for (const LinearConstraint& c : constraints) ++out[c.family];
  return out;
}

std::size_t MilpModel::count_variables(const std::string& prefix) const {
  const std::string head = prefix + "_";
  return static_cast<std::size_t>(std::count_if(variables.begin(), variables.end(), [&](const MilpVariable& v) {
    return v.name.compare(0, head.size(), head) == 0;
  }));
}

namespace {

std::string join(std::initializer_list<std::int64_t> parts) {
  std::string s;
  for (std::int64_t p : parts) {
    s += '_';
    s += std::to_string(p);
  }
  return s;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  const __int128 l = static_cast<__int128>(a / std::gcd(a, b)) * b;
  if (l > std::numeric_limits<std::int64_t>::max()) throw MspError("emit_milp: objective scale overflows");
  return static_cast<std::int64_t>(l);
}

std::int64_t scaled(const Rational& r, std::int64_t scale) {
  const Rational s = r * Rational(scale);
  if (!s.is_integer()) throw MspError("emit_milp: objective coefficient is not integral after scaling");
  return s.num();
}

class Builder {
public:
  Builder(const ProblemInstance& problem, const MilpLimits& limits)
      : inst_(problem), n_(inst_.size()), m_(problem.fleet.count), r_(problem.depot.max_trips_per_drone) {
    q_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) q_[i] = inst_.batches(i).count;

    std::size_t sum_q = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      sum_q += static_cast<std::size_t>(q_[i]);
      for (std::size_t a = 0; a < n_; ++a) {
        if (a != i) pairs += static_cast<std::size_t>(q_[i] * q_[a]);
      }
    }
    const auto mr = static_cast<std::size_t>(m_) * static_cast<std::size_t>(r_);
    const std::size_t vars = (n_ + 1) * n_ * mr + 2 * sum_q * mr + pairs + 2 * sum_q + 2 * mr;
    if (vars > limits.max_variables) {
      throw MspError("emit_milp: model needs " + std::to_string(vars) + " variables, limit is " +
                     std::to_string(limits.max_variables));
    }
  }

  MilpModel build() {
    compute_constants();
    declare_variables();
    objective();
    routing();
    batches();
    energy();
    return std::move(model_);
  }

private:
  // vertex v: 0 depot, i + 1 activity i
  Seconds flight(std::size_t u, std::size_t v) const {
    if (u == 0) return inst_.flight_from_depot(v - 1);
    if (v == 0) return inst_.flight_to_depot(u - 1);
    return inst_.flight_between(u - 1, v - 1);
  }

  static std::string x(std::size_t u, std::size_t v, int k, int l) {
    return "x" + join({static_cast<std::int64_t>(u), static_cast<std::int64_t>(v), k, l});
  }
  static std::string y(std::size_t i, int g, int k, int l) {
    return "y" + join({static_cast<std::int64_t>(i + 1), g, k, l});
  }
  static std::string z(std::size_t i, int g, int k, int l) {
    return "z" + join({static_cast<std::int64_t>(i + 1), g, k, l});
  }
  static std::string w(std::size_t i, int g, std::size_t a, int h) {
    return "w" + join({static_cast<std::int64_t>(i + 1), g, static_cast<std::int64_t>(a + 1), h});
  }
  static std::string th(std::size_t i, int g) { return "th" + join({static_cast<std::int64_t>(i + 1), g}); }
  static std::string thb(std::size_t i, int g) { return "thb" + join({static_cast<std::int64_t>(i + 1), g}); }
  static std::string landing(int k, int l) { return "L" + join({k, l}); }
  static std::string active(int k, int l) { return "v" + join({k, l}); }

  void compute_constants() {
    const Seconds horizon = inst_.depot().mission_horizon;
    Seconds latest = horizon;
    Seconds total_runtime = 0;
    Seconds longest_out = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      latest = std::max(latest, inst_.activity(i).deadline);
      total_runtime += inst_.batches(i).per_batch_runtime * q_[i];
      longest_out = std::max(longest_out, inst_.flight_from_depot(i));
    }
    // batches that are not processed can always be parked, one after the
    // other, after every deadline and the horizon
    time_cap_ = latest + total_runtime;
    // covers theta_bar - theta and landing - (t - F) in the sequencing rows
    model_.big_m = time_cap_ + longest_out + 1;

    std::int64_t scale = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      const Activity& a = inst_.activity(i);
      for (const Rational& r : {a.gamma_capture, inst_.onboard_per_batch(i), inst_.ontime_per_batch(i)}) {
        scale = checked_lcm(scale, r.den());
      }
    }
    model_.objective_scale = scale;
  }

  void binary(const std::string& name) { model_.variables.push_back({name, true, 0, 1}); }
  void continuous(const std::string& name, std::int64_t lo, std::int64_t hi) {
    model_.variables.push_back({name, false, lo, hi});
  }

  void declare_variables() {
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t u = 0; u <= n_; ++u) {
          for (std::size_t v = 0; v <= n_; ++v) {
            if (u != v) binary(x(u, v, k, l));
          }
        }
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (int g = 0; g < q_[i]; ++g) binary(y(i, g, k, l));
        }
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (int g = 0; g < q_[i]; ++g) binary(z(i, g, k, l));
        }
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t a = 0; a < n_; ++a) {
        if (a == i) continue;
        for (int g = 0; g < q_[i]; ++g) {
          for (int h = 0; h < q_[a]; ++h) binary(w(i, g, a, h));
        }
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) binary(active(k, l));
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (int g = 0; g < q_[i]; ++g) {
        continuous(th(i, g), 0, time_cap_);
        continuous(thb(i, g), 0, time_cap_);
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) continuous(landing(k, l), 0, inst_.depot().mission_horizon);
    }
  }

  void add(const std::string& family, const std::string& suffix, std::vector<LinearTerm> terms, Sense sense,
           std::int64_t rhs) {
    model_.constraints.push_back({family, family + suffix, std::move(terms), sense, rhs});
  }

  // sum over out-edges of vertex u on (k, l), with coefficient c
  void out_edges(std::vector<LinearTerm>& terms, std::size_t u, int k, int l, std::int64_t c = 1) const {
    for (std::size_t v = 0; v <= n_; ++v) {
      if (v != u) terms.push_back({c, x(u, v, k, l)});
    }
  }

  void objective() {
    const std::int64_t s = model_.objective_scale;
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t i = 0; i < n_; ++i) {
          const std::int64_t gamma = scaled(inst_.activity(i).gamma_capture, s);
          if (gamma != 0) out_edges(model_.objective, i + 1, k, l, gamma);
          const std::int64_t onboard = scaled(inst_.onboard_per_batch(i), s);
          const std::int64_t ontime = scaled(inst_.ontime_per_batch(i), s);
          for (int g = 0; g < q_[i]; ++g) {
            if (onboard != 0) model_.objective.push_back({onboard, z(i, g, k, l)});
            if (ontime != 0) model_.objective.push_back({ontime, y(i, g, k, l)});
          }
        }
      }
    }
  }

  void routing() {
    const std::int64_t big_m = model_.big_m;
    const auto id = [](std::size_t v) { return static_cast<std::int64_t>(v); };

    for (std::size_t i = 0; i < n_; ++i) {
      std::vector<LinearTerm> t;
      for (int k = 1; k <= m_; ++k) {
        for (int l = 1; l <= r_; ++l) out_edges(t, i + 1, k, l);
      }
      add("C1", join({id(i + 1)}), std::move(t), Sense::kLe, 1);
    }
    if (n_ == 0) return;  // no waypoints, no trips

    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        std::vector<LinearTerm> t;
        out_edges(t, 0, k, l);
        for (std::size_t v = 1; v <= n_; ++v) t.push_back({-1, x(v, 0, k, l)});
        add("C2", join({k, l}), std::move(t), Sense::kEq, 0);
      }
    }
    // the trip is active iff it leaves the depot; a visit needs an active
    // trip and an active trip visits something
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        std::vector<LinearTerm> dep;
        out_edges(dep, 0, k, l);
        dep.push_back({-1, active(k, l)});
        add("C3", "_dep" + join({k, l}), std::move(dep), Sense::kEq, 0);
        for (std::size_t i = 0; i < n_; ++i) {
          std::vector<LinearTerm> vis;
          out_edges(vis, i + 1, k, l);
          vis.push_back({-1, active(k, l)});
          add("C3", "_vis" + join({id(i + 1), k, l}), std::move(vis), Sense::kLe, 0);
        }
        std::vector<LinearTerm> act{{1, active(k, l)}};
        for (std::size_t i = 0; i < n_; ++i) out_edges(act, i + 1, k, l, -1);
        add("C3", "_act" + join({k, l}), std::move(act), Sense::kLe, 0);
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t j = 1; j <= n_; ++j) {
          std::vector<LinearTerm> t;
          for (std::size_t u = 0; u <= n_; ++u) {
            if (u != j) t.push_back({1, x(u, j, k, l)});
          }
          out_edges(t, j, k, l, -1);
          add("C4", join({id(j), k, l}), std::move(t), Sense::kEq, 0);
        }
      }
    }
    for (std::size_t j = 1; j <= n_; ++j) {
      const std::int64_t c = inst_.activity(j - 1).t_start - flight(0, j);
      std::vector<LinearTerm> t;
      for (int k = 1; k <= m_; ++k) {
        for (int l = 1; l <= r_; ++l) t.push_back({c, x(0, j, k, l)});
      }
      add("C5", join({id(j)}), std::move(t), Sense::kGe, 0);
    }
    for (std::size_t i = 1; i <= n_; ++i) {
      for (std::size_t j = 1; j <= n_; ++j) {
        if (i == j) continue;
        const std::int64_t c = inst_.activity(j - 1).t_start - inst_.activity(i - 1).t_end - flight(i, j);
        std::vector<LinearTerm> t;
        for (int k = 1; k <= m_; ++k) {
          for (int l = 1; l <= r_; ++l) t.push_back({c, x(i, j, k, l)});
        }
        add("C6", join({id(i), id(j)}), std::move(t), Sense::kGe, 0);
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        std::vector<LinearTerm> t{{1, landing(k, l)}};
        for (std::size_t i = 1; i <= n_; ++i) {
          t.push_back({-(inst_.activity(i - 1).t_end + flight(i, 0)), x(i, 0, k, l)});
        }
        add("C7", join({k, l}), std::move(t), Sense::kEq, 0);
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        add("C8", join({k, l}), {{1, landing(k, l)}}, Sense::kLe, inst_.depot().mission_horizon);
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (int l2 = l + 1; l2 <= r_; ++l2) {
          for (std::size_t j = 1; j <= n_; ++j) {
            const std::int64_t takeoff = inst_.activity(j - 1).t_start - flight(0, j);
            add("SEQ", join({k, l, l2, id(j)}), {{1, landing(k, l)}, {big_m, x(0, j, k, l2)}}, Sense::kLe,
                takeoff + big_m);
          }
        }
      }
    }
  }

  void batches() {
    const std::int64_t big_m = model_.big_m;
    const auto id = [](std::size_t i) { return static_cast<std::int64_t>(i + 1); };

    for (std::size_t i = 0; i < n_; ++i) {
      const BatchSet& b = inst_.batches(i);
      for (int g = 0; g < q_[i]; ++g) {
        add("C9", join({id(i), g}), {{1, th(i, g)}}, Sense::kGe, b.available_at(g + 1));
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (int g = 0; g < q_[i]; ++g) {
        add("DUR", join({id(i), g}), {{1, thb(i, g)}, {-1, th(i, g)}}, Sense::kEq,
            inst_.batches(i).per_batch_runtime);
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (int g = 0; g + 1 < q_[i]; ++g) {
        add("C10", join({id(i), g}), {{1, thb(i, g)}, {-1, th(i, g + 1)}}, Sense::kLe, 0);
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (std::size_t a = i + 1; a < n_; ++a) {
            for (int g = 0; g < q_[i]; ++g) {
              for (int h = 0; h < q_[a]; ++h) {
                std::vector<LinearTerm> t;
                out_edges(t, i + 1, k, l);
                out_edges(t, a + 1, k, l);
                t.push_back({-1, w(i, g, a, h)});
                t.push_back({-1, w(a, h, i, g)});
                add("C11", join({id(i), g, id(a), h, k, l}), std::move(t), Sense::kLe, 1);
              }
            }
          }
        }
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t a = 0; a < n_; ++a) {
        if (a == i) continue;
        for (int g = 0; g < q_[i]; ++g) {
          for (int h = 0; h < q_[a]; ++h) {
            add("C12", join({id(i), g, id(a), h}), {{1, thb(i, g)}, {-1, th(a, h)}, {big_m, w(i, g, a, h)}},
                Sense::kLe, big_m);
          }
        }
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (int g = 0; g < q_[i]; ++g) {
            std::vector<LinearTerm> vis{{1, y(i, g, k, l)}};
            out_edges(vis, i + 1, k, l, -1);
            add("C13", "_vis" + join({id(i), g, k, l}), std::move(vis), Sense::kLe, 0);
            add("C13", "_M" + join({id(i), g, k, l}), {{1, thb(i, g)}, {big_m, y(i, g, k, l)}}, Sense::kLe,
                inst_.activity(i).deadline + big_m);
          }
        }
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (int g = 0; g < q_[i]; ++g) {
            std::vector<LinearTerm> vis{{1, z(i, g, k, l)}};
            out_edges(vis, i + 1, k, l, -1);
            add("C14", "_vis" + join({id(i), g, k, l}), std::move(vis), Sense::kLe, 0);
            add("C14", "_M" + join({id(i), g, k, l}),
                {{1, thb(i, g)}, {-1, landing(k, l)}, {big_m, z(i, g, k, l)}}, Sense::kLe, big_m);
          }
        }
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (int g = 0; g < q_[i]; ++g) {
            add("YZ", join({id(i), g, k, l}), {{1, y(i, g, k, l)}, {-1, z(i, g, k, l)}}, Sense::kLe, 0);
          }
        }
      }
    }
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        for (std::size_t i = 0; i < n_; ++i) {
          for (int g = 0; g + 1 < q_[i]; ++g) {
            add("PFX", join({id(i), g, k, l}), {{1, z(i, g + 1, k, l)}, {-1, z(i, g, k, l)}}, Sense::kLe, 0);
          }
        }
      }
    }
  }

  void energy() {
    if (n_ == 0) return;
    const DroneSpec& spec = inst_.fleet();
    for (int k = 1; k <= m_; ++k) {
      for (int l = 1; l <= r_; ++l) {
        std::vector<LinearTerm> t;
        for (std::size_t u = 0; u <= n_; ++u) {
          for (std::size_t v = 0; v <= n_; ++v) {
            if (u == v) continue;
            // hover at v: from arrival to capture end; the first stop is
            // reached exactly at its capture start
            Seconds hover = 0;
            if (v != 0) {
              const Activity& to = inst_.activity(v - 1);
              hover = u == 0 ? to.t_end - to.t_start : to.t_end - (inst_.activity(u - 1).t_end + flight(u, v));
            }
            t.push_back({flight(u, v) * spec.fly_power + hover * spec.hover_power, x(u, v, k, l)});
          }
        }
        for (std::size_t i = 0; i < n_; ++i) {
          const std::int64_t c = inst_.batches(i).per_batch_runtime * spec.compute_power;
          for (int g = 0; g < q_[i]; ++g) t.push_back({c, z(i, g, k, l)});
        }
        add("C15", join({k, l}), std::move(t), Sense::kLe, spec.battery);
      }
    }
  }

  PreparedInstance inst_;
  std::size_t n_;
  int m_;
  int r_;
  std::vector<int> q_;
  Seconds time_cap_ = 0;
  MilpModel model_;
};

void write_terms(std::ostringstream& out, const std::vector<LinearTerm>& terms) {
  std::size_t on_line = 0;
  for (const LinearTerm& t : terms) {
    if (on_line == 8) {
      out << "\n   ";
      on_line = 0;
    }
    out << (t.coef < 0 ? " - " : " + ");
    const std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
    if (mag != 1) out << mag << ' ';
    out << t.var;
    ++on_line;
  }
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::kLe: return "<=";
    case Sense::kGe: return ">=";
    case Sense::kEq: return "=";
  }
  return "=";
}

}  // namespace

MilpModel build_milp(const ProblemInstance& inst, const MilpLimits& limits) { return Builder(inst, limits).build(); }

std::string write_lp(const MilpModel& model) {
  std::ostringstream out;
  out << "\\ msp mission scheduling model\n"
      << "\\ objective scale " << model.objective_scale << ": utility = objective / " << model.objective_scale << "\n"
      << "\\ big-M " << model.big_m << "\n"
      << "\\ C1  waypoint visited at most once\n"
      << "\\ C2  a trip that leaves the depot returns to it\n"
      << "\\ C3  trip active iff it leaves the depot; visits need an active trip; active trips visit\n"
      << "\\ C4  flow conservation at waypoints\n"
      << "\\ C5  reach the first waypoint by its capture start\n"
      << "\\ C6  reach the next waypoint by its capture start\n"
      << "\\ C7  landing time of each trip\n"
      << "\\ C8  landings within the mission horizon\n"
      << "\\ C9  batch captured before it is processed\n"
      << "\\ C10 batches of an activity processed in order\n"
      << "\\ C11 batches on the same drone and trip are ordered one way or the other\n"
      << "\\ C12 ordered batches do not overlap\n"
      << "\\ C13 on-time indicator: batch ends by the deadline\n"
      << "\\ C14 on-board indicator: batch ends by landing\n"
      << "\\ C15 flying + hovering + computing energy within the battery\n"
      << "\\ DUR slot length is the batch runtime\n"
      << "\\ YZ  on-time implies on-board\n"
      << "\\ PFX on-board batches form a prefix\n"
      << "\\ SEQ later trips of a drone take off after earlier ones land\n";

  out << "Maximize\n obj:";
  if (model.objective.empty()) {
    out << " 0";
  } else {
    write_terms(out, model.objective);
  }
  out << "\nSubject To\n";
  for (const LinearConstraint& c : model.constraints) {
    out << ' ' << c.name << ':';
    if (c.terms.empty()) {
      out << " 0";
    } else {
      write_terms(out, c.terms);
    }
    out << ' ' << sense_text(c.sense) << ' ' << c.rhs << '\n';
  }
  out << "Bounds\n";
  for (const MilpVariable& v : model.variables) {
    if (!v.binary) out << ' ' << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
  }
  out << "Binaries\n";
  std::size_t on_line = 0;
  for (const MilpVariable& v : model.variables) {
    if (!v.binary) continue;
    out << ' ' << v.name;
    if (++on_line == 10) {
      out << '\n';
      on_line = 0;
    }
  }
  if (on_line != 0) out << '\n';
  out << "End\n";
  return out.str();
}

}  // namespace msp
