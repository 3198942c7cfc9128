#pragma once

// MILP model of the mission scheduling problem in LP file format, for use
// with an external solver. Constraint families follow the usual C1..C15
// numbering; a few helper families close gaps in it:
//   DUR  theta_bar = theta + rho
//   YZ   on-time implies on-board (y <= z)
//   PFX  on-board batches form a prefix
//   SEQ  trip l2 > l of a drone takes off after trip l lands
//
// Variable names (1-based drones k and trips l, 0-based batches g):
//   x_i_j_k_l  drone k, trip l flies edge i -> j (vertex 0 is the depot)
//   y_i_g_k_l  batch g of activity i finishes by its deadline
//   z_i_g_k_l  batch g of activity i finishes before landing
//   w_i_g_a_h  batch (i,g) runs before batch (a,h)
//   th_i_g, thb_i_g  start and end of batch (i,g)
//   L_k_l      landing time, v_k_l trip in use
//
// The objective is multiplied by `objective_scale` so every coefficient is
// an integer: utility = objective / objective_scale.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "msp/model.hpp"

namespace msp {

struct LinearTerm {
  std::int64_t coef = 0;
  std::string var;
};

enum class Sense { kLe, kGe, kEq };

struct LinearConstraint {
  std::string family;
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLe;
  std::int64_t rhs = 0;
};

struct MilpVariable {
  std::string name;
  bool binary = true;
  std::int64_t lower = 0;
  std::int64_t upper = 1;
};

struct MilpModel {
  std::vector<MilpVariable> variables;
  std::vector<LinearTerm> objective;
  std::vector<LinearConstraint> constraints;
  std::int64_t objective_scale = 1;
  std::int64_t big_m = 0;

  std::map<std::string, std::size_t> family_counts() const;
  // variables whose name starts with `prefix` + "_"
  std::size_t count_variables(const std::string& prefix) const;
};

struct MilpLimits {
  std::size_t max_variables = 1'000'000;
};

// Throws MspError when the variable count would exceed the limit.
MilpModel build_milp(const ProblemInstance& inst, const MilpLimits& limits = {});

// Deterministic LP-format text.
std::string write_lp(const MilpModel& model);

inline std::string emit_milp(const ProblemInstance& inst, const MilpLimits& limits = {}) {
  return write_lp(build_milp(inst, limits));
}

}  // namespace msp
