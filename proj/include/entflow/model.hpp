#pragma once

// Coupling space of the XY chain
//
//   H = sum_i [ (1+gamma)/2 sx_i sx_{i+1} + (1-gamma)/2 sy_i sy_{i+1} + lambda sz_i ]
//
// plus an optional longitudinal field epsilon * sum_i sx_i that breaks the Z2
// symmetry (finite-chain solver only). gamma interpolates between the Ising
// chain (gamma = 1) and the XX chain (gamma = 0); the critical field is
// lambda* = 1, and |1 - lambda| measures how far a point sits along the
// renormalization flow away from it.

#include <cmath>
#include <string>
#include <vector>

#include "entflow/errors.hpp"

namespace entflow {

struct CouplingPoint {
  double gamma = 1.0;    // anisotropy
  double lambda = 0.0;   // transverse field, >= 0
  double epsilon = 0.0;  // longitudinal symmetry-breaking field, >= 0
};

inline CouplingPoint validate(const CouplingPoint& p) {
  if (!std::isfinite(p.gamma) || !std::isfinite(p.lambda) || !std::isfinite(p.epsilon))
    fail(ErrorCode::non_finite, "coupling point has a non-finite component");
  if (p.lambda < 0.0) fail(ErrorCode::negative_field, "lambda must be >= 0");
  if (p.epsilon < 0.0) fail(ErrorCode::negative_field, "epsilon must be >= 0");
  return p;
}

inline double flow_distance(const CouplingPoint& p) { return std::abs(1.0 - p.lambda); }

// The two relevant directions away from the critical field.
enum class Branch { above_critical, below_critical };

inline Branch branch_of(const CouplingPoint& p) {
  if (p.lambda > 1.0) return Branch::above_critical;
  if (p.lambda < 1.0) return Branch::below_critical;
  fail(ErrorCode::invalid_argument, "lambda = 1 lies on neither branch of the flow");
}

inline bool same_branch(const CouplingPoint& a, const CouplingPoint& b) {
  return branch_of(a) == branch_of(b);
}

// True when b lies strictly further along the flow than a. Both points must
// sit on the same branch.
inline bool further_along_flow(const CouplingPoint& a, const CouplingPoint& b) {
  if (!same_branch(a, b))
    fail(ErrorCode::invalid_argument, "flow ordering is only defined within one branch");
  return flow_distance(b) > flow_distance(a);
}

// Count of contiguous spins in a block.
struct BlockSize {
  int sites = 1;
};

inline BlockSize block_size(int sites) {
  if (sites < 1) fail(ErrorCode::invalid_argument, "block size must be >= 1");
  return BlockSize{sites};
}

// Occupation representation of a block's reduced state: one fermionic mode per
// site, each contributing a binary spectrum {q_j, 1-q_j} with
// 1 >= q_1 >= ... >= q_L >= 1/2.
struct ModeOccupations {
  int sites = 0;
  std::vector<double> q;  // descending
};

}  // namespace entflow
