#pragma once

#include <string>
#include <vector>

#include "bk/module.hpp"

namespace bk {

// Solutions X = (X_tau) over F((u)) of
//   A_tau phi(X_{tau+1}) A_tau^{-1} - X_tau integral for every tau,
// projected to their polar parts.
struct TangentReport {
  int pole_bound = 0;
  std::size_t non_integral_dim = 0;
  // One entry per basis vector: polar parts of X_tau, per block.
  std::vector<std::vector<UMatrix>> polar_basis;
  bool fiber_point_reduced = true;
};

// Unknowns are the coefficients of X in degrees [-D, 0]: a degree d term of
// X_{tau+1} lands in degrees >= p d - p after conjugation, so higher degrees
// never reach the polar equations. D defaults to p.
TangentReport solve_tangent(const BKModule& m, int pole_bound = 0, long long precision = 0);

// Substitutes a polar solution back into the condition.
bool verify_tangent_solution(const BKModule& m, const std::vector<UMatrix>& x, long long precision = 0);

struct FiberPoint {
  std::string label;
  TangentReport tangent;
};

struct FiberReport {
  bool enumeration_complete = false;
  std::size_t points = 0;
  bool hypothesis_holds = false;  // finite fiber, every point reduced
  std::string interpretation;
};

// Requires enumeration_complete (std::invalid_argument otherwise): the
// caller states that `points` is the full fiber for one Hodge type.
FiberReport fiber_report(const std::vector<FiberPoint>& points, bool enumeration_complete);

}  // namespace bk
