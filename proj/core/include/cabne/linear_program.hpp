#pragma once

#include <vector>

#include "cabne/rational.hpp"

namespace cabne {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// maximize c·x subject to A x <= b, x >= 0.
struct LinearProgram {
  RationalMatrix a;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Rational objective;
  std::vector<Rational> x;
  /// One non-negative multiplier per row of A (the solution of the dual LP).
  std::vector<Rational> duals;
};

/// Exact two-phase tableau simplex with Bland's rule. No tolerances: every pivot is
/// rational, and Bland's rule rules out cycling on degenerate problems.
[[nodiscard]] LpSolution maximize(const LinearProgram& problem);

/// Solves the square system M y = rhs by exact Gaussian elimination.
/// Throws PreconditionViolation when M is singular.
[[nodiscard]] std::vector<Rational> solve_linear_system(RationalMatrix m, std::vector<Rational> rhs);

}  // namespace cabne
