#pragma once

#include <vector>

#include "cabne/linear_program.hpp"

namespace cabne {

/// minimize ||p - target||^2 subject to G p >= h and E p = e.
struct ProjectionProblem {
  std::vector<Rational> target;
  RationalMatrix inequality_lhs;
  std::vector<Rational> inequality_rhs;
  RationalMatrix equality_lhs;
  std::vector<Rational> equality_rhs;
};

/// Exact primal active-set method for the identity-Hessian QP. `feasible_start` must satisfy
/// every constraint and the equality rows must be linearly independent. Each iteration solves
/// one equality-constrained subproblem as a rational linear system; blocking and dropping
/// choices use the smallest index on ties.
[[nodiscard]] std::vector<Rational> project_onto_polyhedron(const ProjectionProblem& problem,
                                                            std::vector<Rational> feasible_start);

}  // namespace cabne
