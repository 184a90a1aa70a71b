#include "cabne/quadratic_program.hpp"

#include <algorithm>
#include <optional>

#include "cabne/errors.hpp"

namespace cabne {
namespace {

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  }
  return s;
}

}  // namespace

std::vector<Rational> project_onto_polyhedron(const ProjectionProblem& problem, std::vector<Rational> p) {
  const std::size_t n = problem.target.size();
  const std::size_t n_ineq = problem.inequality_lhs.size();
  const std::size_t n_eq = problem.equality_lhs.size();
  if (p.size() != n) throw InvalidInput("projection start has wrong dimension");
  for (std::size_t k = 0; k < n_ineq; ++k) {
    if (dot(problem.inequality_lhs[k], p) < problem.inequality_rhs[k]) {
      throw PreconditionViolation("projection start violates an inequality");
    }
  }
  for (std::size_t k = 0; k < n_eq; ++k) {
    if (dot(problem.equality_lhs[k], p) != problem.equality_rhs[k]) {
      throw PreconditionViolation("projection start violates an equality");
    }
  }

  std::vector<std::size_t> working;  // inequality indices, kept sorted
  std::vector<bool> in_working(n_ineq, false);
  const std::size_t max_iterations = 100 * (n_ineq + n + 10);

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    // Rows of the working matrix: equalities first, then working inequalities.
    std::vector<const std::vector<Rational>*> rows;
    for (const auto& row : problem.equality_lhs) rows.push_back(&row);
    for (const std::size_t k : working) rows.push_back(&problem.inequality_lhs[k]);

    std::vector<Rational> residual(n);
    for (std::size_t j = 0; j < n; ++j) residual[j] = problem.target[j] - p[j];

    std::vector<Rational> lambda;
    if (!rows.empty()) {
      RationalMatrix gram(rows.size(), std::vector<Rational>(rows.size()));
      std::vector<Rational> rhs(rows.size());
      for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = a; b < rows.size(); ++b) gram[a][b] = gram[b][a] = dot(*rows[a], *rows[b]);
        rhs[a] = dot(*rows[a], residual);
      }
      lambda = solve_linear_system(std::move(gram), std::move(rhs));
    }

    std::vector<Rational> direction = residual;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (lambda[a].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) direction[j] -= lambda[a] * (*rows[a])[j];
    }
    const bool stationary = std::all_of(direction.begin(), direction.end(), [](const Rational& d) { return d.is_zero(); });

    if (stationary) {
      // KKT multiplier of working inequality k is -lambda; a positive lambda means the
      // constraint is pulling the wrong way and must be released.
      std::optional<std::size_t> drop;
      for (std::size_t w = 0; w < working.size(); ++w) {
        if (lambda[n_eq + w].sign() > 0) {
          drop = w;
          break;
        }
      }
      if (!drop) return p;
      in_working[working[*drop]] = false;
      working.erase(working.begin() + static_cast<std::ptrdiff_t>(*drop));
      continue;
    }

    Rational step = 1;
    std::optional<std::size_t> blocking;
    for (std::size_t k = 0; k < n_ineq; ++k) {
      if (in_working[k]) continue;
      const Rational slope = dot(problem.inequality_lhs[k], direction);
      if (slope.sign() >= 0) continue;
      Rational limit = (problem.inequality_rhs[k] - dot(problem.inequality_lhs[k], p)) / slope;
      if (limit < step) {
        step = std::move(limit);
        blocking = k;
      }
    }
    for (std::size_t j = 0; j < n; ++j) p[j] += step * direction[j];
    if (blocking) {
      in_working[*blocking] = true;
      working.insert(std::upper_bound(working.begin(), working.end(), *blocking), *blocking);
    }
  }
  throw Error("active-set projection did not terminate");
}

}  // namespace cabne
