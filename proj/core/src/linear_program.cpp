#include "cabne/linear_program.hpp"

#include <cstddef>
#include <optional>

#include "cabne/errors.hpp"

namespace cabne {
namespace {

class Tableau {
 public:
  // Columns: structural [0, n), slacks [n, n + m), optional artificial at n + m.
  Tableau(const LinearProgram& lp, bool with_artificial)
      : m_(lp.b.size()), n_(lp.c.size()), cols_(n_ + m_ + (with_artificial ? 1 : 0)) {
    rows_.assign(m_, std::vector<Rational>(cols_));
    rhs_ = lp.b;
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (lp.a[i].size() != n_) throw InvalidInput("LP row has wrong width");
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = lp.a[i][j];
      rows_[i][n_ + i] = 1;
      if (with_artificial) rows_[i][cols_ - 1] = -1;
      basis_[i] = n_ + i;
    }
  }

  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] std::size_t rows() const { return m_; }
  [[nodiscard]] std::size_t basis(std::size_t i) const { return basis_[i]; }
  [[nodiscard]] const Rational& rhs(std::size_t i) const { return rhs_[i]; }
  [[nodiscard]] const Rational& entry(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  [[nodiscard]] const Rational& reduced_cost(std::size_t j) const { return obj_[j]; }

  void set_objective(const std::vector<Rational>& cost) {
    cost_ = cost;
    obj_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = cost_[basis_[i]];
      if (cb.is_zero()) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!rows_[i][j].is_zero()) obj_[j] -= cb * rows_[i][j];
      }
    }
  }

  [[nodiscard]] Rational objective_value() const {
    Rational z;
    for (std::size_t i = 0; i < m_; ++i) z += cost_[basis_[i]] * rhs_[i];
    return z;
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rational p = rows_[row][col];
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!rows_[row][j].is_zero()) rows_[row][j] /= p;
    }
    rhs_[row] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || rows_[i][col].is_zero()) continue;
      const Rational f = rows_[i][col];
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!rows_[row][j].is_zero()) rows_[i][j] -= f * rows_[row][j];
      }
      rhs_[i] -= f * rhs_[row];
    }
    if (!obj_[col].is_zero()) {
      const Rational f = obj_[col];
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!rows_[row][j].is_zero()) obj_[j] -= f * rows_[row][j];
      }
    }
    basis_[row] = col;
  }

  /// Runs Bland-rule pivots until optimal. Returns false when unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && obj_[j].sign() > 0) {
          entering = j;
          break;
        }
      }
      if (!entering) return true;
      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        const Rational& a = rows_[i][*entering];
        if (a.sign() <= 0) continue;
        Rational ratio = rhs_[i] / a;
        if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best_ratio = std::move(ratio);
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
    }
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t cols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> cost_;
  std::vector<Rational> obj_;
};

}  // namespace

LpSolution maximize(const LinearProgram& problem) {
  const std::size_t m = problem.b.size();
  const std::size_t n = problem.c.size();
  if (problem.a.size() != m) throw InvalidInput("LP has mismatched row counts");

  std::size_t most_negative = m;
  for (std::size_t i = 0; i < m; ++i) {
    if (problem.b[i].sign() < 0 && (most_negative == m || problem.b[i] < problem.b[most_negative])) most_negative = i;
  }
  const bool phase_one = most_negative != m;
  Tableau t(problem, phase_one);
  std::vector<bool> allowed(t.cols(), true);

  if (phase_one) {
    // Single artificial column x0 with -1 in every row; pivoting it in on the most
    // negative row makes the starting dictionary feasible.
    const std::size_t art = t.cols() - 1;
    std::vector<Rational> cost(t.cols());
    cost[art] = -1;
    t.set_objective(cost);
    t.pivot(most_negative, art);
    t.optimize(allowed);
    if (t.objective_value().sign() < 0) return LpSolution{LpStatus::kInfeasible, {}, {}, {}};
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis(i) != art) continue;
      for (std::size_t j = 0; j < art; ++j) {
        if (!t.entry(i, j).is_zero()) {
          t.pivot(i, j);
          break;
        }
      }
    }
    allowed[art] = false;
  }

  std::vector<Rational> cost(t.cols());
  for (std::size_t j = 0; j < n; ++j) cost[j] = problem.c[j];
  t.set_objective(cost);
  if (!t.optimize(allowed)) return LpSolution{LpStatus::kUnbounded, {}, {}, {}};

  LpSolution out;
  out.status = LpStatus::kOptimal;
  out.objective = t.objective_value();
  out.x.assign(n, Rational{});
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis(i) < n) out.x[t.basis(i)] = t.rhs(i);
  }
  out.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.duals[i] = -t.reduced_cost(n + i);
  return out;
}

std::vector<Rational> solve_linear_system(RationalMatrix m, std::vector<Rational> rhs) {
  const std::size_t k = rhs.size();
  if (m.size() != k) throw InvalidInput("linear system has mismatched sizes");
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = k;
    for (std::size_t r = col; r < k; ++r) {
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot == k) throw PreconditionViolation("singular linear system");
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < k; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t r = 0; r < k; ++r) rhs[r] /= m[r][r];
  return rhs;
}

}  // namespace cabne
