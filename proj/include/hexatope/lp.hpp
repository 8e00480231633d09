#pragma once

// Two-phase tableau simplex over exact rationals, Bland's rule throughout.

#include "hexatope/linalg.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hexatope {

enum class Sense { Le, Ge, Eq };

struct LinearProgram {
  std::size_t vars = 0;  // all variables are nonnegative
  QVector objective;     // maximized
  QMatrix rows;
  std::vector<Sense> senses;
  QVector rhs;

  void add(QVector coeffs, Sense s, Rational b) {
    if (coeffs.size() != vars) throw std::invalid_argument("constraint width mismatch");
    rows.push_back(std::move(coeffs));
    senses.push_back(s);
    rhs.push_back(std::move(b));
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  QVector x;
  std::size_t pivots = 0;
};

namespace detail {

class Tableau {
 public:
  Tableau(QMatrix a, QVector b, std::vector<std::size_t> basis)
      : a_(std::move(a)), b_(std::move(b)), basis_(std::move(basis)) {}

  // Maximizes cost·x over the current basis; returns false if unbounded.
  bool optimize(const QVector& cost, const std::vector<bool>& allowed, std::size_t& pivots) {
    const std::size_t cols = allowed.size();
    for (;;) {
      QVector reduced = cost;
      for (std::size_t r = 0; r < a_.size(); ++r) {
        const Rational& cb = cost[basis_[r]];
        if (cb == 0) continue;
        for (std::size_t j = 0; j < cols; ++j)
          if (a_[r][j] != 0) reduced[j] -= cb * a_[r][j];
      }
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j)
        if (allowed[j] && reduced[j] > 0) {
          enter = j;
          break;
        }
      if (enter == cols) return true;
      std::size_t leave = a_.size();
      Rational best;
      for (std::size_t r = 0; r < a_.size(); ++r) {
        if (a_[r][enter] <= 0) continue;
        Rational ratio = b_[r] / a_[r][enter];
        if (leave == a_.size() || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave == a_.size()) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = 1 / a_[r][c];
    for (auto& v : a_[r]) v *= inv;
    b_[r] *= inv;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == r || a_[i][c] == 0) continue;
      const Rational f = a_[i][c];
      for (std::size_t j = 0; j < a_[i].size(); ++j)
        if (a_[r][j] != 0) a_[i][j] -= f * a_[r][j];
      b_[i] -= f * b_[r];
    }
    basis_[r] = c;
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  QMatrix a_;
  QVector b_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

inline LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t m = lp.rows.size(), n = lp.vars;
  if (lp.objective.size() != n) throw std::invalid_argument("objective width mismatch");

  // Column layout: structural | slack/surplus | artificial.
  std::size_t slack_count = 0, art_count = 0;
  std::vector<Sense> senses = lp.senses;
  QMatrix rows = lp.rows;
  QVector rhs = lp.rhs;
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0) {
      for (auto& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
      if (senses[i] == Sense::Le) senses[i] = Sense::Ge;
      else if (senses[i] == Sense::Ge) senses[i] = Sense::Le;
    }
    if (senses[i] != Sense::Eq) ++slack_count;
    if (senses[i] != Sense::Le) ++art_count;
  }
  const std::size_t total = n + slack_count + art_count;
  QMatrix a(m, QVector(total));
  std::vector<std::size_t> basis(m);
  std::size_t s = n, art = n + slack_count;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = rows[i][j];
    if (senses[i] == Sense::Le) {
      a[i][s] = 1;
      basis[i] = s++;
    } else {
      if (senses[i] == Sense::Ge) a[i][s++] = -1;
      a[i][art] = 1;
      basis[i] = art++;
    }
  }

  detail::Tableau tab(std::move(a), std::move(rhs), std::move(basis));
  LpResult result;
  std::vector<bool> allowed(total, true);
  if (art_count > 0) {
    QVector phase1(total);
    for (std::size_t j = n + slack_count; j < total; ++j) phase1[j] = -1;
    tab.optimize(phase1, allowed, result.pivots);
    Rational infeasibility;
    for (std::size_t r = 0; r < tab.basis_.size(); ++r)
      if (tab.basis_[r] >= n + slack_count) infeasibility += tab.b_[r];
    if (infeasibility != 0) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis, dropping redundant rows.
    for (std::size_t r = 0; r < tab.basis_.size();) {
      if (tab.basis_[r] < n + slack_count) {
        ++r;
        continue;
      }
      std::size_t col = n + slack_count;
      for (std::size_t j = 0; j < n + slack_count; ++j)
        if (tab.a_[r][j] != 0) {
          col = j;
          break;
        }
      if (col == n + slack_count) {
        tab.drop_row(r);
      } else {
        tab.pivot(r, col);
        ++result.pivots;
        ++r;
      }
    }
    for (std::size_t j = n + slack_count; j < total; ++j) allowed[j] = false;
  }

  QVector cost(total);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
  if (!tab.optimize(cost, allowed, result.pivots)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < tab.basis_.size(); ++r)
    if (tab.basis_[r] < n) result.x[tab.basis_[r]] = tab.b_[r];
  for (std::size_t j = 0; j < n; ++j) result.value += lp.objective[j] * result.x[j];
  return result;
}

/// Exact test whether `point` lies in the convex hull of `vertices`.
inline bool in_convex_hull(const std::vector<QVector>& vertices, const QVector& point) {
  if (vertices.empty()) return false;
  LinearProgram lp;
  lp.vars = vertices.size();
  lp.objective.assign(lp.vars, Rational(0));
  for (std::size_t coord = 0; coord < point.size(); ++coord) {
    QVector row(lp.vars);
    for (std::size_t k = 0; k < vertices.size(); ++k) row[k] = vertices[k][coord];
    lp.add(std::move(row), Sense::Eq, point[coord]);
  }
  lp.add(QVector(lp.vars, Rational(1)), Sense::Eq, Rational(1));
  return solve_lp(lp).status == LpStatus::Optimal;
}

}  // namespace hexatope
