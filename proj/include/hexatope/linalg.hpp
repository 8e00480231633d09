#pragma once

// Exact dense linear algebra over Q, Z (fraction-free) and Z/p.

#include "hexatope/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hexatope {

template <typename T>
using Matrix = std::vector<std::vector<T>>;

using QMatrix = Matrix<Rational>;
using QVector = std::vector<Rational>;
using IMatrix = Matrix<long long>;

inline QMatrix to_rational(const IMatrix& m) {
  QMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out[i].reserve(m[i].size());
    for (long long v : m[i]) out[i].emplace_back(v);
  }
  return out;
}

/// Rank by Bareiss fraction-free elimination; every intermediate entry stays integral.
inline std::size_t rank_integer(const IMatrix& input) {
  if (input.empty()) return 0;
  const std::size_t rows = input.size(), cols = input.front().size();
  Matrix<BigInt> a(rows, std::vector<BigInt>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = input[i][j];
  BigInt prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j)
        a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

inline long long mod_inverse(long long a, long long p) {
  long long t = 0, new_t = 1, r = p, new_r = ((a % p) + p) % p;
  while (new_r != 0) {
    long long q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::invalid_argument("element not invertible mod p");
  return ((t % p) + p) % p;
}

inline std::size_t rank_mod_p(const IMatrix& input, long long p) {
  if (p < 2) throw std::invalid_argument("modulus must be at least 2");
  if (input.empty()) return 0;
  IMatrix a = input;
  const std::size_t rows = a.size(), cols = a.front().size();
  for (auto& row : a)
    for (auto& v : row) v = ((v % p) + p) % p;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const long long inv = mod_inverse(a[rank][col], p);
    for (auto& v : a[rank]) v = v * inv % p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][col] == 0) continue;
      const long long f = a[i][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] = ((a[i][j] - f * a[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(QMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a.front().size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t piv = r;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const Rational inv = 1 / a[r][col];
    for (std::size_t j = col; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

inline std::size_t rank_rational(QMatrix a) { return rref(a).size(); }

/// Basis of {x : A x = 0}; `cols` is needed when A has no rows.
inline std::vector<QVector> nullspace(QMatrix a, std::size_t cols) {
  auto pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVector v(cols);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Columns of `vectors` (given as a list) reduced to a linearly independent subset, in order.
inline std::vector<QVector> independent_subset(const std::vector<QVector>& vectors) {
  std::vector<QVector> kept;
  QMatrix echelon;
  for (const auto& v : vectors) {
    QMatrix trial = echelon;
    trial.push_back(v);
    if (rank_rational(trial) > echelon.size()) {
      echelon.push_back(v);
      kept.push_back(v);
    }
  }
  return kept;
}

/// Solves sum_k c_k basis[k] = target; nullopt if target is outside the span.
inline std::optional<QVector> coordinates(const std::vector<QVector>& basis, const QVector& target) {
  const std::size_t dim = target.size(), k = basis.size();
  QMatrix aug(dim, QVector(k + 1));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug[i][j] = basis[j][i];
    aug[i][k] = target[i];
  }
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == k) return std::nullopt;
  QVector c(k);
  for (std::size_t r = 0; r < pivots.size(); ++r) c[pivots[r]] = aug[r][k];
  return c;
}

/// Solves the square system A x = b; nullopt when A is singular.
inline std::optional<QVector> solve_linear(const QMatrix& a, const QVector& b) {
  const std::size_t n = a.size();
  QMatrix aug(n, QVector(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("matrix is not square");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
  }
  auto pivots = rref(aug);
  if (pivots.size() != n || (n > 0 && pivots.back() == n)) return std::nullopt;
  QVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

inline QVector mat_vec(const QMatrix& a, const QVector& x) {
  QVector y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (a[i][j] != 0 && x[j] != 0) y[i] += a[i][j] * x[j];
  return y;
}

inline IMatrix mat_mul(const IMatrix& a, const IMatrix& b, std::size_t inner, std::size_t cols) {
  IMatrix c(a.size(), std::vector<long long>(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

}  // namespace hexatope
