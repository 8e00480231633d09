#include "hexatope/lp.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace hexatope;

namespace {

IMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IMatrix m(r, std::vector<long long>(c));
  for (auto& row : m)
    for (auto& v : row) v = d(rng);
  return m;
}

std::size_t eigen_rank(const IMatrix& m) {
  if (m.empty()) return 0;
  Eigen::MatrixXd e(m.size(), m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) e(i, j) = static_cast<double>(m[i][j]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
  lu.setThreshold(1e-9);
  return lu.rank();
}

// rank over GF(p) as log_p of the size of the row span, by enumeration
std::size_t span_rank(const IMatrix& m, long long p) {
  const std::size_t rows = m.size(), cols = m[0].size();
  std::set<std::vector<long long>> span;
  std::vector<long long> coeff(rows, 0);
  while (true) {
    std::vector<long long> v(cols, 0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) v[j] = ((v[j] + coeff[i] * m[i][j]) % p + p) % p;
    span.insert(v);
    std::size_t k = 0;
    while (k < rows && ++coeff[k] == p) coeff[k++] = 0;
    if (k == rows) break;
  }
  std::size_t r = 0;
  for (std::size_t s = 1; s < span.size(); s *= p) ++r;
  return r;
}

}  // namespace

TEST(Rational, ParseAndConvert) {
  EXPECT_EQ(parse_rational("3/6"), make_rational(1, 2));
  EXPECT_EQ(parse_rational("-0.25"), make_rational(-1, 4));
  EXPECT_EQ(parse_rational("7"), make_rational(7));
  EXPECT_EQ(parse_rational("0.08"), make_rational(2, 25));
  EXPECT_EQ(parse_rational("010/4"), make_rational(5, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_EQ(exact_from_double(0.375), make_rational(3, 8));
  EXPECT_EQ(snap_to_rational(1.0 / 3.0, 4), make_rational(5, 16));
  EXPECT_EQ(floor_of(make_rational(-7, 2)), -4);
  EXPECT_EQ(ceil_of(make_rational(-7, 2)), -3);
  EXPECT_EQ(to_string(make_rational(-6, 4)), "-3/2");
}

TEST(Linalg, RanksAgainstEigen) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    IMatrix m = random_matrix(rng, r, c, -2, 2);
    // repeat a combination of rows now and then to force deficiency
    if (r > 2 && trial % 3 == 0)
      for (std::size_t j = 0; j < c; ++j) m[r - 1][j] = m[0][j] - 2 * m[1][j];
    const std::size_t expect = eigen_rank(m);
    EXPECT_EQ(rank_integer(m), expect);
    EXPECT_EQ(rank_rational(to_rational(m)), expect);
  }
}

TEST(Linalg, RankModPAgainstSpan) {
  std::mt19937_64 rng(2);
  for (long long p : {2LL, 3LL, 5LL})
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
      const IMatrix m = random_matrix(rng, r, c, -3, 3);
      EXPECT_EQ(rank_mod_p(m, p), span_rank(m, p)) << "p=" << p;
    }
  // rank drops mod 2 but not over Q
  const IMatrix m{{1, 1}, {1, -1}};
  EXPECT_EQ(rank_integer(m), 2u);
  EXPECT_EQ(rank_mod_p(m, 2), 1u);
}

TEST(Linalg, NullspaceAndSolve) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
    const QMatrix a = to_rational(random_matrix(rng, r, c, -3, 3));
    const auto basis = nullspace(a, c);
    EXPECT_EQ(basis.size(), c - rank_rational(a));
    for (const auto& v : basis)
      for (const auto& x : mat_vec(a, v)) EXPECT_EQ(x, 0);
  }
  const QMatrix a = to_rational(IMatrix{{2, 1}, {1, 3}});
  const auto x = solve_linear(a, {make_rational(3), make_rational(5)});
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0], make_rational(4, 5));
  EXPECT_EQ((*x)[1], make_rational(7, 5));
  EXPECT_FALSE(solve_linear(to_rational(IMatrix{{1, 2}, {2, 4}}), {make_rational(1), make_rational(1)}));

  const std::vector<QVector> gens{{1, 0, 1}, {2, 0, 2}, {0, 1, 1}};
  EXPECT_EQ(independent_subset(gens).size(), 2u);
  const auto coords = coordinates({gens[0], gens[2]}, {3, 2, 5});
  ASSERT_TRUE(coords);
  EXPECT_EQ((*coords)[0], 3);
  EXPECT_EQ((*coords)[1], 2);
  EXPECT_FALSE(coordinates({gens[0]}, {0, 1, 0}));
}

TEST(Lp, AgainstVertexEnumeration) {
  // max c·x over {A x ≤ b, x ≥ 0} in two variables, compared with the best
  // feasible intersection of two boundary lines computed in floating point
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> d(-3, 5);
  int optimal = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int m = 2 + rng() % 3;
    std::vector<std::array<double, 3>> lines{{1, 0, 0}, {0, 1, 0}};  // a·x = b as {a0, a1, b}
    LinearProgram lp;
    lp.vars = 2;
    lp.objective = {make_rational(d(rng)), make_rational(d(rng))};
    std::vector<std::array<double, 3>> cons;
    for (int i = 0; i < m; ++i) {
      std::array<double, 3> row{double(d(rng)), double(d(rng)), double(1 + rng() % 8)};
      cons.push_back(row);
      lines.push_back(row);
      lp.add({make_rational(row[0]), make_rational(row[1])}, Sense::Le, make_rational(row[2]));
    }
    auto feasible = [&](double x, double y) {
      if (x < -1e-9 || y < -1e-9) return false;
      for (auto& c : cons)
        if (c[0] * x + c[1] * y > c[2] + 1e-9) return false;
      return true;
    };
    double best = -1e18;
    for (std::size_t i = 0; i < lines.size(); ++i)
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        Eigen::Matrix2d a;
        a << lines[i][0], lines[i][1], lines[j][0], lines[j][1];
        if (std::abs(a.determinant()) < 1e-12) continue;
        const Eigen::Vector2d x = a.partialPivLu().solve(Eigen::Vector2d(lines[i][2], lines[j][2]));
        if (feasible(x[0], x[1])) best = std::max(best, to_double(lp.objective[0]) * x[0] + to_double(lp.objective[1]) * x[1]);
      }
    // unbounded iff some feasible ray direction improves the objective; b > 0 keeps 0 feasible
    bool unbounded = false;
    for (int k = 0; k <= 400 && !unbounded; ++k) {
      const double t = k * M_PI / 800, dx = std::cos(t), dy = std::sin(t);
      bool ray = true;
      for (auto& c : cons)
        if (c[0] * dx + c[1] * dy > 1e-12) ray = false;
      if (ray && to_double(lp.objective[0]) * dx + to_double(lp.objective[1]) * dy > 1e-9) unbounded = true;
    }
    const LpResult res = solve_lp(lp);
    if (unbounded) {
      EXPECT_EQ(res.status, LpStatus::Unbounded) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(res.status, LpStatus::Optimal) << "trial " << trial;
    ++optimal;
    EXPECT_NEAR(to_double(res.value), best, 1e-9) << "trial " << trial;
    EXPECT_TRUE(feasible(to_double(res.x[0]), to_double(res.x[1])));
  }
  EXPECT_GT(optimal, 50);
}

TEST(Lp, InfeasibleAndEqualities) {
  LinearProgram lp;
  lp.vars = 2;
  lp.objective = {1, 1};
  lp.add({1, 1}, Sense::Le, 1);
  lp.add({1, 1}, Sense::Ge, 2);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::Infeasible);

  LinearProgram eq;
  eq.vars = 3;
  eq.objective = {1, 2, 3};
  eq.add({1, 1, 1}, Sense::Eq, 1);
  eq.add({0, 0, 1}, Sense::Le, make_rational(1, 3));
  const LpResult r = solve_lp(eq);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_EQ(r.value, make_rational(7, 3));
  EXPECT_EQ(r.x[1], make_rational(2, 3));
}

TEST(Lp, ConvexHullMembership) {
  const std::vector<QVector> square{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  EXPECT_TRUE(in_convex_hull(square, {make_rational(1, 2), make_rational(1, 3)}));
  EXPECT_TRUE(in_convex_hull(square, {1, 1}));
  EXPECT_FALSE(in_convex_hull(square, {make_rational(11, 10), 0}));
}
