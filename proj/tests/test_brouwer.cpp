#include "hexatope/brouwer.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <random>

using namespace hexatope;

namespace {

// Cube-preserving contraction with max row sum `rho` of |A|.
std::pair<std::vector<Vec>, Vec> random_contraction(int d, double rho, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1), pos(0, 1);
  std::vector<Vec> a(d, Vec(d));
  Vec b(d);
  for (int i = 0; i < d; ++i) {
    double s = 0;
    for (int j = 0; j < d; ++j) s += std::abs(a[i][j] = u(rng));
    double neg = 0, plus = 0;
    for (int j = 0; j < d; ++j) {
      a[i][j] *= rho / s;
      (a[i][j] < 0 ? neg : plus) += a[i][j];
    }
    b[i] = -neg + pos(rng) * (1 - plus + neg);
  }
  return {a, b};
}

Vec exact_fixed_point(const std::vector<Vec>& a, const Vec& b) {
  const std::size_t d = b.size();
  QMatrix m(d, QVector(d));
  QVector rhs(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m[i][j] = Rational(i == j ? 1 : 0) - exact_from_double(a[i][j]);
    rhs[i] = exact_from_double(b[i]);
  }
  auto x = solve_linear(m, rhs);
  if (!x) throw std::logic_error("singular");
  Vec out;
  for (const auto& q : *x) out.push_back(to_double(q));
  return out;
}

}  // namespace

TEST(CubeMap, Builtins) {
  EXPECT_EQ(maps::reflection(2)({0.25, 1.0}), (Vec{0.75, 0.0}));
  auto r = maps::rotation(2)({1.0, 0.5});
  EXPECT_DOUBLE_EQ(r[0], 0.5);
  EXPECT_DOUBLE_EQ(r[1], 1.0);
  CubeMap bad{1, [](const Vec& x) { return Vec{x[0] + 2}; }, "shift"};
  EXPECT_THROW(bad({0.5}), std::domain_error);
  EXPECT_THROW(maps::affine({{2.0}}, {0.0}), std::invalid_argument);
  EXPECT_THROW(builtin_map("spiral", 2), std::invalid_argument);
}

TEST(CubeMap, Expressions) {
  auto f = parse_map_expression("1 - x1; 0.5*x2^2 + max(0.1, x1/4)", 2);
  auto y = f({0.2, 0.6});
  EXPECT_DOUBLE_EQ(y[0], 0.8);
  EXPECT_DOUBLE_EQ(y[1], 0.5 * 0.36 + 0.1);
  EXPECT_DOUBLE_EQ(parse_map_expression("abs(sin(pi*x1))", 1)({0.5})[0], 1.0);
  EXPECT_THROW(parse_map_expression("x3", 2), std::invalid_argument);
  EXPECT_THROW(parse_map_expression("x1; (x2", 2), std::invalid_argument);
  EXPECT_THROW(parse_map_expression("x1", 2), std::invalid_argument);
  EXPECT_THROW(parse_map_expression("foo(x1)", 1), std::invalid_argument);
}

TEST(Coloring, IdentityAllWitnesses) {
  auto c = coloring_from_map(maps::identity(2), 3, 0.01);
  EXPECT_EQ(c.witnesses.size(), 16u);
}

TEST(Coloring, ReflectionOnSegment) {
  auto c = coloring_from_map(maps::reflection(1), 4, 0.3);
  ASSERT_EQ(c.witnesses, (std::vector<Point>{{2}}));
  for (int v : {0, 1, 3, 4}) EXPECT_EQ(c.coloring.color({v}), 1);
}

TEST(Coloring, TranslationColumn) {
  CubeMap shift{2, [](const Vec& x) { return Vec{std::min(x[0] + 0.2, 1.0), x[1]}; }, "shift"};
  auto c = coloring_from_map(shift, 4, 0.1);
  for (int r = 0; r <= 4; ++r) {
    for (int col = 0; col < 4; ++col) EXPECT_EQ(c.coloring.color({col, r}), 1);
    EXPECT_EQ(c.coloring.color({4, r}), 0);
  }
  EXPECT_EQ(c.witnesses.size(), 5u);
}

TEST(Coloring, DefinitionRecheckedExhaustively) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto [a, b] = random_contraction(2, 0.9, rng);
    auto f = maps::affine(a, b);
    const double eps = 0.05;
    auto c = coloring_from_map(f, 6, eps);
    for (const Point& v : c.coloring.board().interior_points()) {
      const Vec x = grid_point(v, 6), y = f(x);
      int expected = 0;
      for (int i = 0; i < 2 && !expected; ++i)
        if (std::abs(y[i] - x[i]) >= eps) expected = i + 1;
      EXPECT_EQ(c.coloring.color(v), expected);
    }
  }
}

TEST(Approx, Identity) {
  auto r = approx_fixed_point(maps::identity(3), 1e-6);
  EXPECT_EQ(r.residual, 0.0);
  EXPECT_EQ(r.method, "witness");
}

TEST(Approx, ReflectionCentre) {
  auto r = approx_fixed_point(maps::reflection(1), 1e-3);
  EXPECT_LT(std::abs(r.x[0] - 0.5), 1e-3);
}

TEST(Approx, RotationCentre) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = approx_fixed_point(maps::rotation(2), 1e-3);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(r.residual, 1e-3);
  EXPECT_LT(inf_norm(r.x, {0.5, 0.5}), 1e-2);
  EXPECT_LT(secs, 5.0);
}

TEST(Approx, NonDyadicFixedPointsUseSignChanges) {
  // fixed point 0.6 is never a grid vertex
  CubeMap f{1, [](const Vec& x) { return Vec{1 - x[0] * 2 / 3}; }, "affine1"};
  auto r = approx_fixed_point(f, 1e-4);
  EXPECT_LT(r.residual, 1e-4);
  EXPECT_LT(std::abs(r.x[0] - 0.6), 1e-3);
  EXPECT_FALSE(r.sign_changes.empty());
  for (const auto& s : r.sign_changes) {
    EXPECT_GE(std::abs(s.residual_before), 1e-4);
    EXPECT_GE(std::abs(s.residual_after), 1e-4);
    EXPECT_LT(s.residual_before * s.residual_after, 0);
    EXPECT_TRUE(DBoard::adjacent(s.before, s.after));
  }
}

TEST(Approx, AffineContractionsNearExactFixedPoint) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 3;
    const double rho = 0.7;
    auto [a, b] = random_contraction(d, rho, rng);
    // the grid needs about 1/ε points per axis, so coarser tolerances in higher d
    const double eps = d == 1 ? 1e-3 : d == 2 ? 1e-2 : 5e-2;
    // |x − x*| ≤ |f(x) − x| / (1 − ρ)
    auto r = approx_fixed_point(maps::affine(a, b), eps * (1 - rho));
    EXPECT_LT(inf_norm(r.x, exact_fixed_point(a, b)), eps);
  }
}

TEST(Approx, Budget) {
  CubeMap f{2, [](const Vec& x) { return Vec{1 - x[0] * 0.7, 1 - x[1] * 0.3}; }, "affine"};
  ApproxOptions opt;
  opt.max_evaluations = 50;
  EXPECT_THROW(approx_fixed_point(f, 1e-9, opt), BudgetExceeded);
}

TEST(Displacement, ExhaustiveH22) {
  DBoard b(2, 2);
  auto interior = b.interior_points();
  for (std::uint32_t bits = 0; bits < 512; ++bits) {
    DColoring col(b);
    for (std::size_t k = 0; k < interior.size(); ++k) col.set(interior[k], (bits >> k & 1U) ? 2 : 1);
    auto rep = displacement_consistency_check(col);
    EXPECT_EQ(rep.simplices, 8u);
    ASSERT_TRUE(rep.consistent()) << bits;
    // every coloring has a winner, so some vertex is pushed out of [0,n]^d
    EXPECT_GT(rep.leaving_cube, 0u);
  }
}

TEST(Displacement, Monochromatic) {
  DBoard b(3, 3);
  DColoring col(b);
  for (const Point& v : b.interior_points()) col.set(v, 2);
  auto rep = displacement_consistency_check(col);
  EXPECT_TRUE(rep.consistent());
  EXPECT_EQ(rep.simplices, 27u * 6u);
}

TEST(Displacement, CorruptedReachabilityDetected) {
  DBoard b(2, 2);
  DColoring col(b);
  for (const Point& v : b.interior_points()) col.set(v, 1);
  auto disp = displacement_map(col);
  // every vertex reaches {x_1 = 0}; pretend (1,1) does not
  ASSERT_EQ(disp.at({1, 1}), 1);
  disp[{1, 1}] = -1;
  auto rep = check_displacements(b, disp);
  EXPECT_FALSE(rep.consistent());
  EXPECT_GT(rep.orthant_violations, 0u);
  EXPECT_EQ(rep.orthant_violations, rep.zero_in_hull);
  ASSERT_TRUE(rep.witness);
}

TEST(TargetSolver, IdentityHitsTarget) {
  SimplexProduct p{2, 3};
  Vec y{0.2, 0.3, 0.5, 0.6, 0.3, 0.1};
  auto r = solve_to_target(p, [](const Vec& x) { return x; }, y);
  ASSERT_TRUE(r.ok);
  EXPECT_LT(inf_norm(r.x, y), 1e-8);
}

TEST(TargetSolver, SquaredRenormalised) {
  SimplexProduct p{1, 2};
  auto g = [](const Vec& x) {
    const double s = x[0] * x[0] + x[1] * x[1];
    return Vec{x[0] * x[0] / s, x[1] * x[1] / s};
  };
  auto r = solve_to_target(p, g, p.barycenter());
  ASSERT_TRUE(r.ok);
  EXPECT_LE(r.residual, 1e-8);
  EXPECT_NEAR(r.x[0], 0.5, 1e-8);
  // s²/(s² + (1−s)²) = 0.8 solved by bisection
  double lo = 0, hi = 1;
  for (int k = 0; k < 100; ++k) {
    const double m = (lo + hi) / 2;
    (m * m / (m * m + (1 - m) * (1 - m)) < 0.8 ? lo : hi) = m;
  }
  auto r2 = solve_to_target(p, g, {0.8, 0.2});
  ASSERT_TRUE(r2.ok);
  EXPECT_NEAR(r2.x[0], lo, 1e-7);
}

TEST(TargetSolver, FaceViolationRejected) {
  SimplexProduct p{1, 3};
  auto g = [](const Vec&) { return Vec{1.0 / 3, 1.0 / 3, 1.0 / 3}; };
  EXPECT_THROW(solve_to_target(p, g, p.barycenter()), std::invalid_argument);
  EXPECT_THROW(solve_to_target(p, [](const Vec& x) { return x; }, {1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(TargetSolver, Projection) {
  SimplexProduct p{2, 3};
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 2);
  for (int k = 0; k < 50; ++k) {
    Vec x(6);
    for (double& v : x) v = n(rng);
    Vec q = p.project(x);
    EXPECT_TRUE(p.contains(q));
    // projection is idempotent and no sampled point of P is closer
    EXPECT_LT(inf_norm(p.project(q), q), 1e-12);
    auto dist2 = [&](const Vec& z) {
      double s = 0;
      for (int i = 0; i < 6; ++i) s += (z[i] - x[i]) * (z[i] - x[i]);
      return s;
    };
    for (int s = 0; s < 20; ++s) EXPECT_LE(dist2(q), dist2(p.random_point(rng)) + 1e-12);
  }
}
