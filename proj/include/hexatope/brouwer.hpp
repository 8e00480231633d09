#pragma once

// Approximate fixed points of self-maps of [0,1]^d through the HEX coloring
// κ(v) = min{i : |f_i(v/n) − v_i/n| ≥ ε}, the displacement map of a coloring,
// and a damped target solver on products of simplices.

#include "hexatope/budget.hpp"
#include "hexatope/hexboard.hpp"
#include "hexatope/lp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexatope {

using Vec = std::vector<double>;

inline double inf_norm(const Vec& a, const Vec& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Black-box self-map of the unit cube. Outputs are checked to lie in the cube up
/// to `slack` and clamped.
struct CubeMap {
  int d = 0;
  std::function<Vec(const Vec&)> fn;
  std::string name;
  double slack = 1e-9;

  Vec operator()(const Vec& x) const {
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("point has the wrong dimension");
    Vec y = fn(x);
    if (static_cast<int>(y.size()) != d) throw std::invalid_argument("map returned the wrong dimension");
    for (double& v : y) {
      if (!(v >= -slack && v <= 1 + slack)) throw std::domain_error(name + " leaves the unit cube");
      v = std::clamp(v, 0.0, 1.0);
    }
    return y;
  }

  double residual(const Vec& x) const { return inf_norm((*this)(x), x); }
};

namespace maps {

inline CubeMap identity(int d) { return {d, [](const Vec& x) { return x; }, "identity"}; }

inline CubeMap reflection(int d) {
  return {d, [](const Vec& x) {
            Vec y(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1 - x[i];
            return y;
          },
          "reflection"};
}

/// Quarter turn of the first two coordinates about (½,½); other coordinates fixed.
inline CubeMap rotation(int d) {
  if (d < 2) throw std::invalid_argument("rotation needs d ≥ 2");
  return {d, [](const Vec& x) {
            Vec y = x;
            y[0] = 0.5 - (x[1] - 0.5);
            y[1] = 0.5 + (x[0] - 0.5);
            return y;
          },
          "rotation"};
}

/// x ↦ A x + b; rejected unless every corner of the cube lands in the cube.
inline CubeMap affine(std::vector<Vec> a, Vec b) {
  const int d = static_cast<int>(b.size());
  if (static_cast<int>(a.size()) != d) throw std::invalid_argument("matrix and offset sizes differ");
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != d) throw std::invalid_argument("matrix must be square");
  if (d > 20) throw std::invalid_argument("affine maps are limited to d ≤ 20");
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << d); ++s)
    for (int i = 0; i < d; ++i) {
      double v = b[i];
      for (int j = 0; j < d; ++j)
        if (s >> j & 1U) v += a[i][j];
      if (v < -1e-12 || v > 1 + 1e-12) throw std::invalid_argument("affine map does not preserve the cube");
    }
  return {d, [a = std::move(a), b = std::move(b)](const Vec& x) {
            Vec y = b;
            for (std::size_t i = 0; i < y.size(); ++i)
              for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
            return y;
          },
          "affine"};
}

}  // namespace maps

namespace detail {

// Recursive-descent arithmetic in x1..xd.
class ExprParser {
 public:
  using Node = std::function<double(const Vec&)>;

  ExprParser(std::string text, int d) : s_(std::move(text)), d_(d) {}

  Node parse() {
    Node n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression: " + what + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node expr() {
    Node lhs = term();
    for (;;) {
      if (eat('+')) {
        Node rhs = term();
        lhs = [lhs, rhs](const Vec& x) { return lhs(x) + rhs(x); };
      } else if (eat('-')) {
        Node rhs = term();
        lhs = [lhs, rhs](const Vec& x) { return lhs(x) - rhs(x); };
      } else {
        return lhs;
      }
    }
  }

  Node term() {
    Node lhs = unary();
    for (;;) {
      if (eat('*')) {
        Node rhs = unary();
        lhs = [lhs, rhs](const Vec& x) { return lhs(x) * rhs(x); };
      } else if (eat('/')) {
        Node rhs = unary();
        lhs = [lhs, rhs](const Vec& x) { return lhs(x) / rhs(x); };
      } else {
        return lhs;
      }
    }
  }

  Node unary() {
    if (eat('-')) {
      Node v = unary();
      return [v](const Vec& x) { return -v(x); };
    }
    if (eat('+')) return unary();
    return power();
  }

  Node power() {
    Node base = atom();
    if (eat('^')) {
      Node e = unary();
      return [base, e](const Vec& x) { return std::pow(base(x), e(x)); };
    }
    return base;
  }

  Node atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      Node n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return [v](const Vec&) { return v; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word = s_.substr(start, pos_ - start);
      if (word.size() > 1 && word[0] == 'x' && std::all_of(word.begin() + 1, word.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; })) {
        const int i = std::stoi(word.substr(1));
        if (i < 1 || i > d_) fail("variable " + word + " out of range");
        return [i](const Vec& x) { return x[i - 1]; };
      }
      if (word == "pi") return [](const Vec&) { return std::numbers::pi; };
      static const std::map<std::string, double (*)(double)> unary_fns{
          {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
          {"exp", [](double v) { return std::exp(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
          {"abs", [](double v) { return std::abs(v); }}};
      if (auto it = unary_fns.find(word); it != unary_fns.end()) {
        if (!eat('(')) fail("missing '(' after " + word);
        Node arg = expr();
        if (!eat(')')) fail("missing ')'");
        auto fn = it->second;
        return [fn, arg](const Vec& x) { return fn(arg(x)); };
      }
      if (word == "min" || word == "max") {
        if (!eat('(')) fail("missing '(' after " + word);
        Node a = expr();
        if (!eat(',')) fail("missing ','");
        Node b = expr();
        if (!eat(')')) fail("missing ')'");
        if (word == "min") return [a, b](const Vec& x) { return std::min(a(x), b(x)); };
        return [a, b](const Vec& x) { return std::max(a(x), b(x)); };
      }
      fail("unknown name '" + word + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  int d_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Components separated by ';', e.g. "1 - x1; 0.5*x2 + 0.25".
inline CubeMap parse_map_expression(const std::string& text, int d) {
  std::vector<detail::ExprParser::Node> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find(';', start);
    parts.push_back(detail::ExprParser(text.substr(start, end - start), d).parse());
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (static_cast<int>(parts.size()) != d) throw std::invalid_argument("expression needs one component per dimension");
  return {d, [parts](const Vec& x) {
            Vec y;
            for (const auto& p : parts) y.push_back(p(x));
            return y;
          },
          text};
}

inline CubeMap builtin_map(const std::string& name, int d) {
  if (name == "identity") return maps::identity(d);
  if (name == "reflection") return maps::reflection(d);
  if (name == "rotation") return maps::rotation(d);
  throw std::invalid_argument("unknown builtin map '" + name + "'");
}

inline Vec grid_point(const Point& v, int n) {
  Vec x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = static_cast<double>(v[i]) / n;
  return x;
}

struct MapColoring {
  DColoring coloring;
  std::vector<Point> witnesses;  // interior vertices with residual < ε, left uncolored
};

inline MapColoring coloring_from_map(const CubeMap& f, int n, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("ε must be positive");
  if (n < 1) throw std::invalid_argument("n must be positive");
  DBoard b(n, f.d);
  MapColoring out{DColoring(b), {}};
  for (const Point& v : b.interior_points()) {
    const Vec x = grid_point(v, n);
    const Vec y = f(x);
    int color = 0;
    for (int i = 0; i < f.d && !color; ++i)
      if (std::abs(y[i] - x[i]) >= eps) color = i + 1;
    if (color)
      out.coloring.set(v, color);
    else
      out.witnesses.push_back(v);
  }
  return out;
}

struct ApproxOptions {
  int start_n = 2;
  std::size_t max_evaluations = 20'000'000;
  int bisection_steps = 60;
};

struct SignChange {
  Point before, after;  // consecutive winner-chain vertices
  int color = 0;
  double residual_before = 0, residual_after = 0;  // signed f_i − x_i
};

struct ApproxResult {
  Vec x;
  double residual = 0;
  int n = 0;
  std::size_t evaluations = 0;
  std::string method;  // "witness" or "bisection"
  std::vector<SignChange> sign_changes;
};

/// Doubles n until a grid witness appears or edge bisection across a sign change
/// of the winner's coordinate finds a point with residual < ε.
inline ApproxResult approx_fixed_point(const CubeMap& f, double eps, const ApproxOptions& opt = {}) {
  if (!(eps > 0)) throw std::invalid_argument("ε must be positive");
  ApproxResult res;
  auto eval = [&](const Vec& x) {
    if (++res.evaluations > opt.max_evaluations) throw BudgetExceeded("fixed-point evaluation budget exhausted");
    return f(x);
  };
  auto finish = [&](const Vec& x, int n, const char* method) {
    res.x = x;
    res.residual = f.residual(x);
    res.n = n;
    res.method = method;
    if (!(res.residual < eps)) throw std::logic_error("returned point misses the residual bound");
    return res;
  };
  for (int n = std::max(1, opt.start_n);; n *= 2) {
    std::size_t points = 1;
    for (int i = 0; i < f.d; ++i) points *= static_cast<std::size_t>(n + 1);
    if (res.evaluations + points > opt.max_evaluations) throw BudgetExceeded("fixed-point evaluation budget exhausted");
    DBoard b(n, f.d);
    DColoring col(b);
    std::vector<double> disp(b.vertex_count() * static_cast<std::size_t>(f.d));
    Vec best_x;
    double best = std::numeric_limits<double>::infinity();
    for (const Point& v : b.interior_points()) {
      const Vec x = grid_point(v, n);
      const Vec y = eval(x);
      const double r = inf_norm(x, y);
      if (r < best) {
        best = r;
        best_x = x;
      }
      int color = 0;
      for (int i = 0; i < f.d && !color; ++i)
        if (std::abs(y[i] - x[i]) >= eps) color = i + 1;
      if (color) col.set(v, color);
      const std::size_t at = b.index(v) * static_cast<std::size_t>(f.d);
      for (int i = 0; i < f.d; ++i) disp[at + i] = y[i] - x[i];
    }
    if (best < eps) return finish(best_x, n, "witness");

    auto win = winner_ddim(col);
    const int i = win.winner - 1;
    std::vector<Point> inner;
    for (const Point& p : win.path)
      if (b.is_interior(p)) inner.push_back(p);
    for (std::size_t k = 1; k < inner.size(); ++k) {
      const double r0 = disp[b.index(inner[k - 1]) * f.d + i], r1 = disp[b.index(inner[k]) * f.d + i];
      if (!(r0 >= eps && r1 <= -eps) && !(r0 <= -eps && r1 >= eps)) continue;
      res.sign_changes.push_back({inner[k - 1], inner[k], win.winner, r0, r1});
      Vec lo = grid_point(inner[k - 1], n), hi = grid_point(inner[k], n);
      const bool lo_positive = r0 > 0;
      for (int step = 0; step < opt.bisection_steps; ++step) {
        Vec mid(f.d);
        for (int j = 0; j < f.d; ++j) mid[j] = (lo[j] + hi[j]) / 2;
        const Vec y = eval(mid);
        if (inf_norm(mid, y) < eps) return finish(mid, n, "bisection");
        ((y[i] - mid[i] > 0) == lo_positive ? lo : hi) = mid;
      }
    }
  }
}

struct DisplacementReport {
  std::size_t simplices = 0;
  std::size_t orthant_violations = 0;
  std::size_t zero_in_hull = 0;
  std::size_t leaving_cube = 0;  // vertices displaced outside [0,n]^d; zero iff no winner
  std::optional<KuhnSimplex> witness;
  bool consistent() const { return orthant_violations == 0 && zero_in_hull == 0; }
};

/// Signed axis per interior vertex: +(i+1) for v + e_i, −(i+1) for v − e_i.
using Displacement = std::map<Point, int>;

/// v ↦ v ± e_i with i = color(v) − 1 and sign + iff an i-colored interior path
/// reaches {w_i = 0}.
inline Displacement displacement_map(const DColoring& col) {
  const DBoard& b = col.board();
  if (!col.complete()) throw std::invalid_argument("every interior vertex must be colored");
  Displacement out;
  for (int i = 1; i <= b.d(); ++i) {
    std::set<Point> reach;
    std::deque<Point> queue;
    for (const Point& v : b.interior_points())
      if (col.color(v) == i && v[i - 1] == 0) {
        reach.insert(v);
        queue.push_back(v);
      }
    while (!queue.empty()) {
      Point v = queue.front();
      queue.pop_front();
      col.for_each_neighbor(v, [&](const Point& w) {
        if (b.is_interior(w) && col.color(w) == i && reach.insert(w).second) queue.push_back(w);
      });
    }
    for (const Point& v : b.interior_points()) {
      if (col.color(v) != i) continue;
      if (out.count(v)) throw std::logic_error("vertex displaced twice");
      out[v] = reach.count(v) ? i : -i;
    }
  }
  return out;
}

inline DisplacementReport check_displacements(const DBoard& b, const Displacement& disp) {
  const int d = b.d(), n = b.n();
  DisplacementReport rep;
  for (const auto& [v, s] : disp) {
    const int axis = std::abs(s) - 1;
    const int moved = v[axis] + (s > 0 ? 1 : -1);
    if (moved < 0 || moved > n) ++rep.leaving_cube;
  }
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Point> bases;
  if (n >= 1)
    for (const Point& v : DBoard(n - 1, d).interior_points()) bases.push_back(v);
  for (const Point& base : bases) {
    std::vector<int> p = perm;
    do {
      KuhnSimplex s{base, p};
      ++rep.simplices;
      std::vector<QVector> w;
      std::vector<int> sign(d, 0);
      bool orthant = true;
      for (const Point& v : s.vertices()) {
        const int sv = disp.at(v);
        const int axis = std::abs(sv) - 1, dir = sv > 0 ? 1 : -1;
        if (sign[axis] == -dir) orthant = false;
        sign[axis] = dir;
        QVector q(d, Rational(0));
        q[axis] = dir;
        w.push_back(std::move(q));
      }
      const bool zero = in_convex_hull(w, QVector(d, Rational(0)));
      if (!orthant) ++rep.orthant_violations;
      if (zero) ++rep.zero_in_hull;
      if ((!orthant || zero) && !rep.witness) rep.witness = s;
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return rep;
}

inline DisplacementReport displacement_consistency_check(const DColoring& col) {
  return check_displacements(col.board(), displacement_map(col));
}

/// P = (σ^{size−1})^{blocks}, coordinates stored block after block.
struct SimplexProduct {
  int blocks = 1;
  int size = 2;

  int dim() const { return blocks * size; }

  Vec barycenter() const { return Vec(dim(), 1.0 / size); }

  bool contains(const Vec& x, double tol = 1e-9) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (int b = 0; b < blocks; ++b) {
      double s = 0;
      for (int j = 0; j < size; ++j) {
        const double v = x[b * size + j];
        if (v < -tol) return false;
        s += v;
      }
      if (std::abs(s - 1) > tol) return false;
    }
    return true;
  }

  /// Euclidean projection, block by block (sort-based).
  Vec project(Vec x) const {
    for (int b = 0; b < blocks; ++b) {
      auto first = x.begin() + b * size;
      Vec u(first, first + size);
      std::sort(u.begin(), u.end(), std::greater<>());
      double cum = 0, theta = 0;
      for (int k = 0; k < size; ++k) {
        cum += u[k];
        const double t = (cum - 1) / (k + 1);
        if (u[k] - t > 0) theta = t;
      }
      for (int j = 0; j < size; ++j) first[j] = std::max(first[j] - theta, 0.0);
    }
    return x;
  }

  Vec random_point(std::mt19937_64& rng) const {
    std::exponential_distribution<double> e(1.0);
    Vec x(dim());
    for (int b = 0; b < blocks; ++b) {
      double s = 0;
      for (int j = 0; j < size; ++j) s += x[b * size + j] = e(rng);
      for (int j = 0; j < size; ++j) x[b * size + j] /= s;
    }
    return x;
  }
};

struct TargetOptions {
  double tol = 1e-8;
  double lambda = 0.5;
  int max_iterations = 2000;
  int starts = 8;
  int face_samples = 32;
  std::uint64_t seed = 1;
  // false: every step is taken with λ_k = λ/(1 + k/50) and the best iterate is kept,
  // which suits maps with jumps
  bool monotone = true;
  std::function<bool(const Vec&)> stop;  // optional early exit, e.g. a degenerate point that settles the question
};

struct TargetResult {
  bool ok = false;
  bool stopped = false;  // ended through TargetOptions::stop
  Vec x;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
};

/// Checks g(F) ⊆ F on sampled faces: a zero coordinate must map to zero.
inline void validate_face_map(const SimplexProduct& p, const std::function<Vec(const Vec&)>& g, int samples,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(0, p.dim() - 1);
  for (int s = 0; s < samples; ++s) {
    Vec x = p.random_point(rng);
    const int k = coord(rng), b = k / p.size;
    const double rest = 1 - x[k];
    x[k] = 0;
    for (int j = 0; j < p.size; ++j) x[b * p.size + j] /= rest;
    const Vec y = g(x);
    if (!p.contains(y, 1e-7)) throw std::invalid_argument("map leaves the product of simplices");
    if (std::abs(y[k]) > 1e-9) throw std::invalid_argument("map does not respect the faces of the product");
  }
}

/// Damped iteration x ← Π_P(x + λ(y − g(x))) with geometric backoff and multi-start.
inline TargetResult solve_to_target(const SimplexProduct& p, const std::function<Vec(const Vec&)>& g, const Vec& y,
                                    const TargetOptions& opt = {}) {
  if (!p.contains(y) || std::any_of(y.begin(), y.end(), [](double v) { return v <= 0; }))
    throw std::invalid_argument("target must be an interior point");
  if (opt.face_samples > 0) validate_face_map(p, g, opt.face_samples, opt.seed);
  std::mt19937_64 rng(opt.seed);
  TargetResult best;
  for (int start = 0; start < opt.starts; ++start) {
    Vec x = start == 0 ? p.barycenter() : p.random_point(rng);
    if (opt.stop && opt.stop(x)) return {true, true, x, 0, best.iterations};
    Vec gx = g(x);
    double r = inf_norm(gx, y);
    double lambda = opt.lambda;
    int stall = 0;
    double run_best = r;
    Vec run_x = x;
    for (int it = 0; it < opt.max_iterations && r > opt.tol; ++it) {
      ++best.iterations;
      Vec step(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) step[k] = x[k] + lambda * (y[k] - gx[k]);
      Vec nx = p.project(step);
      if (opt.stop && opt.stop(nx)) return {true, true, nx, 0, best.iterations};
      Vec ngx = g(nx);
      const double nr = inf_norm(ngx, y);
      if (!opt.monotone) {
        x = std::move(nx);
        gx = std::move(ngx);
        r = nr;
        lambda = opt.lambda / (1 + (it + 1) / 50.0);
        if (r < run_best) {
          run_best = r;
          run_x = x;
        }
        continue;
      }
      if (nr <= r) {
        // plateaus of piecewise-constant maps still move; stalls decay the step
        stall = nr < r ? 0 : stall + 1;
        x = std::move(nx);
        gx = std::move(ngx);
        r = nr;
        lambda = stall == 0 ? std::min(opt.lambda, lambda * 1.5) : stall % 20 == 0 ? lambda * 0.5 : lambda;
      } else {
        lambda *= 0.5;
      }
      if (lambda < 1e-12) break;
    }
    if (!opt.monotone) {
      r = run_best;
      x = run_x;
    }
    if (r < best.residual) {
      best.residual = r;
      best.x = x;
    }
    if (r <= opt.tol) break;
  }
  // independent re-evaluation
  if (!best.x.empty()) best.residual = inf_norm(g(best.x), y);
  best.ok = best.residual <= opt.tol;
  return best;
}

}  // namespace hexatope
