#pragma once

// Families of d-intervals: exact packing and piercing numbers, the fractional
// LP pair, escape hypergraphs of a trap, weight equalization, multipoints, and
// the homogeneous lower-bound construction from set pairs.
//
// Lines and holes are 0-based here: line i ∈ [0,d), hole j ∈ [0,t] on a line
// with t trap points.

#include "hexatope/brouwer.hpp"
#include "hexatope/budget.hpp"
#include "hexatope/lp.hpp"
#include "hexatope/rational.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexatope {

struct Piece {
  int line = 0;
  Rational a, b;
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// A d-interval as its nonempty components. In d-partite mode each line carries
/// at most one piece; in homogeneous mode all pieces lie on line 0.
struct DInterval {
  std::vector<Piece> pieces;

  bool contains(int line, const Rational& x) const {
    for (const auto& p : pieces)
      if (p.line == line && p.a <= x && x <= p.b) return true;
    return false;
  }

  const Piece* on_line(int line) const {
    for (const auto& p : pieces)
      if (p.line == line) return &p;
    return nullptr;
  }
};

inline bool intersects(const DInterval& x, const DInterval& y) {
  for (const auto& p : x.pieces)
    for (const auto& q : y.pieces)
      if (p.line == q.line && p.a <= q.b && q.a <= p.b) return true;
  return false;
}

enum class DMode { Partite, Homogeneous };

struct PiercePoint {
  int line = 0;
  Rational x;
  friend bool operator==(const PiercePoint&, const PiercePoint&) = default;
  friend bool operator<(const PiercePoint& p, const PiercePoint& q) {
    return p.line != q.line ? p.line < q.line : p.x < q.x;
  }
};

class DIntervalFamily {
 public:
  DIntervalFamily(int d, DMode mode) : d_(d), mode_(mode) {
    if (d < 1) throw std::invalid_argument("d must be at least 1");
  }

  int d() const { return d_; }
  DMode mode() const { return mode_; }
  const std::vector<DInterval>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const DInterval& operator[](std::size_t k) const { return members_[k]; }

  void add(DInterval j) {
    if (j.pieces.empty()) throw std::invalid_argument("a d-interval needs at least one component");
    if (mode_ == DMode::Homogeneous && static_cast<int>(j.pieces.size()) > d_)
      throw std::invalid_argument("homogeneous d-interval with more than d components");
    std::set<int> lines;
    for (const auto& p : j.pieces) {
      if (p.a > p.b) throw std::invalid_argument("component with a > b");
      if (mode_ == DMode::Homogeneous) {
        if (p.line != 0) throw std::invalid_argument("homogeneous components live on line 0");
      } else {
        if (p.line < 0 || p.line >= d_) throw std::invalid_argument("line index out of range");
        if (!lines.insert(p.line).second) throw std::invalid_argument("two components on one line");
        if (p.a < 0 || p.b > 1) throw std::invalid_argument("components must lie in [0,1]");
      }
    }
    if (mode_ == DMode::Partite)
      std::sort(j.pieces.begin(), j.pieces.end(), [](const Piece& p, const Piece& q) { return p.line < q.line; });
    members_.push_back(std::move(j));
  }

  /// Every member has all d components (required by the trap machinery).
  bool complete() const {
    if (mode_ != DMode::Partite) return false;
    return std::all_of(members_.begin(), members_.end(),
                       [&](const DInterval& j) { return static_cast<int>(j.pieces.size()) == d_; });
  }

  /// All component endpoints, deduplicated per line.
  std::vector<PiercePoint> candidate_points() const {
    std::set<PiercePoint> s;
    for (const auto& j : members_)
      for (const auto& p : j.pieces) {
        s.insert({p.line, p.a});
        s.insert({p.line, p.b});
      }
    return {s.begin(), s.end()};
  }

  bool is_transversal(const std::vector<PiercePoint>& pts) const {
    for (const auto& j : members_)
      if (std::none_of(pts.begin(), pts.end(), [&](const PiercePoint& p) { return j.contains(p.line, p.x); })) return false;
    return true;
  }

 private:
  int d_;
  DMode mode_;
  std::vector<DInterval> members_;
};

inline const char* to_string(DMode m) { return m == DMode::Partite ? "partite" : "homogeneous"; }

/// "dint d mode" then one member per line of "i:a,b" entries (i is 1-based).
inline DIntervalFamily parse_dinterval_family(std::istream& in) {
  std::string line;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next()) throw std::invalid_argument("empty d-interval file");
  std::istringstream head(line);
  std::string word, mode_word;
  int d = 0;
  if (!(head >> word >> d >> mode_word) || word != "dint") throw std::invalid_argument("file must start with 'dint d mode'");
  DMode mode;
  if (mode_word == "partite" || mode_word == "d-partite")
    mode = DMode::Partite;
  else if (mode_word == "homogeneous")
    mode = DMode::Homogeneous;
  else
    throw std::invalid_argument("mode must be 'partite' or 'homogeneous'");
  DIntervalFamily fam(d, mode);
  while (next()) {
    std::istringstream row(line);
    DInterval j;
    std::string entry;
    while (row >> entry) {
      const auto colon = entry.find(':'), comma = entry.find(',');
      if (colon == std::string::npos || comma == std::string::npos || comma < colon)
        throw std::invalid_argument("component must read i:a,b, got '" + entry + "'");
      const int i = std::stoi(entry.substr(0, colon));
      j.pieces.push_back({i - 1, parse_rational(entry.substr(colon + 1, comma - colon - 1)),
                          parse_rational(entry.substr(comma + 1))});
    }
    fam.add(std::move(j));
  }
  return fam;
}

inline DIntervalFamily parse_dinterval_family(const std::string& text) {
  std::istringstream in(text);
  return parse_dinterval_family(in);
}

inline std::string format_dinterval_family(const DIntervalFamily& f) {
  std::ostringstream out;
  out << "dint " << f.d() << " " << to_string(f.mode()) << "\n";
  for (const auto& j : f.members()) {
    for (std::size_t k = 0; k < j.pieces.size(); ++k)
      out << (k ? " " : "") << j.pieces[k].line + 1 << ":" << to_string(j.pieces[k].a) << "," << to_string(j.pieces[k].b);
    out << "\n";
  }
  return out.str();
}

namespace families {

inline DIntervalFamily f2() {
  DIntervalFamily f(2, DMode::Partite);
  const Rational half = make_rational(1, 2), lo = make_rational(1, 5), hi = make_rational(3, 10);
  f.add({{{0, 0, half}, {1, half, 1}}});
  f.add({{{0, half, 1}, {1, 0, half}}});
  f.add({{{0, lo, hi}, {1, lo, hi}}});
  return f;
}

/// k disjoint copies of a d-partite family, copy c squeezed into [c/k, (c+1)/k) on every line.
inline DIntervalFamily disjoint_copies(const DIntervalFamily& base, int k) {
  if (base.mode() != DMode::Partite) throw std::invalid_argument("copies are built for d-partite families");
  DIntervalFamily f(base.d(), DMode::Partite);
  const Rational shrink = make_rational(9, 10);
  for (int c = 0; c < k; ++c)
    for (const auto& j : base.members()) {
      DInterval copy = j;
      for (auto& p : copy.pieces) {
        p.a = (c + p.a * shrink) / k;
        p.b = (c + p.b * shrink) / k;
      }
      f.add(std::move(copy));
    }
  return f;
}

}  // namespace families

constexpr std::size_t kExactMemberCap = 24;

inline void check_cap(const DIntervalFamily& f, std::size_t cap) {
  if (f.size() > cap) throw BudgetExceeded("family larger than the exact-routine cap");
}

struct PackingResult {
  int value = 0;
  std::vector<std::size_t> members;  // pairwise disjoint
};

/// Maximum pairwise-disjoint subfamily by branch and bound.
inline PackingResult nu(const DIntervalFamily& f, std::size_t cap = kExactMemberCap) {
  check_cap(f, cap);
  const std::size_t m = f.size();
  std::vector<std::uint32_t> meets(m, 0);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      if (x != y && intersects(f[x], f[y])) meets[x] |= 1U << y;
  std::uint32_t best = 0, cur = 0;
  auto rec = [&](auto&& self, std::uint32_t cand) -> void {
    if (std::popcount(cur) + std::popcount(cand) <= std::popcount(best)) return;
    if (!cand) {
      best = cur;
      return;
    }
    const int v = std::countr_zero(cand);
    const std::uint32_t bit = 1U << v;
    cur |= bit;
    self(self, cand & ~bit & ~meets[v]);
    cur &= ~bit;
    if (meets[v] & cand) self(self, cand & ~bit);
  };
  rec(rec, m == 32 ? ~0U : (1U << m) - 1);
  PackingResult res;
  for (std::size_t k = 0; k < m; ++k)
    if (best >> k & 1U) res.members.push_back(k);
  res.value = static_cast<int>(res.members.size());
  return res;
}

struct TransversalResult {
  int value = 0;
  std::vector<PiercePoint> points;
};

/// Minimum piercing set over the component endpoints, by exact set cover.
inline TransversalResult tau(const DIntervalFamily& f, std::size_t cap = kExactMemberCap) {
  check_cap(f, cap);
  const std::size_t m = f.size();
  if (m == 0) return {};
  auto pts = f.candidate_points();
  std::vector<std::uint32_t> cover(pts.size(), 0);
  for (std::size_t p = 0; p < pts.size(); ++p)
    for (std::size_t k = 0; k < m; ++k)
      if (f[k].contains(pts[p].line, pts[p].x)) cover[p] |= 1U << k;
  const std::uint32_t all = m == 32 ? ~0U : (1U << m) - 1;
  std::vector<std::size_t> chosen;
  auto rec = [&](auto&& self, std::uint32_t covered, int left) -> bool {
    if (covered == all) return true;
    if (left == 0) return false;
    // branch on the uncovered member with the fewest candidate points
    std::size_t target = m, fewest = pts.size() + 1;
    for (std::size_t k = 0; k < m; ++k) {
      if (covered >> k & 1U) continue;
      std::size_t c = 0;
      for (std::size_t p = 0; p < pts.size(); ++p) c += cover[p] >> k & 1U;
      if (c < fewest) {
        fewest = c;
        target = k;
      }
    }
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (!(cover[p] >> target & 1U)) continue;
      chosen.push_back(p);
      if (self(self, covered | cover[p], left - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (int k = 1;; ++k)
    if (rec(rec, 0, k)) {
      TransversalResult res;
      res.value = k;
      for (std::size_t p : chosen) res.points.push_back(pts[p]);
      return res;
    }
}

struct FractionalResult {
  Rational value;
  QVector packing;  // weight per member
  std::vector<std::pair<PiercePoint, Rational>> transversal;  // nonzero weights only
};

/// ν* and τ* as the primal/dual LP pair over the member/endpoint incidence matrix.
inline FractionalResult nu_star_tau_star(const DIntervalFamily& f, std::size_t cap = kExactMemberCap) {
  check_cap(f, cap);
  FractionalResult res;
  if (f.size() == 0) return res;
  const auto pts = f.candidate_points();
  const std::size_t m = f.size();
  LinearProgram pack;
  pack.vars = m;
  pack.objective.assign(m, Rational(1));
  for (const auto& p : pts) {
    QVector row(m, Rational(0));
    for (std::size_t k = 0; k < m; ++k)
      if (f[k].contains(p.line, p.x)) row[k] = 1;
    pack.add(std::move(row), Sense::Le, Rational(1));
  }
  LinearProgram cover;
  cover.vars = pts.size();
  cover.objective.assign(pts.size(), Rational(-1));
  for (std::size_t k = 0; k < m; ++k) {
    QVector row(pts.size(), Rational(0));
    for (std::size_t p = 0; p < pts.size(); ++p)
      if (f[k].contains(pts[p].line, pts[p].x)) row[p] = 1;
    cover.add(std::move(row), Sense::Ge, Rational(1));
  }
  auto primal = solve_lp(pack);
  auto dual = solve_lp(cover);
  if (primal.status != LpStatus::Optimal || dual.status != LpStatus::Optimal)
    throw std::logic_error("fractional LPs must be feasible and bounded");
  if (primal.value != -dual.value) throw std::logic_error("LP duality violated: ν* ≠ τ*");
  res.value = primal.value;
  res.packing = primal.x;
  for (std::size_t p = 0; p < pts.size(); ++p)
    if (dual.x[p] != 0) res.transversal.emplace_back(pts[p], dual.x[p]);
  return res;
}

/// t points per line (a multiset, sorted).
struct Trap {
  std::vector<std::vector<Rational>> points;

  int d() const { return static_cast<int>(points.size()); }
  int t() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }

  std::vector<PiercePoint> as_points() const {
    std::set<PiercePoint> s;
    for (int i = 0; i < d(); ++i)
      for (const auto& z : points[i]) s.insert({i, z});
    return {s.begin(), s.end()};
  }
};

/// Block i of x ∈ (σ^t)^d gives z_k = x_1 + … + x_k, k = 1..t.
inline Trap trap_from_simplex(const std::vector<QVector>& blocks) {
  Trap tr;
  for (const auto& x : blocks) {
    std::vector<Rational> z;
    Rational cum = 0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) z.push_back(cum += x[k]);
    tr.points.push_back(std::move(z));
  }
  return tr;
}

inline std::vector<QVector> simplex_from_trap(const Trap& tr) {
  std::vector<QVector> out;
  for (const auto& z : tr.points) {
    QVector x;
    Rational prev = 0;
    for (const auto& v : z) {
      x.push_back(v - prev);
      prev = v;
    }
    x.push_back(Rational(1) - prev);
    out.push_back(std::move(x));
  }
  return out;
}

using HoleType = std::vector<int>;  // hole index per line

struct EscapeHypergraph {
  int d = 0, t = 0;
  std::map<HoleType, Rational> edges;                 // q_H > 0 only
  std::map<HoleType, std::size_t> witness;            // a member attaining q_H
  std::vector<std::vector<Rational>> vertex_weight;   // [line][hole]

  Rational max_weight() const {
    Rational w = 0;
    for (const auto& row : vertex_weight)
      for (const auto& v : row) w = std::max(w, v);
    return w;
  }
  Rational min_weight() const {
    Rational w = vertex_weight.empty() ? Rational(0) : vertex_weight[0][0];
    for (const auto& row : vertex_weight)
      for (const auto& v : row) w = std::min(w, v);
    return w;
  }
};

namespace detail {

template <typename Num>
struct NumPiece {
  int line;
  Num a, b;
};

// Hole of [a,b] among sorted trap points on a line, with the distance to the
// nearest trap point; nullopt if the piece touches a trap point or sits in an
// empty hole.
template <typename Num>
std::optional<std::pair<int, Num>> hole_of(const std::vector<Num>& z, const Num& a, const Num& b) {
  const int t = static_cast<int>(z.size());
  const int j = static_cast<int>(std::lower_bound(z.begin(), z.end(), a) - z.begin());
  // z[j−1] < a ≤ z[j]
  if (j < t && z[j] <= b) return std::nullopt;
  std::optional<Num> dist;
  if (j > 0) dist = Num(a - z[j - 1]);
  if (j < t) dist = dist ? std::min<Num>(*dist, z[j] - b) : Num(z[j] - b);
  if (!dist) return std::pair<int, Num>{j, Num(0)};  // no trap points at all
  return std::pair<int, Num>{j, *dist};
}

template <typename Num>
void escape_edges(const std::vector<std::vector<NumPiece<Num>>>& fam, int d, const std::vector<std::vector<Num>>& trap,
                  std::map<HoleType, Num>& q, std::map<HoleType, std::size_t>* witness) {
  const int t = static_cast<int>(trap[0].size());
  for (std::size_t k = 0; k < fam.size(); ++k) {
    HoleType type(d, -1);
    Num dist(0);
    bool escapes = true;
    for (const auto& p : fam[k]) {
      auto h = hole_of(trap[p.line], p.a, p.b);
      if (!h) {
        escapes = false;
        break;
      }
      type[p.line] = h->first;
      dist = std::max(dist, h->second);
    }
    if (!escapes) continue;
    // absent components escape through every hole on their line
    std::vector<int> free_lines;
    for (int i = 0; i < d; ++i)
      if (type[i] < 0) free_lines.push_back(i);
    std::vector<int> idx(free_lines.size(), 0);
    for (;;) {
      for (std::size_t s = 0; s < free_lines.size(); ++s) type[free_lines[s]] = idx[s];
      auto [it, inserted] = q.emplace(type, dist);
      if (!inserted && dist > it->second) it->second = dist;
      if (witness && (inserted || it->second == dist)) (*witness)[type] = k;
      std::size_t s = 0;
      while (s < idx.size() && ++idx[s] > t) idx[s++] = 0;
      if (s == idx.size()) break;
    }
  }
}

}  // namespace detail

/// Edge weights q_H = max{dist(J,T) : J escapes through H}; zero-weight types are dropped.
inline EscapeHypergraph escape_hypergraph(const DIntervalFamily& f, const Trap& tr) {
  if (f.mode() != DMode::Partite) throw std::invalid_argument("escape hypergraphs are defined for d-partite families");
  if (tr.d() != f.d()) throw std::invalid_argument("trap needs one point set per line");
  for (const auto& z : tr.points)
    if (static_cast<int>(z.size()) != tr.t() || !std::is_sorted(z.begin(), z.end()))
      throw std::invalid_argument("trap lines need t sorted points each");
  if (tr.t() < 1) throw std::invalid_argument("trap needs t ≥ 1");
  std::vector<std::vector<detail::NumPiece<Rational>>> fam;
  for (const auto& j : f.members()) {
    std::vector<detail::NumPiece<Rational>> ps;
    for (const auto& p : j.pieces) ps.push_back({p.line, p.a, p.b});
    fam.push_back(std::move(ps));
  }
  EscapeHypergraph h;
  h.d = f.d();
  h.t = tr.t();
  std::map<HoleType, Rational> q;
  detail::escape_edges(fam, f.d(), tr.points, q, &h.witness);
  h.vertex_weight.assign(h.d, std::vector<Rational>(h.t + 1, Rational(0)));
  for (auto& [type, w] : q) {
    if (w <= 0) {
      h.witness.erase(type);
      continue;
    }
    h.edges.emplace(type, w);
    for (int i = 0; i < h.d; ++i) h.vertex_weight[i][type[i]] += w;
  }
  return h;
}

struct TrapResult {
  Trap trap;
  EscapeHypergraph hypergraph;
  Rational spread;           // max − min vertex weight (exact)
  Rational W;                // max vertex weight
  bool transversal = false;  // exact re-verification
  bool balanced = false;     // spread ≤ tol·max(W,1) or all weights zero
  double residual = 0;       // numeric |f(x) − barycenter|_∞
  std::size_t iterations = 0;
};

struct TrapOptions {
  double tol = 1e-6;
  double snap = 1e-3;  // trap points this close to an endpoint move onto it
  bool monotone = false;
  int max_iterations = 3000;
  int starts = 12;
  std::uint64_t seed = 1;
};

namespace detail {

// Exact trap point near a numeric one: the nearest endpoint within `snap` if
// there is one, else a dyadic rational.
inline Rational exact_trap_point(double z, const std::vector<Rational>& endpoints, double snap) {
  z = std::clamp(z, 0.0, 1.0);
  const Rational snapped = snap_to_rational(z);
  auto it = std::lower_bound(endpoints.begin(), endpoints.end(), snapped);
  std::optional<Rational> best;
  double gap = snap;
  for (auto c : {it, it == endpoints.begin() ? it : std::prev(it)})
    if (c != endpoints.end() && std::abs(to_double(*c) - z) <= gap) {
      gap = std::abs(to_double(*c) - z);
      best = *c;
    }
  return best ? *best : snapped;
}

}  // namespace detail

/// Searches x ∈ (σ^t)^d with all vertex weights of T(x) equal, via the map
/// f_ij = g_ij / S driven to the barycenter. The result is re-verified exactly.
inline TrapResult equalize_trap(const DIntervalFamily& f, int t, const TrapOptions& opt = {}) {
  if (t < 1) throw std::invalid_argument("t must be at least 1");
  if (f.mode() != DMode::Partite) throw std::invalid_argument("trap equalization needs a d-partite family");
  if (!f.complete()) throw std::invalid_argument("trap equalization needs every member to have all d components");
  const int d = f.d();
  std::vector<std::vector<detail::NumPiece<double>>> fam;
  std::vector<std::vector<Rational>> endpoints(d);
  for (const auto& j : f.members()) {
    std::vector<detail::NumPiece<double>> ps;
    for (const auto& p : j.pieces) {
      ps.push_back({p.line, to_double(p.a), to_double(p.b)});
      endpoints[p.line].push_back(p.a);
      endpoints[p.line].push_back(p.b);
    }
    fam.push_back(std::move(ps));
  }
  for (auto& e : endpoints) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
  }

  SimplexProduct prod{d, t + 1};
  auto trap_of = [&](const Vec& x) {
    std::vector<std::vector<double>> z(d);
    for (int i = 0; i < d; ++i) {
      double cum = 0;
      for (int k = 0; k < t; ++k) z[i].push_back(std::min(1.0, cum += x[i * (t + 1) + k]));
    }
    return z;
  };
  auto weights = [&](const Vec& x) {
    std::map<HoleType, double> q;
    detail::escape_edges(fam, d, trap_of(x), q, nullptr);
    Vec w(prod.dim(), 0.0);
    for (const auto& [type, v] : q)
      for (int i = 0; i < d; ++i) w[i * (t + 1) + type[i]] += v;
    // an empty hole holds nothing
    for (int k = 0; k < prod.dim(); ++k)
      if (x[k] <= 0) w[k] = 0;
    return w;
  };
  auto total = [&](const Vec& w) {
    double s = 0;
    for (int j = 0; j <= t; ++j) s += w[j];
    return s;
  };
  auto g = [&](const Vec& x) {
    Vec w = weights(x);
    const double s = total(w);
    if (s <= 0) return prod.barycenter();
    for (double& v : w) v /= s;
    return w;
  };
  TargetOptions topt;
  topt.tol = opt.tol;
  topt.max_iterations = opt.max_iterations;
  topt.starts = opt.starts;
  topt.seed = opt.seed;
  topt.monotone = opt.monotone;
  topt.face_samples = 0;  // faces hold by construction: empty holes carry zero weight
  auto exact_trap = [&](const Vec& x) {
    Trap trap;
    auto z = trap_of(x);
    for (int i = 0; i < d; ++i) {
      std::vector<Rational> pts;
      for (double v : z[i]) pts.push_back(detail::exact_trap_point(v, endpoints[i], opt.snap));
      std::sort(pts.begin(), pts.end());
      trap.points.push_back(std::move(pts));
    }
    return trap;
  };
  topt.stop = [&](const Vec& x) { return total(weights(x)) <= 0 || f.is_transversal(exact_trap(x).as_points()); };
  TargetResult tr = solve_to_target(prod, g, prod.barycenter(), topt);

  TrapResult res;
  res.iterations = tr.iterations;
  res.residual = tr.stopped ? 0 : tr.residual;
  res.trap = exact_trap(tr.x.empty() ? prod.barycenter() : tr.x);
  res.hypergraph = escape_hypergraph(f, res.trap);
  res.W = res.hypergraph.max_weight();
  res.spread = res.W - res.hypergraph.min_weight();
  res.transversal = f.is_transversal(res.trap.as_points());
  const Rational scale = std::max(res.W, Rational(1));
  res.balanced = res.W == 0 || to_double(res.spread) <= opt.tol * to_double(scale);
  return res;
}

struct KaiserResult {
  std::vector<PiercePoint> transversal;  // exactly verified
  int nu = 0;
  int t = 0;
  bool fallback = false;  // exact tau() witness used instead of a trap
  std::string note;
  std::size_t size() const { return transversal.size(); }
};

/// Trap with t = d·ν; on W = 0 the trap is a transversal of size ≤ d²ν.
inline KaiserResult kaiser_transversal(const DIntervalFamily& f, const TrapOptions& opt = {}) {
  KaiserResult res;
  res.nu = nu(f).value;
  res.t = f.d() * std::max(res.nu, 1);
  if (f.size() == 0) return res;
  if (f.complete()) {
    TrapOptions o = opt;
    for (int attempt = 0; attempt < 3; ++attempt) {
      auto tr = equalize_trap(f, res.t, o);
      if (tr.transversal) {
        res.transversal = tr.trap.as_points();
        if (!f.is_transversal(res.transversal)) throw std::logic_error("trap transversal failed re-verification");
        return res;
      }
      o.starts *= 2;
      o.max_iterations *= 2;
      o.seed += 1000;
    }
    res.note = "trap search did not reach W = 0";
  } else {
    res.note = "members with missing components";
  }
  res.fallback = true;
  res.transversal = tau(f).points;
  if (!f.is_transversal(res.transversal)) throw std::logic_error("fallback transversal failed re-verification");
  return res;
}

struct MatchingResult {
  std::vector<HoleType> edges;  // pairwise disjoint
  Rational total;               // Σ q̃_H
  std::size_t bound = 0;        // ⌈total / d⌉
};

/// Greedy matching by descending weight; the proof's bound is ⌈(t+1)/d⌉ when the
/// weights form a fractional matching of size t+1.
inline MatchingResult greedy_matching(const std::map<HoleType, Rational>& weights, int d, int t) {
  MatchingResult res;
  for (const auto& [e, w] : weights) res.total += w;
  if (res.total != t + 1) throw std::invalid_argument("normalized weights must sum to t+1");
  std::vector<std::pair<Rational, HoleType>> order;
  for (const auto& [e, w] : weights) order.emplace_back(w, e);
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (const auto& [w, e] : order) {
    bool disjoint = true;
    for (const auto& chosen : res.edges)
      for (int i = 0; i < d && disjoint; ++i)
        if (chosen[i] == e[i]) disjoint = false;
    if (disjoint) res.edges.push_back(e);
  }
  res.bound = static_cast<std::size_t>((t + 1 + d - 1) / d);
  return res;
}

/// q̃_H = q_H / W for a balanced trap.
inline std::map<HoleType, Rational> normalized_weights(const EscapeHypergraph& h) {
  const Rational w = h.max_weight();
  if (w == 0) throw std::invalid_argument("all weights are zero");
  std::map<HoleType, Rational> out;
  for (const auto& [e, q] : h.edges) out.emplace(e, q / w);
  return out;
}

/// Members escaping through the matched edges; pairwise disjoint.
inline std::vector<std::size_t> pull_back_matching(const EscapeHypergraph& h, const std::vector<HoleType>& matching) {
  std::vector<std::size_t> out;
  for (const auto& e : matching) out.push_back(h.witness.at(e));
  return out;
}

struct MultipointResult {
  int k = 0;                 // ⌈log₂(d+2)⌉
  bool hypothesis = false;   // every ≤ k members share a point
  std::optional<std::vector<PiercePoint>> multipoint;
};

/// Do the listed members have a common point?
inline bool common_point(const DIntervalFamily& f, const std::vector<std::size_t>& idx) {
  const int lines = f.mode() == DMode::Partite ? f.d() : 1;
  for (int line = 0; line < lines; ++line) {
    if (f.mode() == DMode::Partite) {
      Rational lo = 0, hi = 1;
      bool ok = true;
      for (auto k : idx) {
        const Piece* p = f[k].on_line(line);
        if (!p) {
          ok = false;
          break;
        }
        lo = std::max(lo, p->a);
        hi = std::min(hi, p->b);
      }
      if (ok && lo <= hi) return true;
    } else {
      for (const auto& cand : f.candidate_points()) {
        bool all = true;
        for (auto k : idx) all = all && f[k].contains(cand.line, cand.x);
        if (all) return true;
      }
    }
  }
  return idx.empty();
}

inline MultipointResult multipoint_search(const DIntervalFamily& f, const TrapOptions& opt = {}) {
  MultipointResult res;
  res.k = static_cast<int>(std::ceil(std::log2(f.d() + 2.0) - 1e-12));
  res.hypothesis = true;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (!res.hypothesis) return;
    if (!pick.empty() && !common_point(f, pick)) {
      res.hypothesis = false;
      return;
    }
    if (static_cast<int>(pick.size()) == res.k) return;
    for (std::size_t s = from; s < f.size(); ++s) {
      pick.push_back(s);
      self(self, s + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  if (f.size() == 0) {
    res.multipoint = std::vector<PiercePoint>{};
    return res;
  }
  if (!f.complete()) return res;
  auto tr = equalize_trap(f, 1, opt);
  if (tr.transversal) {
    std::vector<PiercePoint> pts;
    for (int i = 0; i < f.d(); ++i) pts.push_back({i, tr.trap.points[i][0]});
    if (f.is_transversal(pts)) res.multipoint = std::move(pts);
  }
  return res;
}

// Set pairs after Sgall, and the homogeneous lower-bound family built from them.

struct SimpleGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;

  explicit SimpleGraph(int vertices = 0) : n(vertices), adj(vertices) {}
  void add_edge(int u, int v) {
    if (u == v || has_edge(u, v)) return;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  bool has_edge(int u, int v) const { return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end(); }
  int max_degree() const {
    int m = 0;
    for (const auto& a : adj) m = std::max(m, static_cast<int>(a.size()));
    return m;
  }
};

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

inline std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int from) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int v = from; v < n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Every two disjoint b-sets are joined by an edge.
inline bool has_disjoint_sets_property(const SimpleGraph& g, int b) {
  const auto sets = k_subsets(g.n, b);
  for (const auto& a : sets)
    for (const auto& c : sets) {
      bool disjoint = true, joined = false;
      for (int u : a)
        for (int v : c) {
          if (u == v) disjoint = false;
          if (g.has_edge(u, v)) joined = true;
        }
      if (disjoint && !joined) return false;
    }
  return true;
}

/// Random graph of maximum degree ≤ b with the disjoint-b-sets property, for
/// n ≤ c·b²/ln b.
inline std::optional<SimpleGraph> sgall_expander(int n, int b, std::uint64_t seed, int attempts = 200, double c = 1.0) {
  if (b < 1 || n < 1) throw std::invalid_argument("need n, b ≥ 1");
  const double limit = b == 1 ? 2.0 : c * b * b / std::log(static_cast<double>(b));
  if (n > limit) throw std::invalid_argument("n exceeds c·b²/ln b");
  const std::uint64_t pairs = binomial(n, b) * binomial(n - b, b);
  if (pairs > 50'000'000) throw BudgetExceeded("too many b-set pairs to verify");
  std::mt19937_64 rng(seed);
  for (int a = 0; a < attempts; ++a) {
    SimpleGraph g(n);
    std::vector<std::pair<int, int>> all;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
    std::shuffle(all.begin(), all.end(), rng);
    for (auto [u, v] : all)
      if (static_cast<int>(g.adj[u].size()) < b && static_cast<int>(g.adj[v].size()) < b) g.add_edge(u, v);
    if (has_disjoint_sets_property(g, b)) return g;
  }
  return std::nullopt;
}

struct SgallReport {
  std::vector<std::vector<int>> a_sets;
  bool size_ok = true;  // |A_i| ≤ 3b
  bool c2_ok = true;
  std::optional<std::pair<std::size_t, std::size_t>> c2_violation;
  std::optional<std::size_t> size_violation;
};

/// A_i = B_i ∪ N(v_i) ∪ (V ∖ ∪_{u ∈ B_i} N(u)) with v_i = min B_i.
inline SgallReport sgall_sets(const std::vector<std::vector<int>>& bs, const SimpleGraph& g) {
  SgallReport rep;
  std::size_t b = bs.empty() ? 0 : bs[0].size();
  for (const auto& bi : bs) {
    if (bi.size() != b || bi.empty()) throw std::invalid_argument("all B_i need the same positive size");
    std::set<int> a(bi.begin(), bi.end());
    const int v = *std::min_element(bi.begin(), bi.end());
    a.insert(g.adj[v].begin(), g.adj[v].end());
    std::set<int> covered;
    for (int u : bi) covered.insert(g.adj[u].begin(), g.adj[u].end());
    for (int x = 0; x < g.n; ++x)
      if (!covered.count(x)) a.insert(x);
    if (a.size() > 3 * b && rep.size_ok) {
      rep.size_ok = false;
      rep.size_violation = rep.a_sets.size();
    }
    rep.a_sets.emplace_back(a.begin(), a.end());
  }
  auto meets = [](const std::vector<int>& x, const std::vector<int>& y) {
    for (int u : x)
      if (std::find(y.begin(), y.end(), u) != y.end()) return true;
    return false;
  };
  for (std::size_t i = 0; i < bs.size() && rep.c2_ok; ++i)
    for (std::size_t j = i + 1; j < bs.size(); ++j)
      if (!meets(rep.a_sets[i], bs[j]) && !meets(rep.a_sets[j], bs[i])) {
        rep.c2_ok = false;
        rep.c2_violation = std::pair{i, j};
        break;
      }
  return rep;
}

struct LowerBoundResult {
  DIntervalFamily family{1, DMode::Homogeneous};
  int b = 0, n = 0;
  std::size_t members_per_copy = 0;
  bool pairwise_intersecting = false;  // within each copy
  int nu = 0;
  std::optional<int> tau;  // when the family is small enough
};

/// J^i = (∪_{v ∈ B_i} I_v) ∪ {x_{u,i} : u ∈ A_i ∖ B_i} over all b-subsets B_i of
/// [n], b = ⌊d/3⌋, I_v = [2v, 2v+1]; k disjoint copies.
inline LowerBoundResult lower_bound_family(int d, int k, std::uint64_t seed = 1, int n = 0) {
  if (d < 3) throw std::invalid_argument("the construction needs d ≥ 3");
  if (k < 1) throw std::invalid_argument("k must be positive");
  LowerBoundResult res;
  res.b = d / 3;
  if (n == 0) n = res.b == 1 ? 2 : static_cast<int>(std::floor(res.b * res.b / std::log(static_cast<double>(res.b))));
  res.n = n;
  auto g = sgall_expander(n, res.b, seed);
  if (!g) throw std::runtime_error("no expander found");
  const auto bs = k_subsets(n, res.b);
  auto rep = sgall_sets(bs, *g);
  if (!rep.c2_ok || !rep.size_ok) throw std::logic_error("set pairs violate (C2) or the size bound");
  const std::size_t big_n = bs.size();
  res.members_per_copy = big_n;
  res.family = DIntervalFamily(d, DMode::Homogeneous);
  const Rational copy_width = 2 * n + 2;
  for (int c = 0; c < k; ++c) {
    const Rational off = copy_width * c;
    for (std::size_t i = 0; i < big_n; ++i) {
      DInterval j;
      for (int v : bs[i]) j.pieces.push_back({0, off + 2 * v, off + 2 * v + 1});
      for (int u : rep.a_sets[i])
        if (std::find(bs[i].begin(), bs[i].end(), u) == bs[i].end()) {
          const Rational x = off + 2 * u + make_rational(static_cast<long long>(i + 1), static_cast<long long>(big_n + 1));
          j.pieces.push_back({0, x, x});
        }
      res.family.add(std::move(j));
    }
  }
  res.pairwise_intersecting = true;
  for (std::size_t x = 0; x < big_n; ++x)
    for (std::size_t y = x + 1; y < big_n; ++y)
      if (!intersects(res.family[x], res.family[y])) res.pairwise_intersecting = false;
  if (res.family.size() <= kExactMemberCap) {
    res.nu = nu(res.family).value;
    res.tau = tau(res.family).value;
  } else {
    res.nu = res.pairwise_intersecting ? k : -1;
  }
  return res;
}

}  // namespace hexatope
