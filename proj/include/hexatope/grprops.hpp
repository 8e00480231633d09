#pragma once

// Graph, digraph and bipartite-graph properties as set families on the set of
// potential edges, with their symmetry groups, orbit congruences, the Illies
// family, exhaustive monotone sweeps, Yao's fixed complexes and the affine
// groups over GF(q).

#include "hexatope/budget.hpp"
#include "hexatope/scomplex.hpp"
#include "hexatope/setfam.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexatope {

enum class GraphKind { Graph, Digraph, Bipartite };

inline const char* to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Graph: return "graph";
    case GraphKind::Digraph: return "digraph";
    case GraphKind::Bipartite: return "bipartite";
  }
  return "?";
}

inline GraphKind parse_graph_kind(const std::string& s) {
  if (s == "graph") return GraphKind::Graph;
  if (s == "digraph") return GraphKind::Digraph;
  if (s == "bipartite") return GraphKind::Bipartite;
  throw std::invalid_argument("kind must be graph, digraph or bipartite");
}

/// Vertex set and potential edges. Bipartite shapes put V = 0..m−1 before W = m..m+n−1.
struct GraphShape {
  GraphKind kind = GraphKind::Graph;
  int n = 0;  // vertices (graph, digraph) or |W| (bipartite)
  int m = 0;  // |V| for bipartite, unused otherwise

  int vertices() const { return kind == GraphKind::Bipartite ? m + n : n; }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> e;
    switch (kind) {
      case GraphKind::Graph:
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
        break;
      case GraphKind::Digraph:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (i != j) e.emplace_back(i, j);
        break;
      case GraphKind::Bipartite:
        for (int v = 0; v < m; ++v)
          for (int w = 0; w < n; ++w) e.emplace_back(v, m + w);
        break;
    }
    return e;
  }

  void validate() const {
    const std::size_t size = edges().size();
    if (n < 1 || (kind == GraphKind::Bipartite && m < 1)) throw std::invalid_argument("empty vertex set");
    if (size > static_cast<std::size_t>(kMaxGround)) throw BudgetExceeded("more than 24 potential edges");
  }

  /// Generators of the symmetry group as vertex permutations: adjacent transpositions
  /// (within V and within W for bipartite shapes).
  std::vector<Perm> vertex_generators() const {
    std::vector<Perm> gens;
    auto swap_at = [&](int i) {
      Perm p(vertices());
      std::iota(p.begin(), p.end(), 0);
      std::swap(p[i], p[i + 1]);
      gens.push_back(p);
    };
    if (kind == GraphKind::Bipartite) {
      for (int i = 0; i + 1 < m; ++i) swap_at(i);
      for (int i = 0; i + 1 < n; ++i) swap_at(m + i);
    } else {
      for (int i = 0; i + 1 < n; ++i) swap_at(i);
    }
    return gens;
  }

  /// The permutation of potential edges induced by a vertex permutation.
  Perm edge_permutation(const Perm& vp) const {
    const auto e = edges();
    std::map<std::pair<int, int>, int> where;
    for (std::size_t k = 0; k < e.size(); ++k) where[e[k]] = static_cast<int>(k);
    Perm out(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
      int a = vp[e[k].first], b = vp[e[k].second];
      if (kind != GraphKind::Digraph && a > b) std::swap(a, b);
      auto it = where.find({a, b});
      if (it == where.end()) throw std::invalid_argument("vertex permutation does not preserve the shape");
      out[k] = it->second;
    }
    return out;
  }
};

inline Mask apply_perm(const Perm& p, Mask a) {
  Mask out = 0;
  for (; a; a &= a - 1) out |= Mask{1} << p[std::countr_zero(a)];
  return out;
}

/// Adjacency view of one edge subset.
struct GraphView {
  GraphShape shape;
  int v = 0;
  std::vector<std::uint32_t> out, in;  // neighbour bitmasks; equal for undirected shapes

  GraphView(const GraphShape& s, const std::vector<std::pair<int, int>>& edges, Mask a)
      : shape(s), v(s.vertices()), out(v, 0), in(v, 0) {
    for (; a; a &= a - 1) {
      const auto [i, j] = edges[std::countr_zero(a)];
      out[i] |= 1U << j;
      in[j] |= 1U << i;
      if (s.kind != GraphKind::Digraph) {
        out[j] |= 1U << i;
        in[i] |= 1U << j;
      }
    }
  }

  int degree(int x) const { return std::popcount(out[x]); }
  int in_degree(int x) const { return std::popcount(in[x]); }
  bool adjacent(int x, int y) const { return out[x] >> y & 1U; }
  int edge_count() const {
    int s = 0;
    for (auto o : out) s += std::popcount(o);
    return shape.kind == GraphKind::Digraph ? s : s / 2;
  }
};

using GraphPredicate = std::function<bool(const GraphView&)>;

class PropertyNotInvariant : public std::invalid_argument {
 public:
  PropertyNotInvariant(Mask a, Mask image)
      : std::invalid_argument("predicate is not invariant under renumbering: edge set " + std::to_string(a) +
                              " has it, its image " + std::to_string(image) + " does not"),
        member(a),
        image(image) {}
  Mask member, image;
};

struct PropertyFamily {
  GraphShape shape;
  std::string name;
  std::vector<std::pair<int, int>> edges;
  SetFamily family;
  std::vector<Perm> edge_generators;

  int ground() const { return static_cast<int>(edges.size()); }

  GroupAction group(std::size_t cap = 1'000'000) const { return GroupAction(ground(), edge_generators, cap); }
};

/// Enumerates F(P) and checks invariance on the generators.
inline PropertyFamily build_property(const GraphShape& shape, const std::string& name, const GraphPredicate& pred) {
  shape.validate();
  PropertyFamily p;
  p.shape = shape;
  p.name = name;
  p.edges = shape.edges();
  p.family = SetFamily::from_predicate(p.ground(), [&](Mask a) { return pred(GraphView(shape, p.edges, a)); });
  for (const Perm& vp : shape.vertex_generators()) p.edge_generators.push_back(shape.edge_permutation(vp));
  for (const Perm& g : p.edge_generators)
    for (Mask a = 0; a < p.family.universe(); ++a)
      if (p.family.contains(a) && !p.family.contains(apply_perm(g, a))) throw PropertyNotInvariant(a, apply_perm(g, a));
  return p;
}

namespace predicates {

inline bool connected(const GraphView& g) {
  if (g.v == 0) return true;
  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) next |= g.out[std::countr_zero(f)] | g.in[std::countr_zero(f)];
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == (g.v == 32 ? ~0U : (1U << g.v) - 1);
}

inline bool planar(const GraphView& g) {
  const int e = g.edge_count();
  if (e <= 8) return true;  // K5 and K3,3 need 10 and 9 edges
  if (g.v >= 3 && e > 3 * g.v - 6) return false;
  boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS> bg(g.v);
  for (int i = 0; i < g.v; ++i)
    for (int j = i + 1; j < g.v; ++j)
      if (g.adjacent(i, j)) boost::add_edge(i, j, bg);
  return boost::boyer_myrvold_planarity_test(bg);
}

/// A degree-1 vertex adjacent to a degree-2 vertex whose other neighbour has degree n−2.
inline bool scorpion(const GraphView& g) {
  for (int u = 0; u < g.v; ++u) {
    if (g.degree(u) != 1) continue;
    const int s = std::countr_zero(g.out[u]);
    if (g.degree(s) != 2) continue;
    const int t = std::countr_zero(g.out[s] & ~(1U << u));
    if (g.degree(t) == g.v - 2) return true;
  }
  return false;
}

/// Disjoint union of a star K_{1,n−4} and an arbitrary graph on 3 vertices.
inline bool star_union(const GraphView& g) {
  const int n = g.v;
  if (n < 4) return false;
  const std::uint32_t all = (1U << n) - 1;
  for (int c = 0; c < n; ++c) {
    if (g.degree(c) != n - 4) continue;
    const std::uint32_t leaves = g.out[c];
    const std::uint32_t rest = all & ~leaves & ~(1U << c);  // the three others
    bool ok = true;
    for (std::uint32_t l = leaves; l && ok; l &= l - 1) ok = g.out[std::countr_zero(l)] == (1U << c);
    for (std::uint32_t r = rest; r && ok; r &= r - 1) ok = (g.out[std::countr_zero(r)] & ~rest) == 0;
    if (ok) return true;
  }
  return false;
}

/// A vertex every other vertex points to, pointing nowhere itself.
inline bool has_sink(const GraphView& g) {
  for (int x = 0; x < g.v; ++x)
    if (g.in_degree(x) == g.v - 1 && g.out[x] == 0) return true;
  return false;
}

inline bool has_directed_cycle(const GraphView& g) {
  // repeatedly strip sources; a cycle survives
  std::uint32_t alive = (1U << g.v) - 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < g.v; ++x)
      if ((alive >> x & 1U) && (g.in[x] & alive) == 0) {
        alive &= ~(1U << x);
        changed = true;
      }
  }
  return alive != 0;
}

/// Vertices of V adjacent to all of W.
inline int full_rows(const GraphView& g) {
  const std::uint32_t w = ((1U << g.shape.n) - 1) << g.shape.m;
  int k = 0;
  for (int x = 0; x < g.shape.m; ++x) k += (g.out[x] & w) == w;
  return k;
}

}  // namespace predicates

inline std::vector<std::string> builtin_property_names() {
  return {"no_edge",  "at_most_k_edges", "connected",          "planar", "scorpion", "star_union",
          "has_sink", "has_directed_cycle", "complete_bipartite_threshold"};
}

/// `k` parameterizes at_most_k_edges and complete_bipartite_threshold (at most k
/// vertices of V are joined to all of W).
inline PropertyFamily builtin_property(const std::string& name, const GraphShape& shape, int k = 0) {
  auto need = [&](GraphKind kind) {
    if (shape.kind != kind) throw std::invalid_argument(name + " is a " + to_string(kind) + " property");
  };
  GraphPredicate pred;
  if (name == "no_edge") {
    pred = [](const GraphView& g) { return g.edge_count() == 0; };
  } else if (name == "at_most_k_edges") {
    pred = [k](const GraphView& g) { return g.edge_count() <= k; };
  } else if (name == "connected") {
    pred = predicates::connected;
  } else if (name == "planar") {
    need(GraphKind::Graph);
    pred = predicates::planar;
  } else if (name == "scorpion") {
    need(GraphKind::Graph);
    pred = predicates::scorpion;
  } else if (name == "star_union") {
    need(GraphKind::Graph);
    pred = predicates::star_union;
  } else if (name == "has_sink") {
    need(GraphKind::Digraph);
    pred = predicates::has_sink;
  } else if (name == "has_directed_cycle") {
    need(GraphKind::Digraph);
    pred = predicates::has_directed_cycle;
  } else if (name == "complete_bipartite_threshold") {
    need(GraphKind::Bipartite);
    pred = [k](const GraphView& g) { return predicates::full_rows(g) <= k; };
  } else {
    throw std::invalid_argument("unknown property '" + name + "'");
  }
  return build_property(shape, name, pred);
}

struct PropertySummary {
  int m = 0;
  std::size_t size = 0;
  long long euler = 0;
  bool trivial = false;
  std::optional<int> complexity;  // exact, when m ≤ cap
  std::optional<bool> evasive;
  bool odd_size_evasive_ok = true;  // |F| odd ⇒ evasive, when c is known
};

inline PropertySummary summarize(const SetFamily& f, int cap = ComplexityTable::kDefaultCap) {
  PropertySummary s;
  s.m = f.m();
  s.size = f.size();
  s.euler = euler_count(f);
  s.trivial = f.is_trivial();
  if (f.m() <= cap) {
    s.complexity = argument_complexity(f, cap);
    s.evasive = *s.complexity == f.m();
    if (s.size % 2 == 1) s.odd_size_evasive_ok = *s.evasive;
  }
  return s;
}

struct Orbit {
  int k = 0;  // cardinality of its members
  std::vector<Mask> members;
};

inline std::vector<Orbit> orbit_decomposition(const SetFamily& f, const GroupAction& g) {
  if (g.degree() != f.m()) throw std::invalid_argument("group acts on the wrong ground set");
  std::vector<Orbit> out;
  std::set<Mask> seen;
  for (Mask a : f.members()) {
    if (seen.count(a)) continue;
    std::set<Mask> orbit;
    for (const Perm& p : g.elements()) orbit.insert(apply_perm(p, a));
    Orbit o;
    o.k = std::popcount(a);
    for (Mask b : orbit) {
      if (!f.contains(b)) throw std::invalid_argument("family is not invariant under the group");
      seen.insert(b);
      o.members.push_back(b);
    }
    out.push_back(std::move(o));
  }
  return out;
}

struct CongruenceReport {
  int p = 0, t = 0;
  bool transitive = false;
  bool hypothesis = false;  // ∅ ∈ F, E ∉ F
  std::vector<Orbit> orbits;
  bool divisibility_ok = true;  // p | |O| for every orbit with 0 < k < p^t
  long long alternating_sum = 0;  // −f_{−1} + f_0 − f_1 + …
  bool alternating_ok = true;    // ≡ −1 (mod p), checked under the hypothesis
  std::optional<int> complexity;
  std::optional<bool> evasive;

  bool consistent() const {
    if (!transitive) return true;
    return divisibility_ok && alternating_ok && (!hypothesis || !evasive || *evasive);
  }
};

inline CongruenceReport orbit_congruence_check(const SetFamily& f, const GroupAction& g, int p) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  CongruenceReport r;
  r.p = p;
  long long q = 1;
  while (q < f.m()) {
    q *= p;
    ++r.t;
  }
  if (q != f.m() || r.t == 0) throw std::invalid_argument("ground set size is not a power of p");
  std::vector<int> points(f.m());
  std::iota(points.begin(), points.end(), 0);
  r.transitive = g.is_transitive_on(points);
  r.hypothesis = f.contains(0) && !f.contains(f.full_mask());
  r.orbits = orbit_decomposition(f, g);
  for (const auto& o : r.orbits)
    if (o.k > 0 && o.k < f.m() && o.members.size() % static_cast<std::size_t>(p) != 0) r.divisibility_ok = false;
  r.alternating_sum = -euler_count(f);
  if (r.hypothesis) r.alternating_ok = ((r.alternating_sum + 1) % p + p) % p == 0;
  if (f.m() <= ComplexityTable::kDefaultCap) {
    r.complexity = argument_complexity(f);
    r.evasive = *r.complexity == f.m();
  }
  return r;
}

struct IlliesFamily {
  SetFamily family{12};
  GroupAction group = GroupAction::cyclic_shift(12);
  std::vector<std::size_t> counts;  // members by cardinality 0..4
};

/// Elements 1..12 of the usual description are 0..11 here.
inline IlliesFamily illies_family() {
  IlliesFamily r;
  const std::vector<std::vector<int>> seeds{{}, {0}, {0, 3}, {0, 4}, {0, 3, 6}, {0, 4, 8}, {0, 3, 6, 9}};
  for (const auto& s : seeds)
    for (int shift = 0; shift < 12; ++shift) {
      Mask a = 0;
      for (int x : s) a |= Mask{1} << ((x + shift) % 12);
      r.family.insert(a);
    }
  r.counts.assign(5, 0);
  for (Mask a : r.family.members()) ++r.counts[std::popcount(a)];
  return r;
}

struct SweepReport {
  int n = 0, m = 0;
  std::size_t classes = 0;
  std::size_t families = 0;  // monotone (downward closed) invariant families, incl. trivial ones
  std::size_t nontrivial = 0;
  std::size_t evasive = 0;
  std::vector<SetFamily> violations;  // non-trivial and non-evasive
  std::map<int, std::size_t> complexity_histogram;
};

/// Isomorphism classes of graphs on n vertices, as sorted member lists.
inline std::vector<std::vector<Mask>> isomorphism_classes(const GraphShape& shape) {
  shape.validate();
  const auto gens = [&] {
    std::vector<Perm> e;
    for (const Perm& vp : shape.vertex_generators()) e.push_back(shape.edge_permutation(vp));
    return e;
  }();
  const int m = static_cast<int>(shape.edges().size());
  GroupAction g(m, gens, 1'000'000);
  std::vector<int> cls(std::size_t{1} << m, -1);
  std::vector<std::vector<Mask>> out;
  for (Mask a = 0; a < (Mask{1} << m); ++a) {
    if (cls[a] >= 0) continue;
    std::set<Mask> orbit;
    for (const Perm& p : g.elements()) orbit.insert(apply_perm(p, a));
    for (Mask b : orbit) cls[b] = static_cast<int>(out.size());
    out.emplace_back(orbit.begin(), orbit.end());
  }
  return out;
}

/// All monotone (closed under deleting edges) graph properties on n vertices, by
/// down-sets of the isomorphism-class poset, each with its exact complexity.
inline SweepReport monotone_sweep(int n, std::size_t max_families = 200'000) {
  if (n < 1 || n > 5) throw std::invalid_argument("monotone_sweep supports 1 ≤ n ≤ 5");
  GraphShape shape{GraphKind::Graph, n};
  auto classes = isomorphism_classes(shape);
  std::sort(classes.begin(), classes.end(),
            [](const auto& x, const auto& y) { return std::popcount(x[0]) < std::popcount(y[0]); });
  const int m = n * (n - 1) / 2;
  std::map<Mask, int> cls;
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (Mask a : classes[c]) cls[a] = static_cast<int>(c);
  // classes reached by deleting one edge from a representative
  std::vector<std::vector<int>> below(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::set<int> s;
    for (Mask r = classes[c][0]; r; r &= r - 1) s.insert(cls[classes[c][0] & ~(r & (~r + 1))]);
    below[c].assign(s.begin(), s.end());
  }
  SweepReport rep;
  rep.n = n;
  rep.m = m;
  rep.classes = classes.size();
  std::vector<bool> in(classes.size(), false);
  auto visit = [&]() {
    if (++rep.families > max_families) throw BudgetExceeded("too many monotone families");
    SetFamily f(m);
    for (std::size_t c = 0; c < classes.size(); ++c)
      if (in[c])
        for (Mask a : classes[c]) f.insert(a);
    const int c = argument_complexity(f);
    ++rep.complexity_histogram[c];
    if (f.is_trivial()) return;
    ++rep.nontrivial;
    if (c == m)
      ++rep.evasive;
    else
      rep.violations.push_back(f);
  };
  auto rec = [&](auto&& self, std::size_t c) -> void {
    if (c == classes.size()) {
      visit();
      return;
    }
    self(self, c + 1);
    if (std::all_of(below[c].begin(), below[c].end(), [&](int b) { return in[b]; })) {
      in[c] = true;
      self(self, c + 1);
      in[c] = false;
    }
  };
  rec(rec, 0);
  return rep;
}

struct YaoReport {
  int m = 0, n = 0, r = 0;
  std::size_t subdivision_faces = 0;
  long long reduced_euler = 0;  // of sd(Δ^{(r−1)}_{m−1}), counted directly
  long long formula = 0;        // (−1)^{r−1} C(m−1, r)
  std::optional<std::vector<long long>> reduced_betti;
  std::optional<long long> fixed_complex_euler;  // χ̃ of sd(K)^G for the threshold property, small m·n only

  bool matches() const { return reduced_euler == formula && (!fixed_complex_euler || *fixed_complex_euler == formula); }
};

inline long long binomial_ll(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// The fixed complex in Yao's argument: the barycentric subdivision of the
/// (r−1)-skeleton of the (m−1)-simplex. When m·n ≤ 6 the threshold property
/// "at most r vertices of V see all of W" is built and its Z_n-fixed subcomplex compared.
inline YaoReport yao_fixed_complex(int m, int n, int r, std::size_t betti_face_cap = 1500) {
  if (m < 1 || n < 1) throw std::invalid_argument("need m, n ≥ 1");
  if (r < 0 || r >= m) throw std::invalid_argument("need 0 ≤ r < m");
  if (m > 8) throw BudgetExceeded("skeleton subdivision limited to m ≤ 8");
  YaoReport rep;
  rep.m = m;
  rep.n = n;
  rep.r = r;
  std::vector<Face> faces;
  for (Mask a = 0; a < (Mask{1} << m); ++a)
    if (std::popcount(a) <= r) faces.push_back(SimplicialComplex::mask_to_face(a));
  auto skeleton = SimplicialComplex::from_faces(m, faces);
  auto sd = barycentric_subdivision(skeleton);
  rep.subdivision_faces = sd.complex.num_faces();
  rep.reduced_euler = sd.complex.euler_characteristic() - 1;
  rep.formula = ((r - 1) % 2 == 0 ? 1 : -1) * binomial_ll(m - 1, r);
  if (rep.subdivision_faces <= betti_face_cap) rep.reduced_betti = reduced_betti(sd.complex);
  if (m * n <= 6) {
    auto prop = builtin_property("complete_bipartite_threshold", GraphShape{GraphKind::Bipartite, n, m}, r);
    auto k = SimplicialComplex::from_family(prop.family);
    // Z_n rotating W, fixing V
    Perm vp(m + n);
    std::iota(vp.begin(), vp.end(), 0);
    for (int w = 0; w < n; ++w) vp[m + w] = m + (w + 1) % n;
    GroupAction g(m * n, {prop.shape.edge_permutation(vp)});
    rep.fixed_complex_euler = fixed_subcomplex(k, g).complex.euler_characteristic() - 1;
  }
  return rep;
}

struct GaloisField {
  int p = 0, t = 0, q = 0;
  std::vector<std::vector<int>> add, mul;

  int neg(int a) const {
    for (int b = 0; b < q; ++b)
      if (add[a][b] == 0) return b;
    throw std::logic_error("no additive inverse");
  }
  int inv(int a) const {
    for (int b = 1; b < q; ++b)
      if (mul[a][b] == 1) return b;
    throw std::invalid_argument("zero has no inverse");
  }
  int order(int a) const {
    int k = 1;
    for (int x = a; x != 1; x = mul[x][a]) ++k;
    return k;
  }
};

/// GF(q) for q ∈ {2,3,4,5,7,8,9}; elements are base-p digit vectors of polynomials,
/// reduced by x²+x+1 (q=4), x³+x+1 (q=8) or x²+1 (q=9).
inline GaloisField galois_field(int q) {
  static const std::map<int, std::tuple<int, int, std::vector<int>>> table{
      {2, {2, 1, {}}}, {3, {3, 1, {}}}, {5, {5, 1, {}}}, {7, {7, 1, {}}},
      {4, {2, 2, {1, 1}}}, {8, {2, 3, {1, 1, 0}}}, {9, {3, 2, {1, 0}}}};
  auto it = table.find(q);
  if (it == table.end()) throw std::invalid_argument("GF(q) is available for q ∈ {2,3,4,5,7,8,9}");
  const auto& [p, t, low] = it->second;  // x^t = −(low[0] + low[1] x + …)
  GaloisField f;
  f.p = p;
  f.t = t;
  f.q = q;
  auto digits = [&](int a) {
    std::vector<int> d(t);
    for (int i = 0; i < t; ++i, a /= p) d[i] = a % p;
    return d;
  };
  auto value = [&](const std::vector<int>& d) {
    int a = 0;
    for (int i = t - 1; i >= 0; --i) a = a * p + d[i];
    return a;
  };
  f.add.assign(q, std::vector<int>(q));
  f.mul.assign(q, std::vector<int>(q));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      auto x = digits(a), y = digits(b);
      std::vector<int> s(t);
      for (int i = 0; i < t; ++i) s[i] = (x[i] + y[i]) % p;
      f.add[a][b] = value(s);
      std::vector<int> prod(2 * t, 0);
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
      for (int k = 2 * t - 1; t > 1 && k >= t; --k) {
        const int c = prod[k];
        prod[k] = 0;
        for (int i = 0; i < t; ++i) prod[k - t + i] = ((prod[k - t + i] - c * low[i]) % p + p) % p;
      }
      prod.resize(t);
      f.mul[a][b] = value(prod);
    }
  return f;
}

struct KssGroupData {
  int q = 0;
  GaloisField field;
  std::vector<std::pair<int, int>> elements;  // (a, b) for x ↦ a x + b
  GraphShape shape;
  std::vector<Perm> vertex_perms, edge_perms;
  bool doubly_transitive = false;
  bool edge_transitive = false;
  bool p_normal = false;         // translations form a normal subgroup
  std::size_t p_order = 0;       // = q, a power of p
  bool quotient_cyclic = false;  // GF(q)^* has an element of order q − 1

  bool all_hold() const { return doubly_transitive && edge_transitive && p_normal && quotient_cyclic && p_order == static_cast<std::size_t>(q); }

  GroupAction edge_action() const {
    return GroupAction(static_cast<int>(shape.edges().size()), edge_perms, 1'000'000);
  }
};

inline KssGroupData kss_group_data(int q) {
  KssGroupData d;
  d.q = q;
  d.field = galois_field(q);
  d.shape = GraphShape{GraphKind::Graph, q};
  const auto& f = d.field;
  for (int a = 1; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      d.elements.emplace_back(a, b);
      Perm vp(q);
      for (int x = 0; x < q; ++x) vp[x] = f.add[f.mul[a][x]][b];
      d.vertex_perms.push_back(vp);
      if (q >= 2) d.edge_perms.push_back(d.shape.edge_permutation(vp));
    }
  std::set<std::pair<int, int>> images;
  for (const Perm& vp : d.vertex_perms) images.insert({vp[0], vp[q > 1 ? 1 : 0]});
  d.doubly_transitive = images.size() == static_cast<std::size_t>(q * (q - 1));
  const int m = static_cast<int>(d.shape.edges().size());
  std::set<int> orbit;
  for (const Perm& e : d.edge_perms) orbit.insert(e[0]);
  d.edge_transitive = m == 0 || orbit.size() == static_cast<std::size_t>(m);
  auto is_translation = [&](const Perm& vp) {
    for (int x = 0; x < q; ++x)
      if (vp[x] != f.add[x][vp[0]]) return false;
    return true;
  };
  std::vector<Perm> translations;
  for (const Perm& vp : d.vertex_perms)
    if (is_translation(vp)) translations.push_back(vp);
  d.p_order = translations.size();
  d.p_normal = true;
  for (const Perm& g : d.vertex_perms) {
    Perm ginv(q);
    for (int x = 0; x < q; ++x) ginv[g[x]] = x;
    for (const Perm& t : translations)
      if (!is_translation(GroupAction::compose(g, GroupAction::compose(t, ginv)))) d.p_normal = false;
  }
  for (int a = 1; a < q && !d.quotient_cyclic; ++a) d.quotient_cyclic = f.order(a) == q - 1;
  if (q == 2) d.quotient_cyclic = true;
  return d;
}

struct ScorpionProbe {
  int n = 0, m = 0;
  std::size_t size = 0;
  std::optional<int> complexity;
  std::string note;
};

/// Exact complexity of "being a scorpion graph" where the state table fits (m ≤ 15).
inline ScorpionProbe scorpion_complexity_probe(int n, const std::string& name = "scorpion") {
  ScorpionProbe r;
  r.n = n;
  r.m = n * (n - 1) / 2;
  if (r.m > kMaxGround) {
    r.note = "ground set beyond 24 potential edges";
    return r;
  }
  auto p = builtin_property(name, GraphShape{GraphKind::Graph, n});
  r.size = p.family.size();
  if (r.m <= ComplexityTable::kDefaultCap)
    r.complexity = argument_complexity(p.family);
  else
    r.note = "exact complexity needs 3^" + std::to_string(r.m) + " states, beyond the cap";
  return r;
}

}  // namespace hexatope
