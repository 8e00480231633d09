#pragma once

// Finite abstract simplicial complexes: links, evasiveness, collapses, exact homology,
// simplicial self-maps and finite group actions.

#include "hexatope/budget.hpp"
#include "hexatope/linalg.hpp"
#include "hexatope/setfam.hpp"

#include <boost/functional/hash.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hexatope {

using Face = std::vector<int>;  // strictly increasing vertex labels
using Perm = std::vector<int>;

inline bool face_less(const Face& a, const Face& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline Face normalize(Face f) {
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Downward closure of the given generating faces on labels 0..n−1.
  static SimplicialComplex from_facets(int n, const std::vector<Face>& generators) {
    std::set<Face> all;
    for (const Face& g0 : generators) {
      Face g = normalize(g0);
      for (int v : g)
        if (v < 0 || v >= n) throw std::invalid_argument("vertex label out of range");
      if (g.size() > 30) throw std::invalid_argument("face too large for closure");
      const std::uint32_t k = static_cast<std::uint32_t>(g.size());
      for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
        Face f;
        for (std::uint32_t i = 0; i < k; ++i)
          if (sub >> i & 1U) f.push_back(g[i]);
        all.insert(std::move(f));
      }
    }
    return from_face_set(n, all);
  }

  static SimplicialComplex from_faces(int n, const std::vector<Face>& faces) {
    std::set<Face> all;
    for (const Face& f : faces) all.insert(normalize(f));
    for (const Face& f : all) {
      for (int v : f)
        if (v < 0 || v >= n) throw std::invalid_argument("vertex label out of range");
      for (std::size_t i = 0; i < f.size(); ++i) {
        Face sub = f;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
        if (!all.count(sub)) throw std::invalid_argument("face list is not downward closed");
      }
    }
    return from_face_set(n, all);
  }

  static SimplicialComplex from_family(const SetFamily& f) {
    if (f.size() == 0) throw std::invalid_argument("empty family is not accepted as a complex");
    if (!f.is_downward_closed()) throw std::invalid_argument("family is not downward closed");
    std::vector<Face> faces;
    for (Mask a : f.members()) faces.push_back(mask_to_face(a));
    return from_faces(f.m(), faces);
  }

  static SimplicialComplex simplex(int n) {
    Face all(n);
    std::iota(all.begin(), all.end(), 0);
    return from_facets(n, {all});
  }

  static SimplicialComplex boundary_of_simplex(int n) {
    std::vector<Face> facets;
    for (int skip = 0; skip < n; ++skip) {
      Face f;
      for (int v = 0; v < n; ++v)
        if (v != skip) f.push_back(v);
      facets.push_back(f);
    }
    return from_facets(n, facets);
  }

  static Face mask_to_face(std::uint64_t a) {
    Face f;
    for (int v = 0; a; ++v, a >>= 1)
      if (a & 1U) f.push_back(v);
    return f;
  }
  static std::uint64_t face_to_mask(const Face& f) {
    std::uint64_t a = 0;
    for (int v : f) a |= std::uint64_t{1} << v;
    return a;
  }

  int ground_size() const { return n_; }
  const std::vector<Face>& faces() const { return faces_; }
  std::size_t num_faces() const { return faces_.size(); }
  bool empty() const { return faces_.empty(); }
  bool contains(const Face& f) const { return index_.count(f) > 0; }
  int index_of(const Face& f) const {
    auto it = index_.find(f);
    return it == index_.end() ? -1 : it->second;
  }

  std::vector<int> vertices() const {
    std::vector<int> vs;
    for (const Face& f : faces_)
      if (f.size() == 1) vs.push_back(f[0]);
    return vs;
  }

  int dimension() const { return faces_.empty() ? -2 : static_cast<int>(faces_.back().size()) - 1; }

  /// f_vector()[k] = number of faces with k vertices (so index 0 counts the empty face).
  std::vector<long long> f_vector() const {
    std::vector<long long> f(faces_.empty() ? 0 : faces_.back().size() + 1, 0);
    for (const Face& x : faces_) ++f[x.size()];
    return f;
  }

  std::vector<Face> facets() const {
    std::vector<Face> out;
    for (const Face& f : faces_) {
      bool maximal = true;
      for (int v = 0; v < n_ && maximal; ++v) {
        if (std::binary_search(f.begin(), f.end(), v)) continue;
        if (contains(normalize(with(f, v)))) maximal = false;
      }
      if (maximal) out.push_back(f);
    }
    return out;
  }

  bool is_vertex(int v) const { return contains(Face{v}); }

  SimplicialComplex link(int v) const {
    if (!is_vertex(v)) throw std::invalid_argument("not a vertex of the complex");
    std::vector<Face> out;
    for (const Face& f : faces_) {
      if (std::binary_search(f.begin(), f.end(), v)) continue;
      if (contains(normalize(with(f, v)))) out.push_back(f);
    }
    return from_faces(n_, out);
  }

  SimplicialComplex deletion(int v) const {
    if (!is_vertex(v)) throw std::invalid_argument("not a vertex of the complex");
    std::vector<Face> out;
    for (const Face& f : faces_)
      if (!std::binary_search(f.begin(), f.end(), v)) out.push_back(f);
    return from_faces(n_, out);
  }

  std::optional<int> cone_apex() const {
    if (faces_.empty()) return std::nullopt;
    auto fs = facets();
    for (int v : vertices()) {
      bool all = true;
      for (const Face& f : fs)
        if (!std::binary_search(f.begin(), f.end(), v)) {
          all = false;
          break;
        }
      if (all) return v;
    }
    return std::nullopt;
  }

  /// A full simplex on at least one vertex.
  bool is_simplex() const {
    auto vs = vertices();
    return !vs.empty() && contains(vs);
  }

  long long euler_characteristic() const {
    long long chi = 0;
    for (const Face& f : faces_)
      if (!f.empty()) chi += (f.size() % 2 == 1) ? 1 : -1;
    return chi;
  }

  SetFamily to_family() const {
    if (n_ > kMaxGround) throw std::invalid_argument("complex has more than 24 ground elements");
    SetFamily fam(n_);
    for (const Face& f : faces_) fam.insert(static_cast<Mask>(face_to_mask(f)));
    return fam;
  }

  /// Faces with exactly k vertices, in stored order.
  std::vector<int> faces_of_size(std::size_t k) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < faces_.size(); ++i)
      if (faces_[i].size() == k) out.push_back(static_cast<int>(i));
    return out;
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.n_ == b.n_ && a.faces_ == b.faces_;
  }

 private:
  static Face with(const Face& f, int v) {
    Face g = f;
    g.push_back(v);
    return g;
  }

  static SimplicialComplex from_face_set(int n, const std::set<Face>& all) {
    SimplicialComplex k;
    k.n_ = n;
    k.faces_.assign(all.begin(), all.end());
    std::sort(k.faces_.begin(), k.faces_.end(), face_less);
    for (std::size_t i = 0; i < k.faces_.size(); ++i) k.index_[k.faces_[i]] = static_cast<int>(i);
    return k;
  }

  int n_ = 0;
  std::vector<Face> faces_;
  std::map<Face, int> index_;
};

// ---------------------------------------------------------------------------
// non-evasiveness

namespace detail {

// A family over ground {0..k−1} as sorted masks.
struct SmallFamily {
  int k = 0;
  std::vector<std::uint32_t> masks;
};

inline std::uint32_t squeeze(std::uint32_t a, int e) {
  const std::uint32_t low = (std::uint32_t{1} << e) - 1;
  return (a & low) | ((a >> 1) & ~low);
}

inline SmallFamily restrict_small(const SmallFamily& f, int e, bool yes) {
  SmallFamily g;
  g.k = f.k - 1;
  const std::uint32_t bit = std::uint32_t{1} << e;
  for (auto a : f.masks)
    if (((a & bit) != 0) == yes) g.masks.push_back(squeeze(a & ~bit, e));
  std::sort(g.masks.begin(), g.masks.end());
  return g;
}

inline std::vector<std::uint32_t> relabel(const std::vector<std::uint32_t>& masks, const std::vector<int>& perm) {
  std::vector<std::uint32_t> out;
  out.reserve(masks.size());
  for (auto a : masks) {
    std::uint32_t b = 0;
    for (std::size_t v = 0; v < perm.size(); ++v)
      if (a >> v & 1U) b |= std::uint32_t{1} << perm[v];
    out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Minimal relabeling among orderings compatible with a per-vertex invariant.
inline std::vector<std::uint32_t> canonical_masks(const SmallFamily& f) {
  std::vector<std::vector<int>> signature(f.k, std::vector<int>(f.k + 1, 0));
  for (auto a : f.masks)
    for (int v = 0; v < f.k; ++v)
      if (a >> v & 1U) ++signature[v][std::popcount(a)];
  std::vector<int> order(f.k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return signature[a] < signature[b]; });
  std::vector<std::pair<int, int>> blocks;
  for (int i = 0; i < f.k;) {
    int j = i;
    while (j < f.k && signature[order[j]] == signature[order[i]]) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }
  std::vector<std::uint32_t> best;
  bool have = false;
  std::vector<int> perm(f.k);
  auto rec = [&](auto&& self, std::size_t b) -> void {
    if (b == blocks.size()) {
      for (int pos = 0; pos < f.k; ++pos) perm[order[pos]] = pos;
      auto cand = relabel(f.masks, perm);
      if (!have || cand < best) {
        best = std::move(cand);
        have = true;
      }
      return;
    }
    auto [lo, hi] = blocks[b];
    std::sort(order.begin() + lo, order.begin() + hi);
    do {
      self(self, b + 1);
    } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
  };
  rec(rec, 0);
  return best;
}

class NonevasiveSearch {
 public:
  explicit NonevasiveSearch(int canonical_limit) : canonical_limit_(canonical_limit) {}

  bool run(const SmallFamily& f) {
    const std::size_t full = std::size_t{1} << f.k;
    if (f.masks.empty() || f.masks.size() == full) return f.k >= 1;
    std::string key = make_key(f);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result = false;
    for (int e = 0; e < f.k && !result; ++e)
      result = run(restrict_small(f, e, true)) && run(restrict_small(f, e, false));
    memo_.emplace(std::move(key), result);
    return result;
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  std::string make_key(const SmallFamily& f) const {
    auto masks = f.k <= canonical_limit_ ? canonical_masks(f) : f.masks;
    std::string key(1, static_cast<char>(f.k));
    key.append(reinterpret_cast<const char*>(masks.data()), masks.size() * sizeof(std::uint32_t));
    return key;
  }

  int canonical_limit_;
  std::unordered_map<std::string, bool> memo_;
};

}  // namespace detail

/// Non-evasiveness over the vertex set of K, i.e. c(K) < number of vertices.
/// The complex {∅} has no vertices and is treated as evasive (c = 0 = m).
inline bool is_nonevasive(const SimplicialComplex& k, int vertex_cap = 24, int canonical_limit = 8) {
  if (k.empty()) throw std::invalid_argument("the empty complex is not accepted");
  auto vs = k.vertices();
  if (static_cast<int>(vs.size()) > std::min(vertex_cap, 31))
    throw BudgetExceeded("non-evasiveness search limited to " + std::to_string(vertex_cap) + " vertices");
  std::vector<int> pos(k.ground_size(), -1);
  for (std::size_t i = 0; i < vs.size(); ++i) pos[vs[i]] = static_cast<int>(i);
  detail::SmallFamily f;
  f.k = static_cast<int>(vs.size());
  for (const Face& face : k.faces()) {
    std::uint32_t a = 0;
    for (int v : face) a |= std::uint32_t{1} << pos[v];
    f.masks.push_back(a);
  }
  std::sort(f.masks.begin(), f.masks.end());
  detail::NonevasiveSearch search(canonical_limit);
  return search.run(f);
}

// ---------------------------------------------------------------------------
// collapsibility

struct CollapseResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<std::pair<Face, Face>> sequence;  // (free face, its unique proper coface)
  std::size_t nodes = 0;
};

inline CollapseResult is_collapsible(const SimplicialComplex& k, std::size_t node_budget = 200000) {
  if (k.ground_size() > 64) throw std::invalid_argument("collapsibility search limited to 64 vertices");
  using State = std::vector<std::uint64_t>;
  struct StateHash {
    std::size_t operator()(const State& s) const { return boost::hash_range(s.begin(), s.end()); }
  };
  CollapseResult res;
  State start;
  for (const Face& f : k.faces())
    if (!f.empty()) start.push_back(SimplicialComplex::face_to_mask(f));
  std::sort(start.begin(), start.end());
  if (start.empty()) {
    res.verdict = Verdict::False;
    return res;
  }
  const int n = k.ground_size();
  std::unordered_set<State, StateHash> failed;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> path;
  bool out_of_budget = false;

  auto free_pairs = [&](const State& s) {
    std::unordered_set<std::uint64_t> present(s.begin(), s.end());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (auto a : s) {
      std::uint64_t coface = 0;
      int count = 0;
      for (int v = 0; v < n && count < 2; ++v) {
        const std::uint64_t bit = std::uint64_t{1} << v;
        if (a & bit) continue;
        if (present.count(a | bit)) {
          coface = a | bit;
          ++count;
        }
      }
      if (count == 1) pairs.emplace_back(a, coface);
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
      return std::popcount(x.second) > std::popcount(y.second);
    });
    return pairs;
  };

  auto dfs = [&](auto&& self, const State& s) -> bool {
    if (s.size() == 1) return true;
    if (failed.count(s)) return false;
    if (++res.nodes > node_budget) {
      out_of_budget = true;
      return false;
    }
    for (auto [a, b] : free_pairs(s)) {
      State next;
      next.reserve(s.size() - 2);
      for (auto x : s)
        if (x != a && x != b) next.push_back(x);
      path.emplace_back(a, b);
      if (self(self, next)) return true;
      path.pop_back();
      if (out_of_budget) return false;
    }
    failed.insert(s);
    return false;
  };

  if (dfs(dfs, start)) {
    res.verdict = Verdict::True;
    for (auto [a, b] : path)
      res.sequence.emplace_back(SimplicialComplex::mask_to_face(a), SimplicialComplex::mask_to_face(b));
  } else {
    res.verdict = out_of_budget ? Verdict::Unknown : Verdict::False;
  }
  return res;
}

/// Replays a collapse sequence and reports whether it ends in a single vertex.
inline bool replay_collapses(const SimplicialComplex& k, const std::vector<std::pair<Face, Face>>& seq) {
  std::set<Face> cur;
  for (const Face& f : k.faces())
    if (!f.empty()) cur.insert(f);
  for (const auto& [a, b] : seq) {
    if (!cur.count(a) || !cur.count(b) || b.size() != a.size() + 1) return false;
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
    for (const Face& f : cur)
      if (f != b && f.size() > a.size() && std::includes(f.begin(), f.end(), a.begin(), a.end()))
        return false;
    cur.erase(a);
    cur.erase(b);
  }
  return cur.size() == 1;
}

// ---------------------------------------------------------------------------
// homology

/// Boundary matrix from faces with `size` vertices to faces with `size − 1` vertices.
inline IMatrix boundary_matrix(const SimplicialComplex& k, std::size_t size) {
  auto cols = k.faces_of_size(size);
  auto rows = k.faces_of_size(size - 1);
  std::map<int, std::size_t> row_pos;
  for (std::size_t r = 0; r < rows.size(); ++r) row_pos[rows[r]] = r;
  IMatrix d(rows.size(), std::vector<long long>(cols.size(), 0));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Face& f = k.faces()[cols[c]];
    for (std::size_t j = 0; j < f.size(); ++j) {
      Face sub = f;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(j));
      d[row_pos.at(k.index_of(sub))][c] = (j % 2 == 0) ? 1 : -1;
    }
  }
  return d;
}

namespace detail {

template <typename RankFn>
std::vector<long long> reduced_betti_with(const SimplicialComplex& k, RankFn&& rank) {
  if (k.empty()) return {};
  auto f = k.f_vector();  // f[s] counts faces with s vertices
  const std::size_t top = f.size() - 1;
  std::vector<long long> ranks(top + 2, 0);  // ranks[s] = rank of ∂ on s-vertex chains
  for (std::size_t s = 1; s <= top; ++s) {
    auto d = boundary_matrix(k, s);
    ranks[s] = (d.empty() || d.front().empty()) ? 0 : static_cast<long long>(rank(d));
  }
  std::vector<long long> betti(top + 1);
  for (std::size_t s = 0; s <= top; ++s) betti[s] = f[s] - ranks[s] - ranks[s + 1];
  return betti;
}

}  // namespace detail

/// Reduced Betti numbers over Q; entry s is β̃ in dimension s − 1 (entry 0 is dimension −1).
inline std::vector<long long> reduced_betti(const SimplicialComplex& k) {
  return detail::reduced_betti_with(k, [](const IMatrix& d) { return rank_integer(d); });
}

inline std::vector<long long> reduced_betti_mod_p(const SimplicialComplex& k, long long p) {
  return detail::reduced_betti_with(k, [p](const IMatrix& d) { return rank_mod_p(d, p); });
}

inline bool is_q_acyclic(const SimplicialComplex& k) {
  auto b = reduced_betti(k);
  return !b.empty() && std::all_of(b.begin(), b.end(), [](long long x) { return x == 0; });
}

inline bool mod_p_acyclic(const SimplicialComplex& k, long long p) {
  auto b = reduced_betti_mod_p(k, p);
  return !b.empty() && std::all_of(b.begin(), b.end(), [](long long x) { return x == 0; });
}

// ---------------------------------------------------------------------------
// simplicial maps

inline bool is_simplicial_map(const SimplicialComplex& k, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != k.ground_size()) return false;
  for (const Face& face : k.faces()) {
    Face img;
    for (int v : face) {
      if (f[v] < 0 || f[v] >= k.ground_size()) return false;
      img.push_back(f[v]);
    }
    if (!k.contains(normalize(img))) return false;
  }
  return true;
}

/// Induced maps on oriented chains; mats[i] acts on i-dimensional chains (faces with i+1 vertices).
struct ChainMap {
  std::vector<IMatrix> mats;

  static ChainMap from_vertex_map(const SimplicialComplex& k, const std::vector<int>& f) {
    if (!is_simplicial_map(k, f)) throw std::invalid_argument("vertex map is not simplicial");
    ChainMap cm;
    const int dim = k.dimension();
    for (int i = 0; i <= dim; ++i) {
      auto idx = k.faces_of_size(i + 1);
      std::map<int, std::size_t> pos;
      for (std::size_t r = 0; r < idx.size(); ++r) pos[idx[r]] = r;
      IMatrix m(idx.size(), std::vector<long long>(idx.size(), 0));
      for (std::size_t c = 0; c < idx.size(); ++c) {
        const Face& face = k.faces()[idx[c]];
        Face img;
        for (int v : face) img.push_back(f[v]);
        int inversions = 0;
        bool degenerate = false;
        for (std::size_t a = 0; a < img.size(); ++a)
          for (std::size_t b = a + 1; b < img.size(); ++b) {
            if (img[a] == img[b]) degenerate = true;
            if (img[a] > img[b]) ++inversions;
          }
        if (degenerate) continue;
        m[pos.at(k.index_of(normalize(img)))][c] = (inversions % 2 == 0) ? 1 : -1;
      }
      cm.mats.push_back(std::move(m));
    }
    cm.verify(k);
    return cm;
  }

  static ChainMap from_matrices(const SimplicialComplex& k, std::vector<IMatrix> mats) {
    ChainMap cm;
    cm.mats = std::move(mats);
    cm.verify(k);
    return cm;
  }

  /// Throws unless ∂ f_# = f_# ∂ in every dimension.
  void verify(const SimplicialComplex& k) const {
    const int dim = k.dimension();
    if (static_cast<int>(mats.size()) != dim + 1) throw std::invalid_argument("chain map has wrong length");
    for (int i = 1; i <= dim; ++i) {
      auto d = boundary_matrix(k, i + 1);
      const std::size_t lo = k.faces_of_size(i).size(), hi = k.faces_of_size(i + 1).size();
      auto left = mat_mul(d, mats[i], hi, hi);
      auto right = mat_mul(mats[i - 1], d, lo, hi);
      if (left != right) throw std::invalid_argument("map does not commute with the boundary");
    }
  }

  long long chain_trace(int i) const {
    long long t = 0;
    for (std::size_t r = 0; r < mats[i].size(); ++r) t += mats[i][r][r];
    return t;
  }
};

inline long long alternating_chain_trace(const ChainMap& cm) {
  long long s = 0;
  for (std::size_t i = 0; i < cm.mats.size(); ++i) s += (i % 2 == 0 ? 1 : -1) * cm.chain_trace(static_cast<int>(i));
  return s;
}

/// Trace of the induced map on H_i(K; Q).
inline Rational homology_trace(const SimplicialComplex& k, const ChainMap& cm, int i) {
  const std::size_t ci = k.faces_of_size(i + 1).size();
  std::vector<QVector> cycles;
  if (i == 0) {
    for (std::size_t j = 0; j < ci; ++j) {
      QVector e(ci);
      e[j] = 1;
      cycles.push_back(std::move(e));
    }
  } else {
    cycles = nullspace(to_rational(boundary_matrix(k, i + 1)), ci);
  }
  std::vector<QVector> boundaries;
  if (i < k.dimension()) {
    auto d = boundary_matrix(k, i + 2);
    const std::size_t cols = d.empty() ? 0 : d.front().size();
    for (std::size_t c = 0; c < cols; ++c) {
      QVector col(ci);
      for (std::size_t r = 0; r < ci; ++r) col[r] = d[r][c];
      boundaries.push_back(std::move(col));
    }
  }
  std::vector<QVector> basis = independent_subset(boundaries);
  const std::size_t nb = basis.size();
  for (const auto& z : cycles) {
    auto trial = basis;
    trial.push_back(z);
    if (independent_subset(trial).size() == trial.size()) basis = std::move(trial);
  }
  Rational trace;
  const QMatrix f = to_rational(cm.mats[i]);
  for (std::size_t j = nb; j < basis.size(); ++j) {
    auto coords = coordinates(basis, mat_vec(f, basis[j]));
    if (!coords) throw std::logic_error("image of a cycle left the cycle space");
    trace += (*coords)[j];
  }
  return trace;
}

inline Rational lefschetz_number(const SimplicialComplex& k, const std::vector<int>& f) {
  auto cm = ChainMap::from_vertex_map(k, f);
  Rational l;
  for (int i = 0; i <= k.dimension(); ++i) {
    Rational t = homology_trace(k, cm, i);
    l += (i % 2 == 0) ? t : Rational(-t);
  }
  return l;
}

inline bool hopf_trace_check(const SimplicialComplex& k, const std::vector<int>& f) {
  auto cm = ChainMap::from_vertex_map(k, f);
  return lefschetz_number(k, f) == Rational(alternating_chain_trace(cm));
}

// ---------------------------------------------------------------------------
// subdivision and group actions

struct Subdivision {
  SimplicialComplex complex;
  std::vector<Face> carriers;  // vertex j of `complex` is the barycenter of carriers[j]
};

inline Subdivision barycentric_subdivision(const SimplicialComplex& k) {
  Subdivision sd;
  for (const Face& f : k.faces())
    if (!f.empty()) sd.carriers.push_back(f);
  const int nv = static_cast<int>(sd.carriers.size());
  std::vector<std::vector<int>> up(nv);
  for (int a = 0; a < nv; ++a)
    for (int b = 0; b < nv; ++b)
      if (sd.carriers[b].size() > sd.carriers[a].size() &&
          std::includes(sd.carriers[b].begin(), sd.carriers[b].end(), sd.carriers[a].begin(), sd.carriers[a].end()))
        up[a].push_back(b);
  std::vector<Face> chains{{}};
  Face chain;
  auto extend = [&](auto&& self, int last) -> void {
    chains.push_back(chain);
    for (int b : up[last]) {
      chain.push_back(b);
      self(self, b);
      chain.pop_back();
    }
  };
  for (int a = 0; a < nv; ++a) {
    chain = {a};
    extend(extend, a);
  }
  sd.complex = SimplicialComplex::from_faces(nv, chains);
  return sd;
}

inline std::string format_permutation(const Perm& p) {
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (seen[s] || p[s] == static_cast<int>(s)) continue;
    out += "(";
    for (std::size_t x = s; !seen[x]; x = static_cast<std::size_t>(p[x])) {
      seen[x] = true;
      if (out.back() != '(') out += " ";
      out += std::to_string(x);
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

inline Perm parse_permutation(int n, const std::string& text) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<bool> used(n, false);
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    if (text[pos] != '(') throw std::invalid_argument("malformed cycle notation");
    const std::size_t close = text.find(')', pos);
    if (close == std::string::npos) throw std::invalid_argument("unterminated cycle");
    std::istringstream cyc(text.substr(pos + 1, close - pos - 1));
    std::vector<int> elems;
    for (int x; cyc >> x;) {
      if (x < 0 || x >= n || used[x]) throw std::invalid_argument("invalid point in cycle notation");
      used[x] = true;
      elems.push_back(x);
    }
    for (std::size_t i = 0; i < elems.size(); ++i) p[elems[i]] = elems[(i + 1) % elems.size()];
    pos = close + 1;
  }
  return p;
}

class GroupAction {
 public:
  static constexpr std::size_t kDefaultCap = 10080;

  GroupAction(int n, std::vector<Perm> generators, std::size_t cap = kDefaultCap)
      : n_(n), generators_(std::move(generators)) {
    Perm id(n);
    std::iota(id.begin(), id.end(), 0);
    for (const Perm& g : generators_) {
      if (static_cast<int>(g.size()) != n) throw std::invalid_argument("generator has wrong degree");
      Perm s = g;
      std::sort(s.begin(), s.end());
      if (s != id) throw std::invalid_argument("generator is not a permutation");
    }
    std::set<Perm> seen{id};
    std::vector<Perm> frontier{id};
    elements_.push_back(id);
    while (!frontier.empty()) {
      std::vector<Perm> next;
      for (const Perm& h : frontier)
        for (const Perm& g : generators_) {
          Perm c = compose(g, h);
          if (seen.insert(c).second) {
            if (seen.size() > cap) throw BudgetExceeded("group closure exceeds " + std::to_string(cap) + " elements");
            elements_.push_back(c);
            next.push_back(std::move(c));
          }
        }
      frontier = std::move(next);
    }
  }

  static GroupAction trivial(int n) { return GroupAction(n, {}); }

  static GroupAction cyclic_shift(int n, int step = 1) {
    Perm g(n);
    for (int i = 0; i < n; ++i) g[i] = (i + step) % n;
    return GroupAction(n, {g});
  }

  static GroupAction symmetric(int n) {
    std::vector<Perm> gens;
    for (int i = 0; i + 1 < n; ++i) {
      Perm t(n);
      std::iota(t.begin(), t.end(), 0);
      std::swap(t[i], t[i + 1]);
      gens.push_back(t);
    }
    return GroupAction(n, gens);
  }

  /// (g ∘ h)(x) = g(h(x)).
  static Perm compose(const Perm& g, const Perm& h) {
    Perm c(h.size());
    for (std::size_t x = 0; x < h.size(); ++x) c[x] = g[h[x]];
    return c;
  }

  static Face apply(const Perm& g, const Face& f) {
    Face img;
    for (int v : f) img.push_back(g[v]);
    return normalize(img);
  }

  int degree() const { return n_; }
  const std::vector<Perm>& generators() const { return generators_; }
  const std::vector<Perm>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }

  bool preserves(const SimplicialComplex& k) const {
    if (k.ground_size() != n_) return false;
    for (const Perm& g : generators_)
      for (const Face& f : k.faces())
        if (!k.contains(apply(g, f))) return false;
    return true;
  }

  bool is_transitive_on(const std::vector<int>& points) const {
    if (points.empty()) return true;
    std::set<int> orbit;
    for (const Perm& g : elements_) orbit.insert(g[points.front()]);
    return orbit == std::set<int>(points.begin(), points.end());
  }

  bool fixes(const Face& f) const {
    for (const Perm& g : generators_)
      if (apply(g, f) != f) return false;
    return true;
  }

  /// The action induced on the vertices of a subdivision (faces of the original complex).
  GroupAction induced_on(const Subdivision& sd) const {
    std::map<Face, int> where;
    for (std::size_t j = 0; j < sd.carriers.size(); ++j) where[sd.carriers[j]] = static_cast<int>(j);
    std::vector<Perm> gens;
    for (const Perm& g : generators_) {
      Perm h(sd.carriers.size());
      for (std::size_t j = 0; j < sd.carriers.size(); ++j) {
        auto it = where.find(apply(g, sd.carriers[j]));
        if (it == where.end()) throw std::invalid_argument("action does not preserve the complex");
        h[j] = it->second;
      }
      gens.push_back(std::move(h));
    }
    return GroupAction(static_cast<int>(sd.carriers.size()), gens, std::max<std::size_t>(order(), 1));
  }

  /// Orbit index of every point.
  std::vector<int> orbit_ids() const {
    std::vector<int> id(n_, -1);
    int next = 0;
    for (int x = 0; x < n_; ++x) {
      if (id[x] >= 0) continue;
      for (const Perm& g : elements_) id[g[x]] = next;
      ++next;
    }
    return id;
  }

 private:
  int n_;
  std::vector<Perm> generators_;
  std::vector<Perm> elements_;
};

/// Subcomplex of sd(K) spanned by the G-invariant faces; vertex labels follow sd(K)'s carriers.
inline Subdivision fixed_subcomplex(const SimplicialComplex& k, const GroupAction& g) {
  if (!g.preserves(k)) throw std::invalid_argument("action does not preserve the complex");
  Subdivision out;
  for (const Face& f : k.faces())
    if (!f.empty()) out.carriers.push_back(f);
  std::vector<int> fixed;
  for (std::size_t j = 0; j < out.carriers.size(); ++j)
    if (g.fixes(out.carriers[j])) fixed.push_back(static_cast<int>(j));
  std::vector<Face> chains{{}};
  Face chain;
  auto extend = [&](auto&& self, std::size_t from) -> void {
    chains.push_back(chain);
    const Face& last = out.carriers[chain.back()];
    for (std::size_t i = from; i < fixed.size(); ++i) {
      const Face& c = out.carriers[fixed[i]];
      if (c.size() > last.size() && std::includes(c.begin(), c.end(), last.begin(), last.end())) {
        chain.push_back(fixed[i]);
        self(self, i + 1);
        chain.pop_back();
      }
    }
  };
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    chain = {fixed[i]};
    extend(extend, i + 1);
  }
  out.complex = SimplicialComplex::from_faces(static_cast<int>(out.carriers.size()), chains);
  return out;
}

/// |K|/G realized as the orbit image of sd(sd(K)).
inline SimplicialComplex quotient_complex(const SimplicialComplex& k, const GroupAction& g) {
  if (!g.preserves(k)) throw std::invalid_argument("action does not preserve the complex");
  auto sd1 = barycentric_subdivision(k);
  auto g1 = g.induced_on(sd1);
  auto sd2 = barycentric_subdivision(sd1.complex);
  auto g2 = g1.induced_on(sd2);
  auto orbit = g2.orbit_ids();
  const int orbits = orbit.empty() ? 0 : *std::max_element(orbit.begin(), orbit.end()) + 1;
  std::set<Face> images;
  for (const Face& f : sd2.complex.faces()) {
    Face img;
    for (int v : f) img.push_back(orbit[v]);
    img = normalize(img);
    if (img.size() != f.size()) throw std::logic_error("orbit map is not injective on a face");
    images.insert(img);
  }
  return SimplicialComplex::from_faces(orbits, std::vector<Face>(images.begin(), images.end()));
}

struct FloydReport {
  long long chi = 0;
  long long chi_fixed = 0;
  long long chi_quotient = 0;
  long long p = 0;
  bool holds = false;
};

inline bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline FloydReport floyd_check(const SimplicialComplex& k, const GroupAction& g) {
  FloydReport r;
  r.p = static_cast<long long>(g.order());
  if (!is_prime(r.p)) throw std::invalid_argument("group order must be prime");
  r.chi = k.euler_characteristic();
  r.chi_fixed = fixed_subcomplex(k, g).complex.euler_characteristic();
  r.chi_quotient = quotient_complex(k, g).euler_characteristic();
  r.holds = r.chi + (r.p - 1) * r.chi_fixed == r.p * r.chi_quotient;
  return r;
}

struct TransitiveFixedPointReport {
  bool vertex_transitive = false;
  bool fixed_nonempty = false;
  bool is_simplex = false;
  bool holds = false;  // hypothesis false, or conclusion true
};

inline TransitiveFixedPointReport vertex_transitive_fixed_point_check(const SimplicialComplex& k,
                                                                      const GroupAction& g) {
  TransitiveFixedPointReport r;
  r.vertex_transitive = g.is_transitive_on(k.vertices());
  r.fixed_nonempty = fixed_subcomplex(k, g).complex.num_faces() > 1;
  r.is_simplex = k.is_simplex();
  r.holds = !(r.vertex_transitive && r.fixed_nonempty) || r.is_simplex;
  return r;
}

inline TransitiveFixedPointReport vertex_transitive_fixed_point_check(const SetFamily& f, const GroupAction& g) {
  return vertex_transitive_fixed_point_check(SimplicialComplex::from_family(f), g);
}

// ---------------------------------------------------------------------------
// named complexes

namespace complexes {

inline SimplicialComplex hollow_triangle() { return SimplicialComplex::boundary_of_simplex(3); }

/// Six-vertex triangulation of the real projective plane.
inline SimplicialComplex rp2_6() {
  return SimplicialComplex::from_facets(6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                                            {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}});
}

/// Eight-vertex triangulation of the dunce hat: contractible, every edge lies in two or more triangles.
inline SimplicialComplex dunce_hat() {
  return SimplicialComplex::from_facets(
      8, {{0, 1, 3}, {0, 1, 4}, {0, 1, 5}, {0, 2, 3}, {0, 2, 6}, {0, 2, 7}, {0, 4, 5}, {0, 6, 7}, {1, 2, 5},
          {1, 2, 6}, {1, 2, 7}, {1, 3, 7}, {1, 4, 6}, {2, 3, 5}, {3, 5, 7}, {4, 5, 7}, {4, 6, 7}});
}

inline SimplicialComplex cycle(int n) {
  std::vector<Face> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return SimplicialComplex::from_facets(n, edges);
}

}  // namespace complexes

}  // namespace hexatope
