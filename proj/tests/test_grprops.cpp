#include "hexatope/grprops.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hexatope;

namespace {

GraphShape graph(int n) { return {GraphKind::Graph, n}; }
GraphShape digraph(int n) { return {GraphKind::Digraph, n}; }

std::vector<std::vector<bool>> adjacency(int n, Mask a) {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  auto e = graph(n).edges();
  for (std::size_t k = 0; k < e.size(); ++k)
    if (a >> k & 1U) adj[e[k].first][e[k].second] = adj[e[k].second][e[k].first] = true;
  return adj;
}

bool connected_union_find(int n, Mask a) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto e = graph(n).edges();
  for (std::size_t k = 0; k < e.size(); ++k)
    if (a >> k & 1U) parent[find(e[k].first)] = find(e[k].second);
  for (int x = 0; x < n; ++x)
    if (find(x) != find(0)) return false;
  return true;
}

// Kuratowski on six vertices: a K3,3, a K5, or a K5 with one edge subdivided.
bool nonplanar6(Mask a) {
  auto adj = adjacency(6, a);
  for (int s = 0; s < 64; ++s) {
    if (std::popcount(static_cast<unsigned>(s)) != 3) continue;
    bool all = true;
    for (int x = 0; x < 6; ++x)
      for (int y = 0; y < 6; ++y)
        if ((s >> x & 1) && !(s >> y & 1) && !adj[x][y]) all = false;
    if (all) return true;
  }
  for (int out = 0; out < 6; ++out) {
    std::vector<std::pair<int, int>> missing;
    for (int x = 0; x < 6; ++x)
      for (int y = x + 1; y < 6; ++y)
        if (x != out && y != out && !adj[x][y]) missing.emplace_back(x, y);
    if (missing.empty()) return true;
    if (missing.size() == 1 && adj[out][missing[0].first] && adj[out][missing[0].second]) return true;
  }
  return false;
}

// Orbits of Z_m on subsets, as masks.
std::vector<std::vector<Mask>> cyclic_orbits(int m) {
  std::vector<std::vector<Mask>> out;
  for (auto& o : orbit_decomposition(SetFamily::power_set(m), GroupAction::cyclic_shift(m))) out.push_back(o.members);
  return out;
}

}  // namespace

TEST(Property, NoEdge) {
  auto p = builtin_property("no_edge", graph(4));
  EXPECT_EQ(p.family, SetFamily::only_empty(6));
  auto s = summarize(p.family);
  EXPECT_EQ(*s.complexity, 6);
  EXPECT_TRUE(*s.evasive);
}

TEST(Property, NonInvariantPredicateRejected) {
  try {
    build_property(graph(3), "vertex 1 not isolated", [](const GraphView& g) { return g.degree(0) > 0; });
    FAIL() << "accepted a predicate that depends on labels";
  } catch (const PropertyNotInvariant& e) {
    const auto edges = graph(3).edges();
    EXPECT_TRUE(GraphView(graph(3), edges, e.member).degree(0) > 0);
    EXPECT_FALSE(GraphView(graph(3), edges, e.image).degree(0) > 0);
  }
}

TEST(Property, AtMostKEdges) {
  for (int n = 3; n <= 4; ++n) {
    const int m = n * (n - 1) / 2;
    for (int k = 0; k <= m + 1; ++k) {
      auto s = summarize(builtin_property("at_most_k_edges", graph(n), k).family);
      if (k >= m) {
        EXPECT_TRUE(s.trivial);
        EXPECT_EQ(*s.complexity, 0);
      } else {
        EXPECT_TRUE(*s.evasive) << n << " " << k;
      }
    }
  }
}

TEST(Property, ConnectedAgainstUnionFind) {
  for (int n = 2; n <= 5; ++n) {
    auto p = builtin_property("connected", graph(n));
    for (Mask a = 0; a < p.family.universe(); ++a) ASSERT_EQ(p.family.contains(a), connected_union_find(n, a));
  }
  EXPECT_EQ(argument_complexity(builtin_property("connected", graph(3)).family), 3);
  EXPECT_TRUE(is_evasive(builtin_property("connected", graph(4)).family));
}

TEST(Property, Planarity) {
  EXPECT_TRUE(builtin_property("planar", graph(4)).family.is_trivial());
  auto five = builtin_property("planar", graph(5));
  EXPECT_EQ(five.family.size(), 1023u);  // everything but K5
  EXPECT_EQ(argument_complexity(five.family), 10);
  auto six = builtin_property("planar", graph(6));
  for (Mask a = 0; a < six.family.universe(); ++a) ASSERT_EQ(six.family.contains(a), !nonplanar6(a)) << a;
}

TEST(Property, Digraphs) {
  auto sink = builtin_property("has_sink", digraph(3));
  EXPECT_EQ(argument_complexity(sink.family), 5);
  auto sink4 = summarize(builtin_property("has_sink", digraph(4)).family);
  EXPECT_LE(*sink4.complexity, 3 * 4 - 4);
  auto cyc = builtin_property("has_directed_cycle", digraph(3));
  EXPECT_EQ(cyc.family.size() % 2, 1u);
  auto s = summarize(cyc.family);
  EXPECT_TRUE(*s.evasive);
  EXPECT_TRUE(s.odd_size_evasive_ok);
  // acyclic digraphs on 3 labelled vertices: 25
  EXPECT_EQ(cyc.family.universe() - cyc.family.size(), 25u);
  EXPECT_THROW(builtin_property("has_sink", graph(3)), std::invalid_argument);
  EXPECT_THROW(builtin_property("bogus", graph(3)), std::invalid_argument);
}

TEST(Property, OddSizeImpliesEvasive) {
  for (const std::string& name : {"no_edge", "connected", "scorpion", "star_union"})
    for (int n = 3; n <= 5; ++n) {
      auto s = summarize(builtin_property(name, graph(n)).family);
      EXPECT_TRUE(s.odd_size_evasive_ok) << name << " " << n;
    }
}

TEST(Congruence, RejectsCompositeGround) {
  auto p = builtin_property("connected", graph(4));
  EXPECT_THROW(orbit_congruence_check(p.family, p.group(), 2), std::invalid_argument);
  EXPECT_THROW(orbit_congruence_check(p.family, p.group(), 3), std::invalid_argument);
}

TEST(Congruence, AllCyclicFamiliesOnFourPoints) {
  auto orbits = cyclic_orbits(4);
  std::vector<std::vector<Mask>> middle;
  for (auto& o : orbits)
    if (o[0] != 0 && o[0] != 15) middle.push_back(o);
  ASSERT_EQ(middle.size(), 4u);
  auto g = GroupAction::cyclic_shift(4);
  for (int s = 0; s < 16; ++s) {
    SetFamily f = SetFamily::only_empty(4);
    for (int k = 0; k < 4; ++k)
      if (s >> k & 1)
        for (Mask a : middle[k]) f.insert(a);
    auto r = orbit_congruence_check(f, g, 2);
    EXPECT_TRUE(r.transitive);
    EXPECT_TRUE(r.hypothesis);
    EXPECT_TRUE(r.divisibility_ok);
    EXPECT_TRUE(r.alternating_ok);
    EXPECT_TRUE(*r.evasive);
  }
}

TEST(Congruence, RandomInvariantFamilies) {
  std::mt19937_64 rng(13);
  for (int m : {2, 3, 4, 5, 7, 8, 9}) {
    int p = 2;
    while (m % p) ++p;
    auto orbits = cyclic_orbits(m);
    auto g = GroupAction::cyclic_shift(m);
    for (int trial = 0; trial < 6; ++trial) {
      SetFamily f = SetFamily::only_empty(m);
      for (auto& o : orbits)
        if (o[0] != 0 && o[0] != f.full_mask() && rng() % 2)
          for (Mask a : o) f.insert(a);
      auto r = orbit_congruence_check(f, g, p);
      EXPECT_TRUE(r.consistent());
      EXPECT_EQ(*r.complexity, m);
    }
  }
}

TEST(Congruence, BipartiteTwoByTwoMonotone) {
  GraphShape shape{GraphKind::Bipartite, 2, 2};
  auto classes = isomorphism_classes(shape);
  int nontrivial = 0;
  for (std::uint32_t s = 0; s < (1U << classes.size()); ++s) {
    SetFamily f(4);
    for (std::size_t c = 0; c < classes.size(); ++c)
      if (s >> c & 1U)
        for (Mask a : classes[c]) f.insert(a);
    if (!f.is_downward_closed() || f.is_trivial()) continue;
    ++nontrivial;
    auto p = build_property(shape, "monotone", [&](const GraphView&) { return true; });
    auto r = orbit_congruence_check(f, p.group(), 2);
    EXPECT_TRUE(r.consistent());
    EXPECT_TRUE(*r.evasive);
  }
  EXPECT_GT(nontrivial, 0);
}

TEST(Illies, CountsAndComplexity) {
  auto il = illies_family();
  EXPECT_EQ(il.counts, (std::vector<std::size_t>{1, 12, 24, 16, 3}));
  EXPECT_EQ(euler_count(il.family), 0);
  const int c = argument_complexity(il.family);
  EXPECT_LE(c, 11);
  EXPECT_LT(c, 12);
  auto set = [](std::initializer_list<int> xs) {
    Mask a = 0;
    for (int x : xs) a |= Mask{1} << (x - 1);
    return a;
  };
  EXPECT_TRUE(il.family.contains(set({1, 4, 7})));
  EXPECT_FALSE(il.family.contains(set({1, 7})));
  auto orbits = orbit_decomposition(il.family, il.group);
  EXPECT_EQ(orbits.size(), 7u);
}

TEST(Sweep, SmallN) {
  auto three = monotone_sweep(3);
  EXPECT_EQ(three.classes, 4u);
  EXPECT_TRUE(three.violations.empty());
  EXPECT_EQ(three.nontrivial, three.evasive);
  auto four = monotone_sweep(4);
  EXPECT_EQ(four.classes, 11u);
  EXPECT_GT(four.nontrivial, 0u);
  EXPECT_TRUE(four.violations.empty());
  // trivial families: empty and the full power set
  EXPECT_EQ(four.families - four.nontrivial, 2u);
  EXPECT_EQ(four.complexity_histogram[0], 2u);
}

TEST(Yao, ClosedFormAllSmall) {
  for (int m = 2; m <= 6; ++m)
    for (int r = 1; r < m; ++r) {
      auto y = yao_fixed_complex(m, 3, r);
      EXPECT_EQ(y.reduced_euler, y.formula) << m << " " << r;
      // a count of skeleton faces gives the same number
      long long direct = -1;
      for (int k = 1; k <= r; ++k) direct += (k % 2 ? 1 : -1) * binomial_ll(m, k);
      EXPECT_EQ(direct, y.formula);
      if (y.reduced_betti) {
        // entry i is dimension i − 1, so the only nonzero entry sits in dimension r − 1
        for (std::size_t i = 0; i < y.reduced_betti->size(); ++i)
          EXPECT_EQ((*y.reduced_betti)[i], static_cast<int>(i) == r ? binomial_ll(m - 1, r) : 0);
      }
    }
  EXPECT_EQ(yao_fixed_complex(3, 2, 1).formula, 2);
  EXPECT_EQ(yao_fixed_complex(4, 2, 2).formula, -3);
  EXPECT_THROW(yao_fixed_complex(3, 2, 3), std::invalid_argument);
}

TEST(Yao, FixedSubcomplexOfThresholdProperty) {
  for (auto [m, n] : {std::pair{2, 2}, {3, 2}, {2, 3}})
    for (int r = 0; r < m; ++r) {
      auto y = yao_fixed_complex(m, n, r);
      ASSERT_TRUE(y.fixed_complex_euler);
      EXPECT_EQ(*y.fixed_complex_euler, y.formula) << m << "x" << n << " r=" << r;
      EXPECT_TRUE(y.matches());
    }
}

TEST(Kss, FieldAxioms) {
  for (int q : {2, 3, 4, 5, 7, 8, 9}) {
    auto f = galois_field(q);
    for (int a = 0; a < q; ++a) {
      EXPECT_EQ(f.add[a][0], a);
      EXPECT_EQ(f.mul[a][1], a);
      if (a) EXPECT_EQ(f.mul[a][f.inv(a)], 1);
      EXPECT_EQ(f.add[a][f.neg(a)], 0);
      for (int b = 0; b < q; ++b) {
        EXPECT_EQ(f.mul[a][b], f.mul[b][a]);
        for (int c = 0; c < q; ++c) ASSERT_EQ(f.mul[a][f.add[b][c]], f.add[f.mul[a][b]][f.mul[a][c]]);
      }
    }
  }
  auto gf4 = galois_field(4);
  // with 2 = x and 3 = x + 1: x·x = x + 1, x·(x+1) = 1
  EXPECT_EQ(gf4.mul[2][2], 3);
  EXPECT_EQ(gf4.mul[2][3], 1);
  EXPECT_THROW(galois_field(6), std::invalid_argument);
}

TEST(Kss, AffineGroups) {
  for (int q : {2, 3, 4, 5, 7, 8, 9}) {
    auto d = kss_group_data(q);
    EXPECT_EQ(d.elements.size(), static_cast<std::size_t>(q * (q - 1)));
    EXPECT_TRUE(d.all_hold()) << q;
  }
  auto three = kss_group_data(3);
  EXPECT_EQ(three.edge_action().order(), 6u);
  auto four = kss_group_data(4);
  EXPECT_EQ(four.edge_action().order(), 12u);
  std::vector<int> all(6);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_TRUE(four.edge_action().is_transitive_on(all));
  EXPECT_EQ(kss_group_data(2).shape.edges().size(), 1u);
}

TEST(Kss, AffineGroupHasNoFixedPointOnMonotoneComplex) {
  // a non-trivial monotone property on 4 vertices: if it were non-evasive the complex
  // would be mod-2 acyclic and the affine group would fix a point of it
  auto g = kss_group_data(4).edge_action();
  for (int k = 1; k <= 5; ++k) {
    auto p = builtin_property("at_most_k_edges", graph(4), k);
    auto complex = SimplicialComplex::from_family(p.family);
    EXPECT_TRUE(g.preserves(complex));
    EXPECT_TRUE(fixed_subcomplex(complex, g).complex.vertices().empty());
    EXPECT_FALSE(mod_p_acyclic(complex, 2));
    EXPECT_TRUE(is_evasive(p.family));
  }
}

TEST(Scorpion, Probe) {
  for (int n = 4; n <= 5; ++n) {
    auto r = scorpion_complexity_probe(n);
    ASSERT_TRUE(r.complexity);
    EXPECT_EQ(*r.complexity, argument_complexity(builtin_property("scorpion", graph(n)).family));
    EXPECT_LE(*r.complexity, r.m);
  }
  auto big = scorpion_complexity_probe(12, "star_union");
  EXPECT_FALSE(big.complexity);
  EXPECT_FALSE(big.note.empty());
}
