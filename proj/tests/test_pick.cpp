#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace joincover;
using namespace oracle;

namespace {

Rational r(long p, long q = 1) { return make_rational(p, q); }

/// Row predicted from the table with |M| and n_I taken from an exhaustive search.
int table_row(const Graph& g, int delta, int matched_vertices, int n_I) {
  const int s = g.n - delta + 1;
  if (s == 1) return 1;
  if (s % 2 == 0 && s <= matched_vertices) return 2;
  if (s % 2 == 1 && s <= matched_vertices - 1) return is_disedge(g) ? 4 : 3;
  if (s <= matched_vertices + n_I) return 5;
  return 6;
}

}  // namespace

TEST(Case, AppendixGraphRows) {
  Graph g = appendix_graph();
  const std::vector<int> rows{6, 5, 2, 3, 2, 1};
  for (int delta = 1; delta <= 6; ++delta) {
    CaseRow c = classify_case(g, delta);
    EXPECT_EQ(c.row, rows[delta - 1]) << "delta " << delta;
    EXPECT_EQ(c.matched, 4);
    EXPECT_EQ(c.n_I, 1);
    EXPECT_FALSE(c.disedge);
  }
  EXPECT_EQ(classify_case(g, 1).predicted_exponent, r(7, 2));
  EXPECT_EQ(classify_case(g, 2).predicted_exponent, r(5, 2));
  EXPECT_EQ(classify_case(g, 4).predicted_exponent, r(3, 2));
}

TEST(Case, AllRowsReachable) {
  EXPECT_EQ(classify_case(cycle(4), 4).row, 1);
  EXPECT_EQ(classify_case(make_graph(4, {{0, 1}, {2, 3}}), 3).row, 2);
  EXPECT_EQ(classify_case(cycle(4), 2).row, 3);
  EXPECT_EQ(classify_case(make_graph(4, {{0, 1}, {2, 3}}), 2).row, 4);
  EXPECT_EQ(classify_case(cycle(3), 1).row, 5);
  EXPECT_EQ(classify_case(path(3), 1).row, 6);
}

TEST(Case, ExponentsAreAgmOfPickedSet) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 9)(rng);
    Graph g = cover_isolated(random_graph(rng, n, std::uniform_real_distribution<double>(0.15, 0.6)(rng), 0.1));
    Decomposition d = decompose(g);
    for (int delta = 1; delta <= n; ++delta) {
      PickResult p = pick_S(g, delta);
      ASSERT_EQ(static_cast<int>(p.S.size()), n - delta + 1);
      EXPECT_EQ(p.row.row, table_row(g, delta, 2 * brute_matching(g), d.n_I));
      BoundReport agm = agm_bound(g, p.S);
      ASSERT_TRUE(certifies_agm(to_hypergraph(g), p.S, agm, fec_dual(g, p.S)));
      if (p.row.row == 3) {
        // light instances: the degree-constrained bound reaches s/2
        Hypergraph h = to_hypergraph(g);
        EXPECT_EQ(pmb_bound(h, p.S, light_degree_constraints(g, h, p.S)).objective, p.row.predicted_exponent);
      } else {
        EXPECT_EQ(agm.objective, p.row.predicted_exponent) << "row " << p.row.row << " trial " << trial;
      }
    }
  }
}

TEST(Pick, FourCycleRowThree) {
  PickResult p = pick_S(cycle(4), 2);
  EXPECT_EQ(p.row.row, 3);
  EXPECT_EQ(p.S, (std::vector<int>{0, 1, 2}));
}

TEST(LightPicking, EveryPickedVertexHasAPickedNeighbour) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 9)(rng);
    Graph g = cover_isolated(random_graph(rng, n, 0.4));
    if (is_disedge(g)) continue;
    Decomposition d = decompose(g);
    int mv = d.matched_vertex_count();
    for (int s = 3; s < mv; s += 2) {
      std::vector<int> S = light_picking_1(g, s);
      ASSERT_EQ(static_cast<int>(S.size()), s);
      EXPECT_TRUE(std::is_sorted(S.begin(), S.end()));
      EXPECT_EQ(std::set<int>(S.begin(), S.end()).size(), S.size());
      for (int u : S) {
        bool has = false;
        for (int v : S) has = has || (u != v && g.has_edge(u, v));
        EXPECT_TRUE(has) << "vertex " << u;
      }
    }
  }
}

TEST(LightDegree, ConstraintGraphIsAForest) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 80; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 8)(rng);
    Graph g = cover_isolated(random_graph(rng, n, 0.5));
    Hypergraph h = to_hypergraph(g);
    std::vector<int> S = all_vertices(n);
    EXPECT_NO_THROW(pmb_bound(h, S, light_degree_constraints(g, h, S)));
  }
}

TEST(HeavyLight, ExampleSplit) {
  QueryInstance q = example1();
  HeavyLightSplit split = heavy_light_split(q, default_threshold(q));
  EXPECT_EQ(split.threshold, 2);
  EXPECT_TRUE(heavy_light_containment(q, split));
  for (int v = 0; v < q.n; ++v) {
    for (int a : split.heavy_values[v]) {
      std::size_t deg = 0;
      for (const auto& rel : q.relations) {
        auto it = std::find(rel.schema.begin(), rel.schema.end(), v);
        if (it == rel.schema.end() || rel.schema.size() != 2) continue;
        std::size_t col = static_cast<std::size_t>(it - rel.schema.begin());
        std::size_t d = 0;
        for (const auto& row : rel.rows) d += row[col] == a;
        deg = std::max(deg, d);
      }
      EXPECT_GE(deg, 2u);
    }
  }
}

TEST(HeavyLight, JoinIsContainedInTheParts) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 100; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 5)(rng);
    QueryInstance q = random_query(rng, n, 4, 4, 2, 0.5);
    std::int64_t N = 1;
    for (const auto& rel : q.relations) N = std::max<std::int64_t>(N, static_cast<std::int64_t>(rel.size()));
    q.N = N;
    HeavyLightSplit split = heavy_light_split(q, default_threshold(q));
    std::set<Row> want = brute_join(q);
    std::set<Row> got = as_set(naive_join(split.light));
    for (const auto& [v, hq] : split.heavy) {
      auto part = as_set(naive_join(hq));
      got.insert(part.begin(), part.end());
    }
    EXPECT_TRUE(std::includes(got.begin(), got.end(), want.begin(), want.end())) << "trial " << trial;
    EXPECT_TRUE(heavy_light_containment(q, split));
  }
}

TEST(Pick, JsonShape) {
  Json j = to_json(pick_S(appendix_graph(), 2));
  EXPECT_EQ(j["row"], 5);
  EXPECT_EQ(j["s"], 5);
  EXPECT_EQ(j["S"], Json::parse("[0,1,2,3,4]"));
  EXPECT_EQ(j["exponent"], "5/2");
}
