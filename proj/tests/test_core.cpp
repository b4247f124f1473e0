#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace joincover;
using namespace oracle;

namespace {

Row symbols_to_row(const QueryInstance& q, const std::vector<std::string>& syms) {
  Row r;
  for (int a = 0; a < q.n; ++a) {
    auto it = std::find(q.domains[a].begin(), q.domains[a].end(), syms[a]);
    r.push_back(static_cast<int>(it - q.domains[a].begin()));
  }
  return r;
}

}  // namespace

TEST(Hamming, ExampleRows) {
  QueryInstance q = example1();
  Row a = symbols_to_row(q, {"ICDT", "2017", "Europe", "Italy"});
  Row b = symbols_to_row(q, {"ICDT", "2018", "Europe", "Austria"});
  Row c = symbols_to_row(q, {"ICDT", "2017", "Europe", "Austria"});
  Row d = symbols_to_row(q, {"ICDT", "2017", "Europe", "Denmark"});
  EXPECT_EQ(hamming_dist(a, b), 2);
  EXPECT_EQ(hamming_dist(a, a), 0);
  EXPECT_EQ(hamming_dist(c, d), 1);
}

TEST(Hamming, SchemaMismatchThrows) {
  EXPECT_THROW(hamming_dist(Row{1, 2}, Row{1}), InputError);
  EXPECT_THROW(hamming_dist(Tuple{{0, 1}, {1, 1}}, Tuple{{0, 2}, {1, 1}}), InputError);
  EXPECT_EQ(hamming_dist(Tuple{{0, 1}, {1, 1}}, Tuple{{0, 1}, {1, 2}}), 1);
}

TEST(Hamming, MetricAxioms) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> sym(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    Row a(5), b(5), c(5);
    for (int i = 0; i < 5; ++i) {
      a[i] = sym(rng);
      b[i] = sym(rng);
      c[i] = sym(rng);
    }
    EXPECT_EQ(hamming_dist(a, b), hamming_dist(b, a));
    EXPECT_EQ(hamming_dist(a, b) == 0, a == b);
    EXPECT_LE(hamming_dist(a, c), hamming_dist(a, b) + hamming_dist(b, c));
  }
}

TEST(Project, ExampleRelations) {
  QueryInstance q = example1();
  const Relation& r34 = q.relations[2];
  ASSERT_EQ(r34.schema, (std::vector<int>{2, 3}));
  Relation p = project(r34, {2});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(q.domains[2][p.rows[0][0]], "Europe");
  EXPECT_EQ(project(r34, r34.schema), r34);
  Relation years = project(q.relations[0], {1});
  std::vector<std::string> got;
  for (const auto& r : years.rows) got.push_back(q.domains[1][r[0]]);
  EXPECT_EQ(got, (std::vector<std::string>{"2017", "2018", "2019", "2020"}));
  EXPECT_THROW(project(r34, {0}), InputError);
}

TEST(Join, ExampleHasSixteenTuples) {
  QueryInstance q = example1();
  EXPECT_EQ(naive_join(q).size(), 16u);
  EXPECT_EQ(as_set(naive_join(q)), brute_join(q));
  EXPECT_EQ(generic_join(q, {0, 1, 2, 3}), naive_join(q));
}

TEST(Join, EmptyRelationAnnihilates) {
  QueryInstance q = example1();
  q.relations[1].rows.clear();
  EXPECT_TRUE(naive_join(q).empty());
  EXPECT_TRUE(generic_join(q).empty());
  int visits = 0;
  generic_join_visit(q, {3, 2, 1, 0}, [&](const Row&) {
    ++visits;
    return true;
  });
  EXPECT_EQ(visits, 0);
}

TEST(Join, CartesianProductOfUnaries) {
  QueryInstance q = make_query_from_symbols(2, {{"a", "b"}, {"x", "y", "z"}}, {{0}, {1}},
                                            {{{"a"}, {"b"}}, {{"x"}, {"y"}, {"z"}}});
  EXPECT_EQ(naive_join(q).size(), 6u);
  EXPECT_EQ(generic_join(q).size(), 6u);
}

TEST(Join, GenericMatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 6)(rng);
    QueryInstance q = random_query(rng, n, 4, std::uniform_int_distribution<int>(1, 4)(rng), 3, 0.6);
    std::set<Row> want = brute_join(q);
    EXPECT_EQ(as_set(naive_join(q)), want);
    std::vector<int> order = all_vertices(n);
    for (int rep = 0; rep < 2; ++rep) {
      std::shuffle(order.begin(), order.end(), rng);
      EXPECT_EQ(as_set(generic_join(q, order)), want);
    }
  }
}

TEST(Join, InvalidOrderThrows) {
  QueryInstance q = example1();
  EXPECT_THROW(generic_join(q, {0, 1, 2}), InputError);
  EXPECT_THROW(generic_join(q, {0, 1, 1, 2}), InputError);
}

TEST(Join, DuplicateEdgesCollapseByIntersection) {
  QueryInstance q = make_query_from_symbols(2, {{"a", "b"}, {"x", "y"}}, {{0, 1}, {1, 0}},
                                            {{{"a", "x"}, {"b", "y"}}, {{"x", "a"}, {"y", "a"}}});
  ASSERT_EQ(q.relations.size(), 1u);
  EXPECT_EQ(q.relations[0].size(), 1u);
  EXPECT_EQ(naive_join(q).size(), 1u);
  QueryInstance twice = make_query_from_symbols(2, {{"a", "b"}, {"x", "y"}}, {{0, 1}, {0, 1}},
                                                {{{"a", "x"}, {"b", "y"}}, {{"a", "x"}, {"b", "y"}}});
  EXPECT_EQ(naive_join(twice).size(), 2u);
}

TEST(QueryInstance, ValidationErrors) {
  EXPECT_THROW(make_query_from_symbols(1, {{"a"}}, {{0}}, {{{"b"}}}), InputError);
  EXPECT_THROW(make_query_from_symbols(1, {{"a", "a"}}, {{0}}, {{{"a"}}}), InputError);
  EXPECT_THROW(make_query_from_symbols(1, {{"a"}}, {{1}}, {{{"a"}}}), InputError);
  EXPECT_THROW(make_query_from_symbols(2, {{"a", "b"}, {"x"}}, {{0}}, {{{"a"}, {"b"}}}, 1), InputError);
}

TEST(ProjectedQuery, ExampleStar) {
  QueryInstance q = example1();
  QueryInstance qs = projected_query(q, {0, 1, 2});
  EXPECT_EQ(qs.n, 3);
  ASSERT_EQ(qs.relations.size(), 4u);
  std::set<std::vector<int>> schemas;
  for (const auto& r : qs.relations) schemas.insert(r.schema);
  EXPECT_EQ(schemas, (std::set<std::vector<int>>{{0, 1}, {1, 2}, {2}, {0}}));
  std::set<Row> projected = brute_project(brute_join(q), {0, 1, 2});
  EXPECT_EQ(projected.size(), 4u);
  EXPECT_EQ(naive_join(qs).size(), 4u);
  EXPECT_THROW(projected_query(q, {}), InputError);
  EXPECT_EQ(projected_query(q, {0, 1, 2, 3}), q);
}

TEST(ProjectedQuery, ContainsProjectionOfJoin) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 5)(rng);
    QueryInstance q = random_query(rng, n, 3, 3, 3, 0.5);
    std::vector<int> S;
    for (int v = 0; v < n; ++v) {
      if (rng() & 1U) S.push_back(v);
    }
    if (S.empty()) S.push_back(0);
    std::set<Row> lhs = brute_project(brute_join(q), S);
    std::set<Row> rhs = as_set(naive_join(projected_query(q, S)));
    EXPECT_TRUE(std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end()));
  }
}
