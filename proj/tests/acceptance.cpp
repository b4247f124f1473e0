#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "test_support.hpp"

using namespace joincover;
using namespace oracle;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) note << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

Rational r(long p, long q = 1) { return make_rational(p, q); }

std::set<Row> code_set(const Codebook& c) {
  auto w = c.codewords();
  return {w.begin(), w.end()};
}

/// Minimum distance of a CRT code from the difference structure: two messages agree at
/// modulus p exactly when p divides their difference.
int crt_distance_by_differences(const std::vector<std::int64_t>& moduli, std::int64_t M) {
  int best = static_cast<int>(moduli.size());
  for (std::int64_t D = 1; D < M; ++D) {
    int agree = 0;
    for (auto p : moduli) agree += D % p == 0;
    best = std::min(best, static_cast<int>(moduli.size()) - agree);
  }
  return best;
}

bool pow_le(std::int64_t base, long num, long den, std::int64_t N) {
  // base^den <= N^num, in 128-bit arithmetic
  __int128 lhs = 1, rhs = 1;
  for (long i = 0; i < den; ++i) lhs *= base;
  for (long i = 0; i < num; ++i) rhs *= N;
  return lhs <= rhs;
}

std::vector<QueryInstance> sandwich_instances(std::mt19937_64& rng, int want) {
  std::vector<QueryInstance> out;
  while (static_cast<int>(out.size()) < want) {
    int n = std::uniform_int_distribution<int>(1, 5)(rng);
    int edges = std::uniform_int_distribution<int>(1, 4)(rng);
    double density = std::uniform_real_distribution<double>(0.2, 0.7)(rng);
    QueryInstance q = random_query(rng, n, 4, edges, 3, density);
    std::size_t J = brute_join(q).size();
    if (J == 0 || J > 24) continue;
    out.push_back(std::move(q));
  }
  return out;
}

// 1
Outcome golden_example() {
  Outcome o;
  QueryInstance q = example1();
  Relation J = generic_join(q);
  o.require(J.size() == 16 && brute_join(q).size() == 16, "join has 16 tuples");
  o.require(exact_min_cover(J, 2).size() == 4, "exact_min_cover(2) = 4");
  CoverResult given = cover_from_json(read_json_file(fixture("example1_given_cover.json")), q);
  o.require(given.size() == 4 && verify_cover(J, given.tuples, 2), "4-row cover verifies");
  CoverResult g = greedy_packing(J, 2);
  o.require(g.size() == 4 && verify_packing(g.tuples, 2), "greedy packing has size 4");
  CoverResult one = exact_min_cover(J, 1);
  o.require(std::set<Row>(one.tuples.begin(), one.tuples.end()) == brute_join(q), "delta=1 cover is the join");
  o.note << "|J|=" << J.size() << " cover=" << exact_min_cover(J, 2).size() << " greedy=" << g.size();
  return o;
}

// 2
Outcome sandwich() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int checks = 0;
  for (const auto& q : sandwich_instances(rng, 200)) {
    Relation J = generic_join(q);
    for (int delta = 1; delta <= q.n; ++delta) {
      std::size_t cv = exact_min_cover(J, delta).size();
      std::size_t pk = exact_max_packing(J, delta).size();
      std::size_t prj = brute_project(as_set(J), all_vertices(q.n)).size();
      const int s = q.n - delta + 1;
      for (std::uint32_t mask = 0; mask < (1U << q.n); ++mask) {
        if (std::popcount(mask) == s) prj = std::min(prj, brute_project(as_set(J), mask_to_set(mask, q.n)).size());
      }
      o.require(cv <= pk && pk <= prj, "CvNum <= PkNum <= PrjBnd");
      ++checks;
    }
  }
  o.note << "200 instances, " << checks << " (instance, delta) pairs";
  return o;
}

// 3
Outcome codes() {
  Outcome o;
  int rs = 0, crt = 0;
  for (std::int64_t q : {2, 3, 5, 7, 11}) {
    for (int n = 1; n <= q; ++n) {
      for (int delta = 1; delta <= n; ++delta) {
        const int k = n - delta + 1;
        const double count = std::pow(static_cast<double>(q), k);
        auto G = rs_generator(q, k, default_eval_points(n));
        if (count <= 20000) {
          Codebook c = rs_codebook(q, n, delta);
          o.require(static_cast<double>(code_set(c).size()) == count, "RS size q^k");
          if (c.size >= 2) {
            int d = count <= 3000 ? brute_min_distance(c.codewords()) : min_nonzero_weight(c);
            o.require(d == delta, "RS distance");
          }
        } else {
          // too many codewords to list: distinct iff the generator has full rank, and the
          // distance comes from column-subset ranks
          o.require(rank_mod_p(G, q) == k, "RS generator rank");
          o.require(linear_code_distance(G, q) == delta, "RS distance by ranks");
        }
        ++rs;
      }
    }
  }
  const std::vector<std::int64_t> primes{2, 3, 5, 7, 11, 13, 17, 19, 23};
  for (std::uint32_t mask = 1; mask < (1U << primes.size()); ++mask) {
    const int n = std::popcount(mask);
    if (n > 5) continue;
    std::vector<std::int64_t> mod;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (mask >> i & 1U) mod.push_back(primes[i]);
    }
    for (int k = 1; k <= n; ++k) {
      std::int64_t M = 1;
      for (int i = 0; i < k; ++i) M *= mod[i];
      if (M > 10000 || M < 2) continue;
      Codebook c = crt_codebook(mod, k);
      o.require(c.size == M && static_cast<std::int64_t>(code_set(c).size()) == M, "CRT size");
      int d = M <= 600 ? brute_min_distance(c.codewords()) : crt_distance_by_differences(mod, M);
      o.require(d >= n - k + 1, "CRT distance >= n-k+1");
      ++crt;
    }
  }
  for (std::int64_t q : {5, 7}) {
    for (int n = 2; n <= 4; ++n) {
      for (int delta = 1; delta <= n; ++delta) {
        for (int t = 0; n + t <= q && t <= 2; ++t) {
          Codebook c = rs_extend(q, n, delta, t);
          if (c.size < 2 || c.size > 3000) continue;
          o.require(brute_min_distance(c.codewords()) == delta + t, "rs_extend distance delta+t");
        }
      }
    }
  }
  for (auto p : std::vector<DisedgeConstructionParams>{{2, 0, 2}, {4, 0, 2}, {4, 1, 2}, {4, 2, 4}, {6, 0, 2}, {6, 1, 4}}) {
    Codebook c = duplicated_rs_code(7, p);
    if (c.size < 2) continue;
    o.require(brute_min_distance(c.codewords()) == p.delta_s + p.n_t, "duplicated code distance delta_s + n_t");
  }
  o.note << rs << " RS parameter sets, " << crt << " CRT codes";
  return o;
}

// 4
Outcome lower_bounds() {
  Outcome o;
  struct Case {
    std::string name;
    Graph g;
    int delta;
    int row;
  };
  const std::int64_t N = 25;
  std::vector<Case> cases{{"4-cycle", cycle(4), 4, 1},
                          {"two edges", make_graph(4, {{0, 1}, {2, 3}}), 1, 2},
                          {"4-cycle", cycle(4), 2, 3},
                          {"two edges", make_graph(4, {{0, 1}, {2, 3}}), 2, 4},
                          {"triangle", cycle(3), 1, 5},
                          {"path", path(3), 1, 6}};
  for (const auto& c : cases) {
    LowerBoundInstance lb = lower_bound_instance(c.g, N, c.delta);
    bool ok = lb.row.row == c.row;
    for (const auto& rel : lb.query.relations) ok = ok && static_cast<std::int64_t>(rel.size()) <= N;
    std::set<Row> J = brute_join(lb.query);
    const bool join_is_code = J == code_set(lb.code);
    ok = ok && join_is_code;
    std::size_t cover = 0;
    if (join_is_code) {
      cover = exact_min_cover(generic_join(lb.query), c.delta).size();
      ok = ok && cover == static_cast<std::size_t>(lb.code.size);
    }
    std::int64_t prod = 1;
    Rational exponent = 0;
    for (std::size_t i = 0; i < lb.message_bases.size(); ++i) {
      prod *= lb.message_bases[i];
      const Rational& e = lb.message_exponents[i];
      exponent += e;
      if (sgn(e) > 0) ok = ok && pow_le(lb.message_bases[i], e.get_num().get_si(), e.get_den().get_si(), N);
    }
    ok = ok && prod == lb.code.size && exponent == lb.row.predicted_exponent;
    o.require(ok, "row " + std::to_string(c.row));
    o.note << "row " << c.row << " (" << c.name << ", " << lb.construction << "): |code|=" << lb.code.size
           << " |J|=" << J.size() << " " << (ok ? "ok" : "FAIL") << "; ";
  }
  return o;
}

// 5
Outcome upper_bounds() {
  Outcome o;
  std::mt19937_64 rng(55);
  std::vector<Graph> graphs{appendix_graph(), cycle(4), cycle(3), path(3), make_graph(4, {{0, 1}, {2, 3}})};
  for (int i = 0; i < 150; ++i) {
    int n = std::uniform_int_distribution<int>(1, 9)(rng);
    graphs.push_back(cover_isolated(random_graph(rng, n, std::uniform_real_distribution<double>(0.15, 0.6)(rng), 0.1)));
  }
  std::array<int, 7> seen{};
  for (const auto& g : graphs) {
    Hypergraph h = to_hypergraph(g);
    for (int delta = 1; delta <= g.n; ++delta) {
      PickResult p = pick_S(g, delta);
      ++seen[p.row.row];
      if (p.row.row == 3) {
        o.require(pmb_bound(h, p.S, light_degree_constraints(g, h, p.S)).objective == make_rational(p.row.s, 2),
                  "row 3 PMB = s/2");
      } else {
        BoundReport agm = agm_bound(h, p.S);
        o.require(certifies_agm(h, p.S, agm, fec_dual(h, p.S)), "AGM certificate");
        o.require(agm.objective == p.row.predicted_exponent, "row " + std::to_string(p.row.row) + " AGM");
      }
    }
  }
  int contained = 0;
  for (int i = 0; i < 100; ++i) {
    int n = std::uniform_int_distribution<int>(2, 5)(rng);
    QueryInstance q = random_query(rng, n, 4, 4, 2, 0.5);
    std::int64_t N = 1;
    for (const auto& rel : q.relations) N = std::max<std::int64_t>(N, static_cast<std::int64_t>(rel.size()));
    q.N = N;
    HeavyLightSplit split = heavy_light_split(q, default_threshold(q));
    std::set<Row> got = as_set(naive_join(split.light));
    for (const auto& [v, hq] : split.heavy) {
      auto part = as_set(naive_join(hq));
      got.insert(part.begin(), part.end());
    }
    std::set<Row> J = brute_join(q);
    bool ok = heavy_light_containment(q, split) && std::includes(got.begin(), got.end(), J.begin(), J.end());
    o.require(ok, "heavy-light containment");
    contained += ok;
  }
  o.note << "rows hit";
  for (int row = 1; row <= 6; ++row) o.note << " " << row << ":" << seen[row];
  o.note << "; containment " << contained << "/100";
  return o;
}

// 6
Outcome half_integrality() {
  Outcome o;
  int graphs = 0;
  auto check = [&](const Graph& g) {
    HalfIntegralDual d = half_integral_dual(g);
    o.require(d.objective == agm_bound(g, all_vertices(g.n)).objective, "objective = LP optimum");
    for (const auto& y : d.y) o.require(y == 0 || y == r(1, 2) || y == 1, "values in {0, 1/2, 1}");
    Decomposition dec = decompose(g);
    std::vector<int> all = dec.core;
    auto sv = dec.star_vertices();
    all.insert(all.end(), sv.begin(), sv.end());
    all.insert(all.end(), dec.singletons.begin(), dec.singletons.end());
    std::sort(all.begin(), all.end());
    o.require(all == all_vertices(g.n), "partition");
    auto [mc, ms] = matching_split(dec);
    o.require(mc.size() + ms.size() == dec.matching.size(), "M = M_c u M_s");
    o.require(static_cast<int>(dec.matching.size()) == brute_matching(g), "M maximum");
    o.require(static_cast<int>(mc.size()) == brute_matching(induced_subgraph(g, dec.core)), "M_c maximum in core");
    for (auto [u, v] : ms) {
      o.require((dec.y[u] == 0 && dec.y[v] == 1) || (dec.y[u] == 1 && dec.y[v] == 0), "{0,1} on M \\ G_c");
    }
    ++graphs;
  };
  for (int n = 1; n <= 5; ++n) {
    std::vector<Edge> slots;
    for (int u = 0; u < n; ++u) {
      for (int v = u; v < n; ++v) slots.emplace_back(u, v);
    }
    for (std::uint32_t mask = 0; mask < (1U << slots.size()); ++mask) {
      std::vector<Edge> e;
      std::vector<char> cov(n, 0);
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (mask >> i & 1U) {
          e.push_back(slots[i]);
          cov[slots[i].first] = cov[slots[i].second] = 1;
        }
      }
      if (std::count(cov.begin(), cov.end(), 0) > 0) continue;
      check(make_graph(n, e));
    }
  }
  const int exhaustive = graphs;
  std::mt19937_64 rng(66);
  for (int i = 0; i < 600; ++i) {
    int n = std::uniform_int_distribution<int>(6, 8)(rng);
    check(cover_isolated(random_graph(rng, n, std::uniform_real_distribution<double>(0.1, 0.7)(rng), 0.15)));
  }
  o.note << exhaustive << " graphs exhaustive (n<=5), " << graphs - exhaustive << " sampled (n=6..8)";
  return o;
}

// 7
Outcome algorithm_b() {
  Outcome o;
  QueryInstance ex = example1();
  CoverResult u = algorithm_B(ex, 2, {0, 1, 2});
  o.require(u.size() == 4 && verify_cover(generic_join(ex), u.tuples, 2), "example S={1,2,3} gives 4");
  std::mt19937_64 rng(77);
  int runs = 0;
  for (const auto& q : sandwich_instances(rng, 120)) {
    Relation J = generic_join(q);
    for (int delta = 1; delta <= q.n; ++delta) {
      const int s = q.n - delta + 1;
      std::vector<std::vector<int>> sets{min_projection(J, s).second};
      std::vector<int> S = all_vertices(q.n);
      std::shuffle(S.begin(), S.end(), rng);
      S.resize(s);
      sets.push_back(S);
      for (const auto& T : sets) {
        CoverResult b = algorithm_B(q, delta, T);
        o.require(verify_cover(J, b.tuples, delta), "output is a cover");
        std::vector<int> sorted = T;
        std::sort(sorted.begin(), sorted.end());
        o.require(b.size() <= brute_project(as_set(J), sorted).size(), "|U| <= |pi_S(J)|");
        o.require(b.size() >= exact_min_cover(J, delta).size(), "|U| >= min cover");
        ++runs;
      }
    }
  }
  o.note << "example |U|=" << u.size() << ", " << runs << " runs";
  return o;
}

// 8
Outcome rounding() {
  Outcome o;
  const std::vector<Rational> x{r(3, 10), r(7, 10), r(1, 2), r(1, 4), r(1, 4), r(2, 3), r(1, 7), r(9, 10), 1, 0};
  Rational total = 0;
  for (const auto& v : x) total += v;
  const long lo = mpz_class(total.get_num() / total.get_den()).get_si();
  const long hi = lo + (total.get_den() == 1 ? 0 : 1);
  const int trials = 100000;
  std::vector<long> hits(x.size(), 0);
  int sum_ok = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = trial_rng(8, static_cast<std::uint64_t>(t));
    std::vector<int> X = dependent_round(x, rng);
    long s = std::accumulate(X.begin(), X.end(), 0L);
    sum_ok += s == lo || s == hi;
    for (std::size_t i = 0; i < x.size(); ++i) hits[i] += X[i];
  }
  o.require(sum_ok == trials, "sum within floor/ceil");
  double worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double p = to_double(x[i]);
    const double sd = std::sqrt(p * (1 - p) / trials);
    const double dev = std::abs(static_cast<double>(hits[i]) / trials - p);
    if (sd > 0) worst = std::max(worst, dev / sd);
    o.require(sd > 0 ? dev <= 3 * sd : dev == 0, "marginal within 3 sigma");
  }
  std::mt19937_64 gen(88);
  const Rational c = RoundingConfig{}.c;
  int cost_ok = 0, cost_trials = 0;
  for (int inst = 0; inst < 20; ++inst) {
    int n = std::uniform_int_distribution<int>(3, 10)(gen);
    Hypergraph h = random_hypergraph(gen, n, 10, 4);
    int s = std::uniform_int_distribution<int>(1, n)(gen);
    BoundReport lp = lp_ub(h, s);
    std::vector<Rational> xe;
    Rational sx = 0;
    for (std::size_t e = 0; e < h.edges.size(); ++e) {
      xe.push_back(lp.value("x" + std::to_string(e)));
      sx += xe.back();
    }
    const Rational cap = 2 * c * sx + 1;
    for (int t = 0; t < 5000; ++t) {
      Rng rng = trial_rng(1000 + inst, static_cast<std::uint64_t>(t));
      cost_ok += algorithm_A(h, xe, c, rng).cost <= cap;
      ++cost_trials;
    }
  }
  o.require(cost_ok == cost_trials, "cost <= 2c sum x + 1");
  o.note << trials << " rounding trials, sum ok " << sum_ok << ", worst marginal " << worst << " sigma; cost bound "
         << cost_ok << "/" << cost_trials;
  return o;
}

// 9
Outcome lp_gap() {
  Outcome o;
  std::mt19937_64 rng(99);
  const Rational factor = r(1037, 100);
  Rational worst = 0;
  int pairs = 0, rounded = 0;
  for (int inst = 0; inst < 100; ++inst) {
    int n = std::uniform_int_distribution<int>(2, 10)(rng);
    int m = std::uniform_int_distribution<int>(1, 10)(rng);
    Hypergraph h = random_hypergraph(rng, n, m, 4);
    if (h.edges.size() > 12) h.edges.resize(12);
    bool covered = true;
    for (int v = 0; v < n; ++v) {
      bool hit = false;
      for (const auto& e : h.edges) hit = hit || std::find(e.begin(), e.end(), v) != e.end();
      covered = covered && hit;
    }
    if (!covered) {
      --inst;
      continue;
    }
    AgmTable table(h);
    for (int s = 1; s <= n; ++s) {
      Rational lb = lp_lb(h, s).objective;
      Rational ub = table.best_of_size(s).second;
      o.require(ub <= factor * lb + 1, "LP*_ub <= 10.37 LP_lb + 1");
      if (sgn(lb) > 0) worst = std::max(worst, Rational(ub / lb));
      RoundingConfig cfg;
      cfg.seed = static_cast<std::uint64_t>(inst * 16 + s);
      try {
        RoundedCover rc = rounded_cover(h, s, cfg);
        rounded += rc.outcome.covered >= s;
      } catch (const RoundingFailed&) {
        o.require(false, "rounded cover within retry budget");
      }
      ++pairs;
    }
  }
  o.require(rounded == pairs, "rounding coverage");
  o.note << "100 hypergraphs, " << pairs << " (G, s) pairs, max LP*_ub/LP_lb = " << to_double(worst)
         << ", rounding ok " << rounded << "/" << pairs;
  return o;
}

// 10
Outcome gap_instance_check() {
  Outcome o;
  GapInstanceParams p{2000, 0.3, 13};
  Rng rng(10);
  GapInstance gi = gap_instance(p, rng);
  o.require(gap_property_a(gi.base_edges, p), "property (a)");
  o.require(gap_property_b(gi.base_edges, p), "property (b)");
  GapCertificate cert = certify_gap(gi);
  o.require(cert.ratio_lower > r(115, 100), "ratio > 1.15");
  o.note << "d=" << p.d() << " d'=" << p.d_private() << " s=" << cert.k << " LP_lb <= " << to_double(cert.lp_lb_upper)
         << " LP*_ub >= " << to_double(cert.lp_ub_star_lower) << " ratio >= " << to_double(cert.ratio_lower)
         << " resamples=" << gi.resamples;
  return o;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion all[] = {{"golden example", golden_example},
                           {"sandwich CvNum <= PkNum <= PrjBnd", sandwich},
                           {"code sizes and distances", codes},
                           {"lower-bound instances rows 1-6", lower_bounds},
                           {"arity-2 upper bounds and heavy-light split", upper_bounds},
                           {"half-integral dual and decomposition", half_integrality},
                           {"algorithm B", algorithm_b},
                           {"dependent rounding", rounding},
                           {"LP gap bound and rounded cover", lp_gap},
                           {"gap instance", gap_instance_check}};
  int failed = 0, idx = 0;
  for (const auto& c : all) {
    ++idx;
    auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s %d %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", idx, c.name, secs, o.note.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
