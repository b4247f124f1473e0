#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "joincover/joincover.hpp"

using namespace joincover;

namespace {

std::vector<int> default_algb_set(const QueryInstance& q, const Relation& J, int delta) {
  const int s = q.n - delta + 1;
  bool binary = true;
  for (const auto& r : q.relations) binary = binary && r.schema.size() <= 2;
  if (binary) {
    try {
      return pick_S(graph_of(q), delta).S;
    } catch (const InputError&) {
    }
  }
  Hypergraph h{q.n, q.edges()};
  if (q.n <= kLpUbStarLimit) {
    try {
      BoundReport b = lp_ub_star(h, s);
      std::vector<int> S;
      for (int v = 0; v < q.n; ++v) {
        if (b.value("z" + std::to_string(v)) == 1) S.push_back(v);
      }
      return S;
    } catch (const LpInfeasible&) {
    } catch (const InputError&) {
    }
  }
  if (J.rows.empty()) {
    std::vector<int> S(s);
    for (int i = 0; i < s; ++i) S[i] = i;
    return S;
  }
  return min_projection(J, s).second;
}

int run(int argc, char** argv) {
  CLI::App app{"Join covers, packings and their bounds under Hamming distance"};
  app.require_subcommand(1);

  std::string query_path, graph_path, cover_path, pmb_path, method = "greedy", code = "auto", out_query, out_code;
  int delta = 1;
  std::int64_t N = 0;
  std::vector<int> S;
  int gap_n = 2000;
  double eps = 0.3, C = 13.0;
  std::optional<std::uint64_t> seed;

  auto* bounds = app.add_subcommand("bounds", "AGM, PMB, LP_lb, LP_ub and LP*_ub for a query");
  bounds->add_option("--query", query_path)->required();
  bounds->add_option("--delta", delta)->required();
  bounds->add_option("--pmb", pmb_path, "degree constraints JSON");
  bounds->add_option("--S", S, "target set for AGM/PMB (default: all attributes)");

  auto* cover = app.add_subcommand("cover", "compute a join cover");
  cover->add_option("--query", query_path)->required();
  cover->add_option("--delta", delta)->required();
  cover->add_option("--method", method)->check(CLI::IsMember({"greedy", "exact", "algB"}));
  cover->add_option("--S", S, "attribute set for algB");

  auto* pack = app.add_subcommand("pack", "compute a join packing");
  pack->add_option("--query", query_path)->required();
  pack->add_option("--delta", delta)->required();
  pack->add_option("--method", method)->check(CLI::IsMember({"greedy", "exact"}));

  auto* gen = app.add_subcommand("gen", "code-based hard instance for a graph");
  gen->add_option("--graph", graph_path)->required();
  gen->add_option("--N", N)->required();
  gen->add_option("--delta", delta)->required();
  gen->add_option("--code", code)->check(CLI::IsMember({"rs", "crt", "auto"}));
  gen->add_option("--out-query", out_query);
  gen->add_option("--out-code", out_code);

  auto* dec = app.add_subcommand("decompose", "core / star / singleton decomposition");
  dec->add_option("--graph", graph_path)->required();

  auto* pick = app.add_subcommand("pick", "case row and subset S");
  pick->add_option("--graph", graph_path)->required();
  pick->add_option("--delta", delta)->required();

  auto* verify = app.add_subcommand("verify", "check a cover against a query");
  verify->add_option("--query", query_path)->required();
  verify->add_option("--cover", cover_path)->required();
  verify->add_option("--delta", delta)->required();

  auto* gap = app.add_subcommand("gap-demo", "LP gap on a random gap instance (TSV)");
  gap->add_option("--n", gap_n)->required();
  gap->add_option("--eps", eps)->required();
  gap->add_option("--C", C);
  gap->add_option("--seed", seed)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*bounds) {
    QueryInstance q = query_from_json(read_json_file(query_path));
    Hypergraph h{q.n, q.edges()};
    if (delta < 1 || delta > q.n) throw InputError("delta must lie in [1, n]");
    const int s = q.n - delta + 1;
    std::vector<int> target = S.empty() ? all_vertices(q.n) : S;
    Json out;
    out["s"] = s;
    out["AGM"] = to_json(agm_bound(h, target));
    if (!pmb_path.empty()) out["PMB"] = to_json(pmb_bound(q, target, constraints_from_json(read_json_file(pmb_path))));
    out["LP_LB"] = to_json(lp_lb(h, s));
    out["LP_UB"] = to_json(lp_ub(h, s));
    out["LP_UB_STAR"] = to_json(lp_ub_star(h, s));
    std::cout << out.dump(2) << "\n";
  } else if (*cover) {
    QueryInstance q = query_from_json(read_json_file(query_path));
    Relation J = generic_join(q);
    CoverResult r;
    if (method == "greedy") {
      r = greedy_packing(J, delta);
    } else if (method == "exact") {
      r = exact_min_cover(J, delta);
    } else {
      if (delta < 1 || delta > q.n) throw InputError("delta must lie in [1, n]");
      r = algorithm_B(q, delta, S.empty() ? default_algb_set(q, J, delta) : S);
    }
    std::cout << to_json(r, q).dump(2) << "\n";
  } else if (*pack) {
    QueryInstance q = query_from_json(read_json_file(query_path));
    Relation J = generic_join(q);
    CoverResult r = method == "exact" ? exact_max_packing(J, delta) : greedy_packing(J, delta);
    std::cout << to_json(r, q).dump(2) << "\n";
  } else if (*gen) {
    Graph g = graph_from_json(read_json_file(graph_path));
    Json summary;
    QueryInstance q;
    Codebook c;
    if (code == "auto") {
      LowerBoundInstance lb = lower_bound_instance(g, N, delta);
      summary["row"] = lb.row.row;
      summary["construction"] = lb.construction;
      summary["faithful"] = lb.faithful;
      q = lb.query;
      c = lb.code;
    } else if (code == "rs") {
      if (delta < 1 || delta > g.n) throw InputError("delta must lie in [1, n]");
      auto qf = largest_prime_at_most(isqrt(N));
      if (!qf || *qf < g.n) throw InputError("no prime q with n <= q <= sqrt(N)");
      c = rs_codebook(*qf, g.n, delta);
      q = instance_from_codebook(to_hypergraph(g), c, N);
      summary["construction"] = "rs";
    } else {
      if (delta < 1 || delta > g.n) throw InputError("delta must lie in [1, n]");
      c = crt_from_dual(to_hypergraph(g), N, half_integral_dual(g).y, g.n - delta + 1).code;
      q = instance_from_codebook(to_hypergraph(g), c, N);
      summary["construction"] = "crt";
    }
    summary["codewords"] = c.size;
    summary["join"] = generic_join(q).size();
    if (!out_query.empty()) write_json_file(out_query, to_json(q));
    if (!out_code.empty()) write_json_file(out_code, to_json(c));
    std::cout << summary.dump(2) << "\n";
  } else if (*dec) {
    std::cout << to_json(decompose(graph_from_json(read_json_file(graph_path)))).dump(2) << "\n";
  } else if (*pick) {
    std::cout << to_json(pick_S(graph_from_json(read_json_file(graph_path)), delta)).dump(2) << "\n";
  } else if (*verify) {
    QueryInstance q = query_from_json(read_json_file(query_path));
    CoverResult c = cover_from_json(read_json_file(cover_path), q);
    Relation J = generic_join(q);
    bool ok = verify_cover(J, c.tuples, delta);
    std::cout << Json{{"cover", ok}, {"packing", verify_packing(c.tuples, delta)}}.dump(2) << "\n";
    std::cout << (ok ? "pass" : "fail") << "\n";
    return ok ? 0 : 1;
  } else if (*gap) {
    GapInstanceParams p{gap_n, eps, C};
    Rng rng(*seed);
    GapInstance gi = gap_instance(p, rng);
    std::cout << "n\teps\tlp_lb\tlp_ub\tratio\ttrials\tmode\n";
    if (gi.graph.n <= kLpUbStarLimit) {
      Rational lb = lp_lb(gi.graph, p.k()).objective;
      Rational ub = lp_ub_star(gi.graph, p.k()).objective;
      std::cout << p.n << "\t" << eps << "\t" << to_double(lb) << "\t" << to_double(ub) << "\t" << to_double(ub / lb)
                << "\t" << gi.resamples + 1 << "\texact\n";
    } else {
      GapCertificate cert = certify_gap(gi);
      std::cout << p.n << "\t" << eps << "\t" << to_double(cert.lp_lb_upper) << "\t" << to_double(cert.lp_ub_star_lower)
                << "\t" << to_double(cert.ratio_lower) << "\t" << gi.resamples + 1 << "\tcertified\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const LpInfeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const LpUnbounded& e) {
    std::cerr << "unbounded: " << e.what() << "\n";
    return 3;
  } catch (const DeskScaleLimit& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
