#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "joincover/core.hpp"
#include "joincover/errors.hpp"
#include "joincover/graph.hpp"
#include "joincover/lp.hpp"
#include "joincover/rational.hpp"

namespace joincover {

enum class BoundKind { AGM, PMB, LP_LB, LP_UB, LP_UB_STAR, FEC_DUAL };

inline std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::AGM: return "AGM";
    case BoundKind::PMB: return "PMB";
    case BoundKind::LP_LB: return "LP_LB";
    case BoundKind::LP_UB: return "LP_UB";
    case BoundKind::LP_UB_STAR: return "LP_UB_STAR";
    case BoundKind::FEC_DUAL: return "FEC_DUAL";
  }
  return "?";
}

inline BoundKind parse_bound_kind(const std::string& s) {
  for (BoundKind k : {BoundKind::AGM, BoundKind::PMB, BoundKind::LP_LB, BoundKind::LP_UB, BoundKind::LP_UB_STAR,
                      BoundKind::FEC_DUAL}) {
    if (to_string(k) == s) return k;
  }
  throw InputError("unknown bound kind '" + s + "'");
}

/// LP value (as an exponent of N) together with the witness solution.
/// Variables are named x<edge>, y<vertex>, z<vertex>, delta<constraint> and L.
struct BoundReport {
  BoundKind kind = BoundKind::AGM;
  Rational objective;
  std::vector<std::pair<std::string, Rational>> solution;

  Rational value(const std::string& name) const {
    for (const auto& [k, v] : solution) {
      if (k == name) return v;
    }
    return 0;
  }
  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

namespace detail {

inline std::vector<int> normalized_set(std::vector<int> S, int n) {
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  for (int v : S) {
    if (v < 0 || v >= n) throw InputError("vertex id out of range");
  }
  return S;
}

inline void require_covered(const Hypergraph& g, const std::vector<int>& S) {
  std::vector<char> covered(g.n, 0);
  for (const auto& e : g.edges) {
    for (int v : e) covered[v] = 1;
  }
  for (int v : S) {
    if (!covered[v]) throw LpInfeasible("vertex " + std::to_string(v) + " lies in no edge");
  }
}

/// max sum_{v in S} y_v subject to sum_{v in e cap S} y_v <= 1; duals give x_e.
inline LpSolution packing_lp(const Hypergraph& g, const std::vector<int>& S, std::vector<int>& row_edge) {
  std::vector<int> var(g.n, -1);
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  for (int v : S) var[v] = lp.add_var(1);
  row_edge.clear();
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    std::vector<std::pair<int, Rational>> terms;
    for (int v : g.edges[e]) {
      if (var[v] >= 0) terms.emplace_back(var[v], 1);
    }
    if (terms.empty()) continue;
    lp.add_constraint(std::move(terms), Relop::LessEq, 1);
    row_edge.push_back(static_cast<int>(e));
  }
  return solve_lp(lp);
}

}  // namespace detail

/// Fractional edge cover number of S (AGM exponent) with the optimal x.
inline BoundReport agm_bound(const Hypergraph& g, std::vector<int> S) {
  S = detail::normalized_set(std::move(S), g.n);
  detail::require_covered(g, S);
  BoundReport rep;
  rep.kind = BoundKind::AGM;
  std::vector<Rational> x(g.edges.size());
  if (!S.empty()) {
    std::vector<int> rows;
    LpSolution sol = detail::packing_lp(g, S, rows);
    rep.objective = sol.objective;
    for (std::size_t i = 0; i < rows.size(); ++i) x[rows[i]] = sol.duals[i];
  }
  for (std::size_t e = 0; e < x.size(); ++e) rep.solution.emplace_back("x" + std::to_string(e), x[e]);
  return rep;
}

inline BoundReport agm_bound(const Graph& g, std::vector<int> S) { return agm_bound(to_hypergraph(g), std::move(S)); }

/// Optimal fractional vertex packing restricted to S.
inline BoundReport fec_dual(const Hypergraph& g, std::vector<int> S) {
  S = detail::normalized_set(std::move(S), g.n);
  detail::require_covered(g, S);
  BoundReport rep;
  rep.kind = BoundKind::FEC_DUAL;
  std::vector<Rational> y(g.n);
  if (!S.empty()) {
    std::vector<int> rows;
    LpSolution sol = detail::packing_lp(g, S, rows);
    rep.objective = sol.objective;
    for (std::size_t i = 0; i < S.size(); ++i) y[S[i]] = sol.x[i];
  }
  for (int v : S) rep.solution.emplace_back("y" + std::to_string(v), y[v]);
  return rep;
}

inline BoundReport fec_dual(const Graph& g, std::vector<int> S) { return fec_dual(to_hypergraph(g), std::move(S)); }

inline std::vector<int> all_vertices(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

/// (X, Y, N_{Y|X}) with the bound written as N^exponent.
struct DegreeConstraint {
  std::vector<int> X;
  std::vector<int> Y;
  Rational exponent;
  int guard = 0;
  friend bool operator==(const DegreeConstraint&, const DegreeConstraint&) = default;
};

namespace detail {

inline void validate_constraints(const Hypergraph& g, std::vector<DegreeConstraint>& dcs) {
  for (auto& dc : dcs) {
    std::sort(dc.X.begin(), dc.X.end());
    std::sort(dc.Y.begin(), dc.Y.end());
    if (dc.guard < 0 || dc.guard >= static_cast<int>(g.edges.size())) throw InputError("guard edge out of range");
    if (sgn(dc.exponent) < 0) throw InputError("degree bound exponent must be non-negative");
    if (!std::includes(dc.Y.begin(), dc.Y.end(), dc.X.begin(), dc.X.end()) || dc.X.size() >= dc.Y.size()) {
      throw InputError("degree constraint needs X to be a proper subset of Y");
    }
    const auto& e = g.edges[dc.guard];
    if (!std::includes(e.begin(), e.end(), dc.Y.begin(), dc.Y.end())) {
      throw InputError("degree constraint Y is not inside its guard edge");
    }
  }
}

inline bool constraint_graph_acyclic(int n, const std::vector<int>& S, const std::vector<DegreeConstraint>& dcs) {
  std::vector<char> in_s(n, 0);
  for (int v : S) in_s[v] = 1;
  std::vector<std::vector<int>> out(n);
  std::vector<int> indeg(n, 0);
  for (const auto& dc : dcs) {
    for (int x : dc.X) {
      if (!in_s[x]) continue;
      for (int y : dc.Y) {
        if (!in_s[y] || std::binary_search(dc.X.begin(), dc.X.end(), y)) continue;
        out[x].push_back(y);
        ++indeg[y];
      }
    }
  }
  std::vector<int> stack;
  for (int v : S) {
    if (indeg[v] == 0) stack.push_back(v);
  }
  std::size_t seen = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++seen;
    for (int w : out[v]) {
      if (--indeg[w] == 0) stack.push_back(w);
    }
  }
  return seen == S.size();
}

}  // namespace detail

/// Polymatroid bound over an acyclic set of degree constraints.
inline BoundReport pmb_bound(const Hypergraph& g, std::vector<int> S, std::vector<DegreeConstraint> dcs) {
  S = detail::normalized_set(std::move(S), g.n);
  detail::validate_constraints(g, dcs);
  if (!detail::constraint_graph_acyclic(g.n, S, dcs)) {
    throw InputError(
        "degree constraint graph is cyclic; prune it first (keep one orientation along a path, "
        "e.g. with light_degree_constraints)");
  }
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  for (const auto& dc : dcs) lp.add_var(dc.exponent);
  for (int v : S) {
    std::vector<std::pair<int, Rational>> terms;
    for (std::size_t i = 0; i < dcs.size(); ++i) {
      const auto& dc = dcs[i];
      if (std::binary_search(dc.Y.begin(), dc.Y.end(), v) && !std::binary_search(dc.X.begin(), dc.X.end(), v)) {
        terms.emplace_back(static_cast<int>(i), 1);
      }
    }
    if (terms.empty()) throw LpInfeasible("vertex " + std::to_string(v) + " is not covered by any constraint");
    lp.add_constraint(std::move(terms), Relop::GreaterEq, 1);
  }
  BoundReport rep;
  rep.kind = BoundKind::PMB;
  if (S.empty()) {
    for (std::size_t i = 0; i < dcs.size(); ++i) rep.solution.emplace_back("delta" + std::to_string(i), Rational(0));
    return rep;
  }
  LpSolution sol = solve_lp(lp);
  rep.objective = sol.objective;
  for (std::size_t i = 0; i < dcs.size(); ++i) rep.solution.emplace_back("delta" + std::to_string(i), sol.x[i]);
  return rep;
}

/// Largest number of distinct Y-projections per X-value inside the guard relation.
inline std::size_t max_degree(const QueryInstance& q, const DegreeConstraint& dc) {
  const Relation& r = q.relations.at(dc.guard);
  Relation py = project(r, dc.Y);
  if (dc.X.empty()) return py.size();
  std::vector<int> xcols;
  for (int a : dc.X) {
    xcols.push_back(static_cast<int>(std::find(py.schema.begin(), py.schema.end(), a) - py.schema.begin()));
  }
  std::map<Row, std::size_t> count;
  std::size_t best = 0;
  for (const auto& row : py.rows) {
    Row key;
    for (int c : xcols) key.push_back(row[c]);
    best = std::max(best, ++count[key]);
  }
  return best;
}

/// As above, and when the instance declares N, every constraint must hold on the data.
inline BoundReport pmb_bound(const QueryInstance& q, std::vector<int> S, std::vector<DegreeConstraint> dcs) {
  Hypergraph g{q.n, q.edges()};
  detail::validate_constraints(g, dcs);
  if (q.N) {
    for (const auto& dc : dcs) {
      if (!at_most_power(max_degree(q, dc), dc.exponent, static_cast<std::uint64_t>(*q.N))) {
        throw InputError("degree constraint is violated by the relation data");
      }
    }
  }
  return pmb_bound(g, std::move(S), std::move(dcs));
}

/// One PMB instance: a hypergraph, a target set and its degree constraints.
struct PmbProblem {
  Hypergraph g;
  std::vector<int> S;
  std::vector<DegreeConstraint> constraints;
};

/// PMB(whole) <= sum of PMB(parts), where the parts' target sets cover S.
inline bool pmb_union_check(const PmbProblem& whole, const std::vector<PmbProblem>& parts) {
  std::vector<int> uni;
  for (const auto& p : parts) uni.insert(uni.end(), p.S.begin(), p.S.end());
  uni = detail::normalized_set(uni, whole.g.n);
  if (uni != detail::normalized_set(whole.S, whole.g.n)) throw InputError("parts must cover the target set exactly");
  Rational total = 0;
  for (const auto& p : parts) total += pmb_bound(p.g, p.S, p.constraints).objective;
  return pmb_bound(whole.g, whole.S, whole.constraints).objective <= total;
}

namespace detail {

inline void require_all_covered(const Hypergraph& g) {
  std::vector<int> all = all_vertices(g.n);
  std::vector<char> covered(g.n, 0);
  for (const auto& e : g.edges) {
    for (int v : e) covered[v] = 1;
  }
  for (int v : all) {
    if (!covered[v]) throw InputError("vertex " + std::to_string(v) + " lies in no edge");
  }
}

inline void require_s(const Hypergraph& g, int s) {
  if (s < 1 || s > g.n) throw InputError("s must lie in [1, n]");
}

}  // namespace detail

/// max L over fractional packings y with every size-s vertex set summing to at least L,
/// solved by adding the currently lightest size-s set as a cut until none is violated.
inline BoundReport lp_lb(const Hypergraph& g, int s) {
  detail::require_s(g, s);
  detail::require_all_covered(g);
  LinearProgram lp;
  lp.sense = Sense::Maximize;
  for (int v = 0; v < g.n; ++v) lp.add_var(0);
  const int L = lp.add_var(1);
  for (const auto& e : g.edges) {
    std::vector<std::pair<int, Rational>> terms;
    for (int v : e) terms.emplace_back(v, 1);
    lp.add_constraint(std::move(terms), Relop::LessEq, 1);
  }
  auto add_cut = [&](const std::vector<int>& subset) {
    std::vector<std::pair<int, Rational>> terms{{L, 1}};
    for (int v : subset) terms.emplace_back(v, -1);
    lp.add_constraint(std::move(terms), Relop::LessEq, 0);
  };
  std::vector<int> first(s);
  std::iota(first.begin(), first.end(), 0);
  add_cut(first);
  int cuts = 1;
  for (;;) {
    LpSolution sol = solve_lp(lp);
    std::vector<int> order = all_vertices(g.n);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sol.x[a] < sol.x[b]; });
    order.resize(s);
    Rational sum = 0;
    for (int v : order) sum += sol.x[v];
    if (sum >= sol.x[L]) {
      BoundReport rep;
      rep.kind = BoundKind::LP_LB;
      rep.objective = sol.x[L];
      for (int v = 0; v < g.n; ++v) rep.solution.emplace_back("y" + std::to_string(v), sol.x[v]);
      rep.solution.emplace_back("L", sol.x[L]);
      rep.solution.emplace_back("cuts", Rational(cuts));
      return rep;
    }
    std::sort(order.begin(), order.end());
    add_cut(order);
    ++cuts;
  }
}

/// Fractional relaxation: min sum x_e s.t. sum_{e ni v} x_e >= z_v, sum z_v >= s, 0 <= z <= 1.
inline BoundReport lp_ub(const Hypergraph& g, int s) {
  detail::require_s(g, s);
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  const int m = static_cast<int>(g.edges.size());
  for (int e = 0; e < m; ++e) lp.add_var(1);
  for (int v = 0; v < g.n; ++v) lp.add_var(0);
  std::vector<std::vector<std::pair<int, Rational>>> cover(g.n);
  for (int e = 0; e < m; ++e) {
    for (int v : g.edges[e]) cover[v].emplace_back(e, 1);
  }
  for (int v = 0; v < g.n; ++v) {
    auto terms = cover[v];
    terms.emplace_back(m + v, -1);
    lp.add_constraint(std::move(terms), Relop::GreaterEq, 0);
    lp.add_constraint({{m + v, 1}}, Relop::LessEq, 1);
  }
  std::vector<std::pair<int, Rational>> total;
  for (int v = 0; v < g.n; ++v) total.emplace_back(m + v, 1);
  lp.add_constraint(std::move(total), Relop::GreaterEq, s);
  LpSolution sol = solve_lp(lp);
  BoundReport rep;
  rep.kind = BoundKind::LP_UB;
  rep.objective = sol.objective;
  for (int e = 0; e < m; ++e) rep.solution.emplace_back("x" + std::to_string(e), sol.x[e]);
  for (int v = 0; v < g.n; ++v) rep.solution.emplace_back("z" + std::to_string(v), sol.x[m + v]);
  return rep;
}

inline constexpr int kLpUbStarLimit = 20;

/// AGM exponent of every vertex subset, indexed by bitmask.
class AgmTable {
 public:
  explicit AgmTable(const Hypergraph& g) : g_(g) {
    if (g.n > kLpUbStarLimit) throw DeskScaleLimit("subset enumeration is limited to n <= 20");
    detail::require_all_covered(g);
    values_.resize(std::size_t{1} << g.n);
    for (std::uint32_t mask = 1; mask < values_.size(); ++mask) {
      std::vector<int> S;
      for (int v = 0; v < g.n; ++v) {
        if (mask >> v & 1U) S.push_back(v);
      }
      std::vector<int> rows;
      values_[mask] = detail::packing_lp(g, S, rows).objective;
    }
  }

  const Rational& operator[](std::uint32_t mask) const { return values_[mask]; }

  /// Smallest-AGM subset of size s (lowest mask among ties in colexicographic order).
  std::pair<std::uint32_t, Rational> best_of_size(int s) const {
    std::uint32_t best = 0;
    bool found = false;
    for (std::uint32_t mask = 0; mask < values_.size(); ++mask) {
      if (std::popcount(mask) != s) continue;
      if (!found || values_[mask] < values_[best]) {
        best = mask;
        found = true;
      }
    }
    return {best, values_[best]};
  }

 private:
  Hypergraph g_;
  std::vector<Rational> values_;
};

inline std::vector<int> mask_to_set(std::uint32_t mask, int n) {
  std::vector<int> S;
  for (int v = 0; v < n; ++v) {
    if (mask >> v & 1U) S.push_back(v);
  }
  return S;
}

/// Integral-z version: min over |S| = s of the AGM exponent of S.
inline BoundReport lp_ub_star(const Hypergraph& g, int s) {
  detail::require_s(g, s);
  if (g.n > kLpUbStarLimit) throw DeskScaleLimit("subset enumeration is limited to n <= 20");
  detail::require_all_covered(g);
  std::vector<int> idx(s);
  std::iota(idx.begin(), idx.end(), 0);
  bool have = false;
  BoundReport best;
  std::vector<int> best_set;
  for (;;) {
    BoundReport r = agm_bound(g, idx);
    if (!have || r.objective < best.objective) {
      best = r;
      best_set = idx;
      have = true;
    }
    int i = s - 1;
    while (i >= 0 && idx[i] == g.n - s + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
  best.kind = BoundKind::LP_UB_STAR;
  for (int v = 0; v < g.n; ++v) {
    bool in = std::binary_search(best_set.begin(), best_set.end(), v);
    best.solution.emplace_back("z" + std::to_string(v), Rational(in ? 1 : 0));
  }
  return best;
}

inline constexpr int kHalfIntegralExhaustiveLimit = 16;

/// Optimal fractional vertex packing of a graph with values in {0, 1/2, 1}.
struct HalfIntegralDual {
  std::vector<Rational> y;
  Rational objective;
  friend bool operator==(const HalfIntegralDual&, const HalfIntegralDual&) = default;
};

namespace detail {

/// Optimal half-integral packings are exactly: y = 1 on an independent set J,
/// 0 on N(J), 1/2 elsewhere, where |J| - |N(J)| is maximal. Among them we take
/// one whose integral part splits into stars (a 0-center with 1-leaves of degree
/// one) whenever such a choice exists, then the largest integral part, then the
/// lexicographically smallest y.
inline HalfIntegralDual canonical_half_integral(const Graph& g, const Rational& optimum) {
  const int n = g.n;
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    adj[u] |= 1U << v;
    adj[v] |= 1U << u;
  }
  Rational twice = optimum * 2 - n;
  if (twice.get_den() != 1) throw std::logic_error("packing optimum is not half-integral");
  const long target = twice.get_num().get_si();

  struct Key {
    bool valid;
    int integral;
    std::vector<int> code;
  };
  auto better = [](const Key& a, const Key& b) {
    if (a.valid != b.valid) return a.valid;
    if (a.integral != b.integral) return a.integral > b.integral;
    return a.code < b.code;
  };
  bool have = false;
  Key best{};
  for (std::uint32_t J = 0; J < (1U << n); ++J) {
    std::uint32_t nb = 0;
    bool independent = true;
    for (int v = 0; v < n && independent; ++v) {
      if (!(J >> v & 1U)) continue;
      if (adj[v] & J) independent = false;
      nb |= adj[v];
    }
    if (!independent) continue;
    if (std::popcount(J) - std::popcount(nb) != target) continue;
    bool valid = true;
    for (int v = 0; v < n && valid; ++v) {
      if ((J >> v & 1U) && std::popcount(adj[v]) > 1) valid = false;
      if ((nb >> v & 1U) && (adj[v] & nb)) valid = false;
    }
    Key k{valid, std::popcount(J | nb), std::vector<int>(n, 1)};
    for (int v = 0; v < n; ++v) {
      if (J >> v & 1U) k.code[v] = 2;
      if (nb >> v & 1U) k.code[v] = 0;
    }
    if (!have || better(k, best)) {
      best = std::move(k);
      have = true;
    }
  }
  if (!have) throw std::logic_error("no half-integral packing attains the LP optimum");
  HalfIntegralDual out;
  out.objective = optimum;
  for (int c : best.code) out.y.push_back(make_rational(c, 2));
  return out;
}

}  // namespace detail

inline HalfIntegralDual half_integral_dual(const Graph& g) {
  Hypergraph h = to_hypergraph(g);
  detail::require_all_covered(h);
  BoundReport lp = fec_dual(h, all_vertices(g.n));
  if (g.n <= kHalfIntegralExhaustiveLimit) return detail::canonical_half_integral(g, lp.objective);
  HalfIntegralDual out;
  out.objective = lp.objective;
  for (int v = 0; v < g.n; ++v) {
    Rational y = lp.value("y" + std::to_string(v));
    if (Rational(y * 2).get_den() != 1) throw DeskScaleLimit("basic dual is not half-integral and n > 16");
    out.y.push_back(y);
  }
  return out;
}

}  // namespace joincover
