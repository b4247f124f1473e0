#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "joincover/bounds.hpp"
#include "joincover/core.hpp"
#include "joincover/decompose.hpp"
#include "joincover/graph.hpp"
#include "joincover/rational.hpp"

namespace joincover {

struct CaseRow {
  int row = 0;
  int s = 0;
  Rational predicted_exponent;
  int matched = 0;  // |M| counted in vertices
  int n_I = 0;
  bool disedge = false;
  friend bool operator==(const CaseRow&, const CaseRow&) = default;
};

inline CaseRow classify_case(const Graph& g, int delta, const Decomposition& d) {
  if (delta < 1 || delta > g.n) throw InputError("delta must lie in [1, n]");
  CaseRow c;
  c.s = g.n - delta + 1;
  c.matched = d.matched_vertex_count();
  c.n_I = d.n_I;
  c.disedge = is_disedge(g);
  const int s = c.s, m = c.matched;
  if (s == 1) {
    c.row = 1;
    c.predicted_exponent = 1;
  } else if (s % 2 == 0 && s <= m) {
    c.row = 2;
    c.predicted_exponent = make_rational(s, 2);
  } else if (s % 2 == 1 && s <= m - 1 && !c.disedge) {
    c.row = 3;
    c.predicted_exponent = make_rational(s, 2);
  } else if (s % 2 == 1 && s <= m - 1) {
    c.row = 4;
    c.predicted_exponent = make_rational(s + 1, 2);
  } else if (s <= m + c.n_I) {
    c.row = 5;
    c.predicted_exponent = make_rational(s, 2);
  } else {
    c.row = 6;
    c.predicted_exponent = s - make_rational(m + c.n_I, 2);
  }
  return c;
}

inline CaseRow classify_case(const Graph& g, int delta) {
  if (delta < 1 || delta > g.n) throw InputError("delta must lie in [1, n]");
  return classify_case(g, delta, decompose(g));
}

namespace detail {

/// Simple path on exactly k vertices inside comp (depth-first, lowest start first).
inline std::optional<std::vector<int>> simple_path(const std::vector<std::vector<int>>& adj, const std::vector<int>& comp,
                                                   int k, long budget = 200000) {
  std::vector<char> on(adj.size(), 0);
  std::vector<int> path;
  long steps = 0;
  std::function<bool(int)> dfs = [&](int v) {
    if (++steps > budget) return false;
    path.push_back(v);
    on[v] = 1;
    if (static_cast<int>(path.size()) == k) return true;
    for (int w : adj[v]) {
      if (!on[w] && dfs(w)) return true;
    }
    on[v] = 0;
    path.pop_back();
    return false;
  };
  for (int start : comp) {
    if (dfs(start)) return path;
    if (steps > budget) break;
  }
  return std::nullopt;
}

inline std::vector<int> bfs_prefix(const std::vector<std::vector<int>>& adj, int root, int k) {
  std::vector<int> order{root};
  std::vector<char> seen(adj.size(), 0);
  seen[root] = 1;
  for (std::size_t i = 0; i < order.size() && static_cast<int>(order.size()) < k; ++i) {
    for (int w : adj[order[i]]) {
      if (!seen[w] && static_cast<int>(order.size()) < k) {
        seen[w] = 1;
        order.push_back(w);
      }
    }
  }
  return order;
}

}  // namespace detail

/// Picks s vertices so that every vertex of S has a neighbour in S.
inline std::vector<int> light_picking_1(const Graph& g, int s) {
  if (is_disedge(g)) throw InputError("light picking needs a graph that is not a disedge");
  const int m = 2 * static_cast<int>(maximum_matching(g).size());
  if (s % 2 == 0 || s < 3 || s >= m) throw InputError("light picking needs odd s with 3 <= s < |M|");
  auto adj = adjacency(g);
  auto comps = components(g);
  std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<int> S;
  std::vector<int> lastpick;
  int topick = s;
  for (const auto& cc : comps) {
    if (topick == 0) break;
    if (cc.size() < 2) continue;
    if (topick == 1) {
      if (lastpick.empty()) throw std::logic_error("light picking has no component to borrow a leaf from");
      int leaf = lastpick.back();
      S.erase(std::find(S.begin(), S.end(), leaf));
      int u = cc.front();
      S.push_back(u);
      S.push_back(adj[u].front());
      topick = 0;
      break;
    }
    int take = std::min<int>(topick, static_cast<int>(cc.size()));
    std::vector<int> T;
    if (auto p = detail::simple_path(adj, cc, take)) {
      T = *p;
    } else {
      T = detail::bfs_prefix(adj, cc.front(), take);
    }
    S.insert(S.end(), T.begin(), T.end());
    topick -= take;
    if (T.size() > 2) lastpick = T;
  }
  if (topick != 0) throw std::logic_error("light picking ran out of vertices");
  std::sort(S.begin(), S.end());
  return S;
}

struct PickResult {
  std::vector<int> S;
  CaseRow row;
};

inline PickResult pick_S(const Graph& g, int delta) {
  if (delta < 1 || delta > g.n) throw InputError("delta must lie in [1, n]");
  Decomposition d = decompose(g);
  PickResult out;
  out.row = classify_case(g, delta, d);
  const int s = out.row.s;
  std::vector<int>& S = out.S;
  std::vector<int> mv = matched_vertices(d.matching);
  auto take_edges = [&](int k) {
    for (int i = 0; i < k; ++i) {
      S.push_back(d.matching[i].first);
      S.push_back(d.matching[i].second);
    }
  };
  std::vector<int> core_unmatched;
  for (int v : d.core) {
    if (!std::binary_search(mv.begin(), mv.end(), v)) core_unmatched.push_back(v);
  }
  switch (out.row.row) {
    case 1:
      S = {0};
      break;
    case 2:
      take_edges(s / 2);
      break;
    case 3:
      S = light_picking_1(g, s);
      break;
    case 4: {
      take_edges((s - 1) / 2);
      std::sort(S.begin(), S.end());
      for (int v = 0; v < g.n; ++v) {
        if (!std::binary_search(S.begin(), S.end(), v)) {
          S.push_back(v);
          break;
        }
      }
      break;
    }
    case 5:
      S = mv;
      S.insert(S.end(), core_unmatched.begin(), core_unmatched.begin() + (s - static_cast<int>(mv.size())));
      break;
    default: {
      S = mv;
      S.insert(S.end(), core_unmatched.begin(), core_unmatched.end());
      std::sort(S.begin(), S.end());
      std::vector<int> rest;
      for (int v = 0; v < g.n; ++v) {
        if (!std::binary_search(S.begin(), S.end(), v)) rest.push_back(v);
      }
      S.insert(S.end(), rest.begin(), rest.begin() + (s - static_cast<int>(S.size())));
      break;
    }
  }
  std::sort(S.begin(), S.end());
  if (static_cast<int>(S.size()) != s) throw std::logic_error("pick produced the wrong number of vertices");
  return out;
}

namespace detail {

inline int edge_index(const Hypergraph& h, std::vector<int> e) {
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  for (std::size_t i = 0; i < h.edges.size(); ++i) {
    if (h.edges[i] == e) return static_cast<int>(i);
  }
  throw InputError("edge not present in hypergraph");
}

}  // namespace detail

/// Cardinality constraints (exponent 1) on every edge of h.
inline std::vector<DegreeConstraint> cardinality_constraints(const Hypergraph& h) {
  std::vector<DegreeConstraint> out;
  for (std::size_t i = 0; i < h.edges.size(); ++i) out.push_back({{}, h.edges[i], 1, static_cast<int>(i)});
  return out;
}

/// Light-instance constraints for S: every cardinality constraint plus, inside each
/// component of G[S], one sqrt(N) degree bound per tree edge oriented away from the
/// component's root edge. The resulting constraint graph is a forest.
inline std::vector<DegreeConstraint> light_degree_constraints(const Graph& g, const Hypergraph& h, std::vector<int> S) {
  S = detail::normalized_set(std::move(S), g.n);
  auto out = cardinality_constraints(h);
  std::vector<int> local;
  Graph gs = induced_subgraph(g, S, &local);
  auto adj = adjacency(gs);
  const Rational half = make_rational(1, 2);
  std::vector<char> seen(S.size(), 0);
  for (std::size_t r = 0; r < S.size(); ++r) {
    if (seen[r] || adj[r].empty()) continue;
    std::vector<int> queue{static_cast<int>(r), adj[r].front()};
    seen[r] = seen[adj[r].front()] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      int u = queue[i];
      for (int w : adj[u]) {
        if (seen[w]) continue;
        seen[w] = 1;
        queue.push_back(w);
        int a = S[u], b = S[w];
        out.push_back({{a}, {std::min(a, b), std::max(a, b)}, half, detail::edge_index(h, {a, b})});
      }
    }
  }
  return out;
}

/// sqrt(N) degree bounds in both directions on every non-loop edge (cyclic in general).
inline std::vector<DegreeConstraint> all_light_degree_constraints(const Graph& g, const Hypergraph& h) {
  auto out = cardinality_constraints(h);
  const Rational half = make_rational(1, 2);
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    int e = detail::edge_index(h, {u, v});
    out.push_back({{u}, {u, v}, half, e});
    out.push_back({{v}, {u, v}, half, e});
  }
  return out;
}

struct HeavyLightSplit {
  QueryInstance light;
  std::vector<std::vector<int>> heavy_values;
  std::map<int, QueryInstance> heavy;
  std::int64_t threshold = 1;
};

inline std::int64_t default_threshold(const QueryInstance& q) {
  if (!q.N) throw InputError("default threshold needs the size bound N");
  std::int64_t t = 1;
  while ((t + 1) * (t + 1) <= *q.N) ++t;
  return t;
}

/// Splits off, vertex by vertex, the values of degree >= threshold. Q_h keeps the
/// current relations not touching h plus the unary relation R_h; those values are
/// then removed from the running relations, which end as the light instance.
inline HeavyLightSplit heavy_light_split(const QueryInstance& q, std::int64_t threshold) {
  if (threshold < 1) throw InputError("threshold must be at least 1");
  for (const auto& r : q.relations) {
    if (r.schema.size() > 2) throw InputError("heavy-light split needs arity at most 2");
  }
  HeavyLightSplit out;
  out.threshold = threshold;
  out.heavy_values.assign(q.n, {});
  std::vector<Relation> cur = q.relations;
  for (int h = 0; h < q.n; ++h) {
    std::vector<int> heavy;
    for (const auto& r : cur) {
      auto it = std::find(r.schema.begin(), r.schema.end(), h);
      if (it == r.schema.end()) continue;
      const std::size_t col = static_cast<std::size_t>(it - r.schema.begin());
      std::map<int, std::int64_t> count;
      for (const auto& row : r.rows) ++count[row[col]];
      for (auto [val, c] : count) {
        if (c >= threshold) heavy.push_back(val);
      }
    }
    std::sort(heavy.begin(), heavy.end());
    heavy.erase(std::unique(heavy.begin(), heavy.end()), heavy.end());
    out.heavy_values[h] = heavy;
    if (heavy.empty()) continue;
    std::vector<Relation> rels;
    for (const auto& r : cur) {
      if (std::find(r.schema.begin(), r.schema.end(), h) == r.schema.end()) rels.push_back(r);
    }
    Relation rh{{h}, {}};
    for (int v : heavy) rh.rows.push_back({v});
    rels.push_back(rh);
    std::optional<std::int64_t> n_bound = q.N;
    if (n_bound && static_cast<std::int64_t>(heavy.size()) > *n_bound) n_bound.reset();
    out.heavy.emplace(h, make_query(q.n, q.domains, std::move(rels), n_bound));
    for (auto& r : cur) {
      auto it = std::find(r.schema.begin(), r.schema.end(), h);
      if (it == r.schema.end()) continue;
      const std::size_t col = static_cast<std::size_t>(it - r.schema.begin());
      std::erase_if(r.rows, [&](const Row& row) { return std::binary_search(heavy.begin(), heavy.end(), row[col]); });
    }
  }
  out.light = make_query(q.n, q.domains, std::move(cur), q.N);
  return out;
}

/// J_Q is contained in J_{Q'} together with every J_{Q_h}.
inline bool heavy_light_containment(const QueryInstance& q, const HeavyLightSplit& split) {
  Relation j = naive_join(q);
  std::vector<Relation> parts{naive_join(split.light)};
  for (const auto& [h, qh] : split.heavy) parts.push_back(naive_join(qh));
  for (const auto& row : j.rows) {
    bool found = false;
    for (const auto& p : parts) {
      if (std::binary_search(p.rows.begin(), p.rows.end(), row)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace joincover
