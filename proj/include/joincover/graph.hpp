#pragma once

#include <algorithm>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "joincover/core.hpp"
#include "joincover/errors.hpp"

namespace joincover {

using Edge = std::pair<int, int>;

/// Simple graph with optional self-loops; edges are stored with u <= v, sorted.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;

  bool has_edge(int u, int v) const {
    Edge e = u <= v ? Edge{u, v} : Edge{v, u};
    return std::binary_search(edges.begin(), edges.end(), e);
  }
  friend bool operator==(const Graph&, const Graph&) = default;
};

inline Graph make_graph(int n, std::vector<Edge> edges) {
  if (n < 0) throw InputError("vertex count must be non-negative");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw InputError("duplicate edge");
  return Graph{n, std::move(edges)};
}

/// Hypergraph with ascending, de-duplicated edges.
struct Hypergraph {
  int n = 0;
  std::vector<std::vector<int>> edges;
  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;
};

inline Hypergraph make_hypergraph(int n, std::vector<std::vector<int>> edges) {
  if (n < 0) throw InputError("vertex count must be non-negative");
  for (auto& e : edges) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    if (e.empty()) throw InputError("empty hyperedge");
    if (e.front() < 0 || e.back() >= n) throw InputError("hyperedge vertex out of range");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Hypergraph{n, std::move(edges)};
}

inline Hypergraph to_hypergraph(const Graph& g) {
  std::vector<std::vector<int>> edges;
  for (auto [u, v] : g.edges) edges.push_back(u == v ? std::vector<int>{u} : std::vector<int>{u, v});
  return make_hypergraph(g.n, std::move(edges));
}

inline Hypergraph hypergraph_of(const QueryInstance& q) { return make_hypergraph(q.n, q.edges()); }

/// Graph view of an arity-2 instance; unary edges become self-loops.
inline Graph graph_of(const QueryInstance& q) {
  std::vector<Edge> edges;
  for (const auto& r : q.relations) {
    if (r.schema.size() > 2) throw InputError("instance has an edge of arity greater than 2");
    edges.emplace_back(r.schema.front(), r.schema.back());
  }
  return make_graph(q.n, std::move(edges));
}

inline std::vector<std::vector<int>> adjacency(const Graph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

/// Connected components under non-loop edges, each sorted, listed by smallest member.
inline std::vector<std::vector<int>> components(const Graph& g) {
  auto adj = adjacency(g);
  std::vector<int> seen(g.n, 0);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.n; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (int w : adj[comp[i]]) {
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

inline Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices, std::vector<int>* local_of = nullptr) {
  std::vector<int> local(g.n, -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges) {
    if (local[u] >= 0 && local[v] >= 0) edges.emplace_back(local[u], local[v]);
  }
  if (local_of) *local_of = local;
  return make_graph(static_cast<int>(vertices.size()), std::move(edges));
}

/// Matching as a sorted list of non-loop edges (u < v).
using Matching = std::vector<Edge>;

inline std::vector<int> matched_vertices(const Matching& m) {
  std::vector<int> out;
  for (auto [u, v] : m) {
    out.push_back(u);
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

/// Edmonds' blossom algorithm; returns mate[] (-1 when unmatched).
class Blossom {
 public:
  explicit Blossom(const std::vector<std::vector<int>>& adj)
      : adj_(adj), n_(static_cast<int>(adj.size())), mate_(n_, -1), parent_(n_), base_(n_), used_(n_), blossom_(n_) {}

  std::vector<int> solve() {
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] != -1) continue;
      for (int w : adj_[v]) {
        if (mate_[w] == -1) {
          mate_[w] = v;
          mate_[v] = w;
          break;
        }
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] != -1) continue;
      int end = find_path(v);
      while (end != -1) {
        int pv = parent_[end];
        int ppv = mate_[pv];
        mate_[end] = pv;
        mate_[pv] = end;
        end = ppv;
      }
    }
    return mate_;
  }

 private:
  int lca(int a, int b) {
    std::vector<char> mark(n_, 0);
    for (;;) {
      a = base_[a];
      mark[a] = 1;
      if (mate_[a] == -1) break;
      a = parent_[mate_[a]];
    }
    for (;;) {
      b = base_[b];
      if (mark[b]) return b;
      b = parent_[mate_[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[v] != b) {
      blossom_[base_[v]] = blossom_[base_[mate_[v]]] = 1;
      parent_[v] = child;
      child = mate_[v];
      v = parent_[mate_[v]];
    }
  }

  int find_path(int root) {
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), -1);
    for (int i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int to : adj_[v]) {
        if (base_[v] == base_[to] || mate_[v] == to) continue;
        if (to == root || (mate_[to] != -1 && parent_[mate_[to]] != -1)) {
          int cur = lca(v, to);
          std::fill(blossom_.begin(), blossom_.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n_; ++i) {
            if (blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = 1;
                q.push(i);
              }
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (mate_[to] == -1) return to;
          used_[mate_[to]] = 1;
          q.push(mate_[to]);
        }
      }
    }
    return -1;
  }

  const std::vector<std::vector<int>>& adj_;
  int n_;
  std::vector<int> mate_, parent_, base_;
  std::vector<char> used_, blossom_;
};

inline int matching_number(const std::vector<std::vector<int>>& adj) {
  auto mate = Blossom(adj).solve();
  int c = 0;
  for (int v = 0; v < static_cast<int>(mate.size()); ++v) c += (mate[v] > v);
  return c;
}

}  // namespace detail

/// Maximum-cardinality matching; among all maximum matchings, the one whose
/// sorted edge list is lexicographically smallest.
inline Matching maximum_matching(const Graph& g) {
  auto adj = adjacency(g);
  const int target = detail::matching_number(adj);
  std::vector<char> removed(g.n, 0);
  auto residual = [&](int a, int b) {
    std::vector<std::vector<int>> r(g.n);
    for (int u = 0; u < g.n; ++u) {
      if (removed[u] || u == a || u == b) continue;
      for (int w : adj[u]) {
        if (!removed[w] && w != a && w != b) r[u].push_back(w);
      }
    }
    return r;
  };
  Matching m;
  int remaining = target;
  for (auto [u, v] : g.edges) {
    if (remaining == 0) break;
    if (u == v || removed[u] || removed[v]) continue;
    if (detail::matching_number(residual(u, v)) == remaining - 1) {
      m.emplace_back(u, v);
      removed[u] = removed[v] = 1;
      --remaining;
    }
  }
  return m;
}

/// True iff every component (ignoring self-loops) has at most two vertices.
inline bool is_disedge(const Graph& g) {
  for (const auto& c : components(g)) {
    if (c.size() > 2) return false;
  }
  return true;
}

}  // namespace joincover
