#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "joincover/bounds.hpp"
#include "joincover/graph.hpp"
#include "joincover/rational.hpp"

namespace joincover {

/// A star: the center carries y = 0, every leaf y = 1.
struct Star {
  int center = 0;
  std::vector<int> leaves;
  friend bool operator==(const Star&, const Star&) = default;
};

/// Split of V into core (y = 1/2), stars and singletons, with a maximum matching
/// M = M_c + M_s where M_c is maximum on the core and M_s matches each center to one leaf.
struct Decomposition {
  int n = 0;
  std::vector<int> core;
  std::vector<Star> stars;
  std::vector<int> singletons;
  Matching matching;
  int n_I = 0;                   // |V(G_c) \ V(M)|
  int matched_outside_core = 0;  // |V(M) \ V(G_c)|
  std::vector<Rational> y;
  friend bool operator==(const Decomposition&, const Decomposition&) = default;

  int matched_vertex_count() const { return 2 * static_cast<int>(matching.size()); }

  std::vector<int> star_vertices() const {
    std::vector<int> out;
    for (const auto& st : stars) {
      out.push_back(st.center);
      out.insert(out.end(), st.leaves.begin(), st.leaves.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline Decomposition decompose(const Graph& g) {
  Decomposition d;
  d.n = g.n;
  d.y = half_integral_dual(g).y;
  const Rational half = make_rational(1, 2);
  auto adj = adjacency(g);
  std::vector<int> zeros, ones;
  for (int v = 0; v < g.n; ++v) {
    if (d.y[v] == half) {
      d.core.push_back(v);
    } else if (sgn(d.y[v]) == 0) {
      zeros.push_back(v);
    } else {
      ones.push_back(v);
    }
  }

  // Every 0-vertex is matched into the 1-vertices (Hall's condition holds at an optimum).
  std::vector<int> partner(g.n, -1);
  std::function<bool(int, std::vector<char>&)> augment = [&](int c, std::vector<char>& seen) {
    for (int w : adj[c]) {
      if (d.y[w] != 1 || seen[w]) continue;
      seen[w] = 1;
      if (partner[w] == -1 || augment(partner[w], seen)) {
        partner[w] = c;
        partner[c] = w;
        return true;
      }
    }
    return false;
  };
  for (int c : zeros) {
    std::vector<char> seen(g.n, 0);
    if (!augment(c, seen)) throw std::logic_error("zero-valued vertex has no private one-valued neighbour");
  }

  std::vector<int> star_of(g.n, -1);
  for (int c : zeros) {
    star_of[c] = static_cast<int>(d.stars.size());
    d.stars.push_back(Star{c, {partner[c]}});
  }
  for (int w : ones) {
    if (partner[w] != -1) continue;
    int attach = -1;
    for (int c : adj[w]) {
      if (sgn(d.y[c]) == 0) {
        attach = c;
        break;
      }
    }
    if (attach == -1) {
      d.singletons.push_back(w);
    } else {
      d.stars[star_of[attach]].leaves.push_back(w);
    }
  }
  for (auto& st : d.stars) std::sort(st.leaves.begin(), st.leaves.end());

  Matching m;
  if (!d.core.empty()) {
    std::vector<int> local;
    Graph gc = induced_subgraph(g, d.core);
    for (auto [u, v] : maximum_matching(gc)) m.emplace_back(d.core[u], d.core[v]);
  }
  for (int c : zeros) m.emplace_back(std::min(c, partner[c]), std::max(c, partner[c]));
  std::sort(m.begin(), m.end());
  if (m.size() != maximum_matching(g).size()) throw std::logic_error("core and star matchings do not form a maximum matching");
  d.matching = std::move(m);

  std::vector<int> mv = matched_vertices(d.matching);
  for (int v : d.core) d.n_I += !std::binary_search(mv.begin(), mv.end(), v);
  for (int v : mv) d.matched_outside_core += !std::binary_search(d.core.begin(), d.core.end(), v);
  return d;
}

/// (M_c, M_s): the matching edges inside the core and inside the stars.
inline std::pair<Matching, Matching> matching_split(const Decomposition& d) {
  std::vector<int> star_id(d.n, -1);
  for (std::size_t i = 0; i < d.stars.size(); ++i) {
    star_id[d.stars[i].center] = static_cast<int>(i);
    for (int l : d.stars[i].leaves) star_id[l] = static_cast<int>(i);
  }
  auto in_core = [&](int v) { return std::binary_search(d.core.begin(), d.core.end(), v); };
  Matching mc, ms;
  for (auto [u, v] : d.matching) {
    if (in_core(u) && in_core(v)) {
      mc.emplace_back(u, v);
    } else if (star_id[u] >= 0 && star_id[u] == star_id[v]) {
      ms.emplace_back(u, v);
    } else {
      throw std::logic_error("matching edge crosses decomposition parts");
    }
  }
  return {mc, ms};
}

}  // namespace joincover
