#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "joincover/bounds.hpp"
#include "joincover/core.hpp"
#include "joincover/errors.hpp"

namespace joincover {

enum class CoverRole { COVER, PACKING, BOTH };
enum class CoverMethod { GREEDY, EXACT, ALG_B };

inline std::string to_string(CoverRole r) {
  switch (r) {
    case CoverRole::COVER: return "COVER";
    case CoverRole::PACKING: return "PACKING";
    case CoverRole::BOTH: return "BOTH";
  }
  return "?";
}

inline std::string to_string(CoverMethod m) {
  switch (m) {
    case CoverMethod::GREEDY: return "GREEDY";
    case CoverMethod::EXACT: return "EXACT";
    case CoverMethod::ALG_B: return "ALG_B";
  }
  return "?";
}

/// Full tuples (indexed by attribute id) together with their verified role.
struct CoverResult {
  std::vector<Row> tuples;
  int delta = 1;
  CoverRole role = CoverRole::COVER;
  CoverMethod method = CoverMethod::GREEDY;
  std::size_t size() const { return tuples.size(); }
  friend bool operator==(const CoverResult&, const CoverResult&) = default;
};

using BcqOracle = std::function<bool(const QueryInstance&)>;

/// True iff the join is non-empty; stops at the first output tuple.
inline bool bcq(const QueryInstance& q) {
  bool found = false;
  generic_join_visit(q, all_vertices(q.n), [&](const Row&) {
    found = true;
    return false;
  });
  return found;
}

/// Keeps only tuples agreeing with p wherever p and the edge share attributes.
inline QueryInstance restrict_instance(const QueryInstance& q, const Tuple& p) {
  if (p.attrs.size() != p.values.size()) throw InputError("partial tuple has mismatched attributes and values");
  std::vector<int> pinned(q.n, -1);
  std::vector<char> has(q.n, 0);
  for (std::size_t i = 0; i < p.attrs.size(); ++i) {
    int a = p.attrs[i];
    if (a < 0 || a >= q.n) throw InputError("attribute id out of range");
    pinned[a] = p.values[i];
    has[a] = 1;
  }
  QueryInstance out = q;
  for (auto& r : out.relations) {
    std::vector<std::pair<std::size_t, int>> checks;
    for (std::size_t c = 0; c < r.schema.size(); ++c) {
      if (has[r.schema[c]]) checks.emplace_back(c, pinned[r.schema[c]]);
    }
    if (checks.empty()) continue;
    std::erase_if(r.rows, [&](const Row& row) {
      for (auto [c, v] : checks) {
        if (row[c] != v) return true;
      }
      return false;
    });
  }
  return out;
}

inline bool verify_packing(const std::vector<Row>& tuples, int delta) {
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    for (std::size_t j = i + 1; j < tuples.size(); ++j) {
      if (hamming_dist(tuples[i], tuples[j]) < delta) return false;
    }
  }
  return true;
}

/// U is a subset of J and every tuple of J lies within distance delta - 1 of U.
inline bool verify_cover(const Relation& J, const std::vector<Row>& tuples, int delta) {
  for (const auto& u : tuples) {
    if (!std::binary_search(J.rows.begin(), J.rows.end(), u)) return false;
  }
  for (const auto& t : J.rows) {
    bool hit = false;
    for (const auto& u : tuples) {
      if (hamming_dist(t, u) < delta) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

namespace detail {

inline void require_delta(int delta) {
  if (delta < 1) throw InputError("delta must be at least 1");
}

inline Relation sorted_join(Relation J) {
  sort_unique(J.rows);
  return J;
}

}  // namespace detail

/// Maximal packing by a sorted scan; maximality makes it a cover as well.
inline CoverResult greedy_packing(const Relation& J, int delta) {
  detail::require_delta(delta);
  Relation sj = detail::sorted_join(J);
  CoverResult out;
  out.delta = delta;
  out.role = CoverRole::BOTH;
  out.method = CoverMethod::GREEDY;
  for (const auto& t : sj.rows) {
    bool ok = true;
    for (const auto& u : out.tuples) {
      if (hamming_dist(t, u) < delta) {
        ok = false;
        break;
      }
    }
    if (ok) out.tuples.push_back(t);
  }
  return out;
}

inline constexpr std::size_t kExactCoverLimit = 24;

/// Minimum cover with centers drawn from J, by iterative-deepening branch and bound.
inline CoverResult exact_min_cover(const Relation& J, int delta) {
  detail::require_delta(delta);
  Relation sj = detail::sorted_join(J);
  CoverResult out;
  out.delta = delta;
  out.role = CoverRole::COVER;
  out.method = CoverMethod::EXACT;
  if (sj.rows.empty()) return out;
  if (verify_packing(sj.rows, delta)) {
    out.tuples = sj.rows;
    return out;
  }
  const std::size_t m = sj.rows.size();
  if (m > kExactCoverLimit) throw DeskScaleLimit("exact cover limited to |J| <= 24; use the greedy method");
  std::vector<std::uint32_t> ball(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (hamming_dist(sj.rows[i], sj.rows[j]) < delta) ball[i] |= 1U << j;
    }
  }
  const std::uint32_t all = m == 32 ? ~0U : (1U << m) - 1;
  unsigned largest = 0;
  for (auto b : ball) largest = std::max(largest, static_cast<unsigned>(std::popcount(b)));
  std::vector<int> chosen;
  std::function<bool(std::uint32_t, int)> search = [&](std::uint32_t covered, int budget) {
    if (covered == all) return true;
    if (budget == 0) return false;
    const unsigned left = static_cast<unsigned>(std::popcount(all & ~covered));
    if (left > largest * static_cast<unsigned>(budget)) return false;
    const int u = std::countr_zero(all & ~covered);
    for (std::size_t c = 0; c < m; ++c) {
      if (!(ball[c] >> u & 1U)) continue;
      chosen.push_back(static_cast<int>(c));
      if (search(covered | ball[c], budget - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (int k = 1;; ++k) {
    chosen.clear();
    if (search(0, k)) break;
  }
  std::sort(chosen.begin(), chosen.end());
  for (int c : chosen) out.tuples.push_back(sj.rows[c]);
  return out;
}

/// Maximum packing: maximum independent set of the distance-below-delta conflict graph.
inline CoverResult exact_max_packing(const Relation& J, int delta) {
  detail::require_delta(delta);
  Relation sj = detail::sorted_join(J);
  CoverResult out;
  out.delta = delta;
  out.role = CoverRole::PACKING;
  out.method = CoverMethod::EXACT;
  if (verify_packing(sj.rows, delta)) {
    out.tuples = sj.rows;
    return out;
  }
  const std::size_t m = sj.rows.size();
  if (m > kExactCoverLimit) throw DeskScaleLimit("exact packing limited to |J| <= 24");
  std::vector<std::uint32_t> conflict(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && hamming_dist(sj.rows[i], sj.rows[j]) < delta) conflict[i] |= 1U << j;
    }
  }
  std::uint32_t best = 0;
  std::function<void(std::uint32_t, std::uint32_t)> grow = [&](std::uint32_t cand, std::uint32_t picked) {
    if (cand == 0) {
      if (std::popcount(picked) > std::popcount(best) ||
          (std::popcount(picked) == std::popcount(best) && picked < best)) {
        best = picked;
      }
      return;
    }
    if (std::popcount(picked) + std::popcount(cand) < std::popcount(best)) return;
    const int v = std::countr_zero(cand);
    grow(cand & ~conflict[v] & ~(1U << v), picked | (1U << v));
    grow(cand & ~(1U << v), picked);
  };
  grow(m == 32 ? ~0U : (1U << m) - 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (best >> i & 1U) out.tuples.push_back(sj.rows[i]);
  }
  return out;
}

/// min over |S| = s of |pi_S(J)|, with the lexicographically first minimizer.
inline std::pair<std::size_t, std::vector<int>> min_projection(const Relation& J, int s) {
  const int n = static_cast<int>(J.schema.size());
  if (s < 1 || s > n) throw InputError("s must lie in [1, n]");
  std::vector<int> idx(s);
  for (int i = 0; i < s; ++i) idx[i] = i;
  std::size_t best = SIZE_MAX;
  std::vector<int> arg;
  for (;;) {
    std::size_t size = project(J, idx).size();
    if (size < best) {
      best = size;
      arg = idx;
    }
    int i = s - 1;
    while (i >= 0 && idx[i] == n - s + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
  return {best, arg};
}

/// Cover from the projected join on S, completed one attribute at a time; each
/// parent keeps the first extension the oracle accepts.
inline CoverResult algorithm_B(const QueryInstance& q, int delta, std::vector<int> S, const BcqOracle& oracle = bcq) {
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  if (delta < 1 || delta > q.n) throw InputError("delta must lie in [1, n]");
  if (static_cast<int>(S.size()) != q.n - delta + 1) throw InputError("|S| must equal n - delta + 1");
  CoverResult out;
  out.delta = delta;
  out.role = CoverRole::COVER;
  out.method = CoverMethod::ALG_B;
  Relation p0 = generic_join(projected_query(q, S));
  std::vector<char> assigned(q.n, 0);
  for (int v : S) assigned[v] = 1;
  std::vector<Row> parents;
  for (const auto& r : p0.rows) {
    Row full(q.n, -1);
    for (std::size_t i = 0; i < S.size(); ++i) full[S[i]] = r[i];
    parents.push_back(std::move(full));
  }
  auto partial = [&](const Row& row) {
    Tuple t;
    for (int a = 0; a < q.n; ++a) {
      if (assigned[a]) {
        t.attrs.push_back(a);
        t.values.push_back(row[a]);
      }
    }
    return t;
  };
  for (int v = 0; v < q.n; ++v) {
    if (assigned[v]) continue;
    assigned[v] = 1;
    std::vector<Row> next;
    for (auto& p : parents) {
      for (int val = 0; val < q.domain_size(v); ++val) {
        p[v] = val;
        if (oracle(restrict_instance(q, partial(p)))) {
          next.push_back(p);
          break;
        }
      }
    }
    parents = std::move(next);
  }
  out.tuples = std::move(parents);
  std::sort(out.tuples.begin(), out.tuples.end());
  return out;
}

}  // namespace joincover
