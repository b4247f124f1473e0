#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "joincover/errors.hpp"

namespace joincover {

/// Symbol ids aligned with a relation schema.
using Row = std::vector<int>;

/// A set of tuples over an ordered attribute set. Rows hold interned symbol ids.
struct Relation {
  std::vector<int> schema;
  std::vector<Row> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Partial assignment over an explicit attribute list.
struct Tuple {
  std::vector<int> attrs;
  std::vector<int> values;
  friend bool operator==(const Tuple&, const Tuple&) = default;
};

struct QueryInstance {
  int n = 0;
  std::vector<std::vector<std::string>> domains;
  std::vector<Relation> relations;
  std::optional<std::int64_t> N;

  std::vector<std::vector<int>> edges() const {
    std::vector<std::vector<int>> out;
    out.reserve(relations.size());
    for (const auto& r : relations) out.push_back(r.schema);
    return out;
  }
  int domain_size(int attr) const { return static_cast<int>(domains.at(attr).size()); }
  friend bool operator==(const QueryInstance&, const QueryInstance&) = default;
};

namespace detail {

inline void sort_unique(std::vector<Row>& rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

/// Reorders columns so the schema is ascending, then sorts and dedups rows.
inline Relation canonical_relation(Relation r) {
  std::vector<int> perm(r.schema.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) { return r.schema[a] < r.schema[b]; });
  Relation out;
  for (int p : perm) out.schema.push_back(r.schema[p]);
  out.rows.reserve(r.rows.size());
  for (const auto& row : r.rows) {
    Row nr;
    nr.reserve(perm.size());
    for (int p : perm) nr.push_back(row[p]);
    out.rows.push_back(std::move(nr));
  }
  sort_unique(out.rows);
  return out;
}

inline std::vector<Row> intersect_rows(const std::vector<Row>& a, const std::vector<Row>& b) {
  std::vector<Row> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

/// Validates and normalizes an instance: ascending schemas, set semantics,
/// and hyperedges on the same attribute set collapsed by intersection.
inline QueryInstance make_query(int n, std::vector<std::vector<std::string>> domains,
                                std::vector<Relation> relations,
                                std::optional<std::int64_t> N = std::nullopt) {
  if (n < 0) throw InputError("attribute count must be non-negative");
  if (static_cast<int>(domains.size()) != n) throw InputError("need one domain per attribute");
  for (int v = 0; v < n; ++v) {
    if (domains[v].empty()) throw InputError("empty domain for attribute " + std::to_string(v));
    std::set<std::string> seen(domains[v].begin(), domains[v].end());
    if (seen.size() != domains[v].size()) {
      throw InputError("duplicate symbol in domain of attribute " + std::to_string(v));
    }
  }
  if (N && *N <= 0) throw InputError("size bound N must be positive");

  QueryInstance q;
  q.n = n;
  q.domains = std::move(domains);
  q.N = N;
  std::map<std::vector<int>, std::size_t> by_schema;
  for (auto& r : relations) {
    if (r.schema.empty()) throw InputError("empty hyperedge");
    std::set<int> attrs(r.schema.begin(), r.schema.end());
    if (attrs.size() != r.schema.size()) throw InputError("repeated attribute inside an edge");
    for (int a : r.schema) {
      if (a < 0 || a >= n) throw InputError("attribute id out of range: " + std::to_string(a));
    }
    for (const auto& row : r.rows) {
      if (row.size() != r.schema.size()) throw InputError("tuple arity does not match its edge");
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] < 0 || row[i] >= static_cast<int>(q.domains[r.schema[i]].size())) {
          throw InputError("symbol outside the domain of attribute " + std::to_string(r.schema[i]));
        }
      }
    }
    Relation c = detail::canonical_relation(std::move(r));
    auto it = by_schema.find(c.schema);
    if (it == by_schema.end()) {
      by_schema.emplace(c.schema, q.relations.size());
      q.relations.push_back(std::move(c));
    } else {
      auto& existing = q.relations[it->second];
      existing.rows = detail::intersect_rows(existing.rows, c.rows);
    }
  }
  if (N) {
    for (const auto& r : q.relations) {
      if (static_cast<std::int64_t>(r.size()) > *N) {
        throw InputError("relation exceeds the declared size bound N");
      }
    }
  }
  return q;
}

/// Builds an instance from symbol strings, interning them against the domains.
inline QueryInstance make_query_from_symbols(
    int n, std::vector<std::vector<std::string>> domains, const std::vector<std::vector<int>>& edges,
    const std::vector<std::vector<std::vector<std::string>>>& tuples,
    std::optional<std::int64_t> N = std::nullopt) {
  if (static_cast<int>(domains.size()) != n) throw InputError("need one domain per attribute");
  if (edges.size() != tuples.size()) throw InputError("need one relation per edge");
  std::vector<std::unordered_map<std::string, int>> index(n);
  for (int v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < domains[v].size(); ++i) index[v].emplace(domains[v][i], static_cast<int>(i));
  }
  std::vector<Relation> rels;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    Relation r;
    r.schema = edges[e];
    for (int a : r.schema) {
      if (a < 0 || a >= n) throw InputError("attribute id out of range: " + std::to_string(a));
    }
    for (const auto& t : tuples[e]) {
      if (t.size() != r.schema.size()) throw InputError("tuple arity does not match its edge");
      Row row;
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto it = index[r.schema[i]].find(t[i]);
        if (it == index[r.schema[i]].end()) {
          throw InputError("symbol '" + t[i] + "' not in domain of attribute " + std::to_string(r.schema[i]));
        }
        row.push_back(it->second);
      }
      r.rows.push_back(std::move(row));
    }
    rels.push_back(std::move(r));
  }
  return make_query(n, std::move(domains), std::move(rels), N);
}

inline int hamming_dist(const Row& a, const Row& b) {
  if (a.size() != b.size()) throw InputError("hamming distance needs equal-length tuples");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

inline int hamming_dist(const Tuple& a, const Tuple& b) {
  if (a.attrs != b.attrs) throw InputError("hamming distance needs tuples over the same attributes");
  return hamming_dist(a.values, b.values);
}

inline Relation project(const Relation& r, std::vector<int> attrs) {
  std::sort(attrs.begin(), attrs.end());
  attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
  std::vector<int> cols;
  for (int a : attrs) {
    auto it = std::find(r.schema.begin(), r.schema.end(), a);
    if (it == r.schema.end()) throw InputError("projection attribute not in schema");
    cols.push_back(static_cast<int>(it - r.schema.begin()));
  }
  Relation out;
  out.schema = attrs;
  out.rows.reserve(r.rows.size());
  for (const auto& row : r.rows) {
    Row p;
    p.reserve(cols.size());
    for (int c : cols) p.push_back(row[c]);
    out.rows.push_back(std::move(p));
  }
  detail::sort_unique(out.rows);
  return out;
}

/// Natural join of two relations; output schema is the ascending union.
inline Relation natural_join(const Relation& a, const Relation& b) {
  std::vector<int> schema;
  std::set_union(a.schema.begin(), a.schema.end(), b.schema.begin(), b.schema.end(),
                 std::back_inserter(schema));
  std::vector<int> shared;
  std::set_intersection(a.schema.begin(), a.schema.end(), b.schema.begin(), b.schema.end(),
                        std::back_inserter(shared));
  auto col_of = [](const std::vector<int>& s, int attr) {
    return static_cast<int>(std::find(s.begin(), s.end(), attr) - s.begin());
  };
  std::vector<int> a_key, b_key;
  for (int x : shared) {
    a_key.push_back(col_of(a.schema, x));
    b_key.push_back(col_of(b.schema, x));
  }
  std::map<Row, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < b.rows.size(); ++i) {
    Row k;
    for (int c : b_key) k.push_back(b.rows[i][c]);
    index[k].push_back(i);
  }
  // For every output column: take it from a (>= 0) or from b (encoded as -1 - col).
  std::vector<int> source;
  for (int x : schema) {
    auto ia = std::find(a.schema.begin(), a.schema.end(), x);
    if (ia != a.schema.end()) {
      source.push_back(static_cast<int>(ia - a.schema.begin()));
    } else {
      source.push_back(-1 - col_of(b.schema, x));
    }
  }
  Relation out;
  out.schema = schema;
  for (const auto& ra : a.rows) {
    Row k;
    for (int c : a_key) k.push_back(ra[c]);
    auto it = index.find(k);
    if (it == index.end()) continue;
    for (std::size_t j : it->second) {
      Row r;
      r.reserve(schema.size());
      for (int s : source) r.push_back(s >= 0 ? ra[s] : b.rows[j][-1 - s]);
      out.rows.push_back(std::move(r));
    }
  }
  detail::sort_unique(out.rows);
  return out;
}

/// Join by successive pairwise natural joins. Attributes outside every edge
/// range over their whole domain.
inline Relation naive_join(const QueryInstance& q) {
  Relation acc;
  acc.rows.push_back({});
  for (const auto& r : q.relations) {
    acc = natural_join(acc, r);
    if (acc.empty()) break;
  }
  if (!acc.empty()) {
    for (int v = 0; v < q.n; ++v) {
      if (std::binary_search(acc.schema.begin(), acc.schema.end(), v)) continue;
      Relation dom;
      dom.schema = {v};
      for (int i = 0; i < q.domain_size(v); ++i) dom.rows.push_back({i});
      acc = natural_join(acc, dom);
    }
  }
  Relation out;
  for (int v = 0; v < q.n; ++v) out.schema.push_back(v);
  if (acc.empty()) return out;
  out.rows = std::move(acc.rows);
  return out;
}

namespace detail {

/// Trie over a relation's rows with columns ordered by the global variable order.
struct Trie {
  struct Node {
    std::vector<int> keys;
    std::vector<int> children;
  };
  std::vector<Node> nodes;

  Trie() : nodes(1) {}

  void insert(const Row& path) {
    int cur = 0;
    for (int key : path) {
      auto& node = nodes[cur];
      auto it = std::lower_bound(node.keys.begin(), node.keys.end(), key);
      std::size_t pos = static_cast<std::size_t>(it - node.keys.begin());
      if (it != node.keys.end() && *it == key) {
        cur = node.children[pos];
      } else {
        int fresh = static_cast<int>(nodes.size());
        nodes[cur].keys.insert(nodes[cur].keys.begin() + pos, key);
        nodes[cur].children.insert(nodes[cur].children.begin() + pos, fresh);
        nodes.emplace_back();
        cur = fresh;
      }
    }
  }

  int child(int node, int key) const {
    const auto& nd = nodes[node];
    auto it = std::lower_bound(nd.keys.begin(), nd.keys.end(), key);
    if (it == nd.keys.end() || *it != key) return -1;
    return nd.children[static_cast<std::size_t>(it - nd.keys.begin())];
  }
};

}  // namespace detail

/// Attribute-at-a-time worst-case optimal join. The visitor receives each
/// output tuple (indexed by attribute id) and returns false to stop early.
inline void generic_join_visit(const QueryInstance& q, const std::vector<int>& order,
                               const std::function<bool(const Row&)>& visit) {
  std::vector<int> pos(q.n, -1);
  if (static_cast<int>(order.size()) != q.n) throw InputError("order must be a permutation of V");
  for (int i = 0; i < q.n; ++i) {
    int a = order[i];
    if (a < 0 || a >= q.n || pos[a] != -1) throw InputError("order must be a permutation of V");
    pos[a] = i;
  }
  for (const auto& r : q.relations) {
    if (r.empty()) return;
  }
  std::vector<detail::Trie> tries(q.relations.size());
  std::vector<std::vector<int>> at_level(q.n);
  for (std::size_t e = 0; e < q.relations.size(); ++e) {
    const auto& r = q.relations[e];
    std::vector<int> cols(r.schema.size());
    std::iota(cols.begin(), cols.end(), 0);
    std::sort(cols.begin(), cols.end(), [&](int a, int b) { return pos[r.schema[a]] < pos[r.schema[b]]; });
    for (const auto& row : r.rows) {
      Row path;
      for (int c : cols) path.push_back(row[c]);
      tries[e].insert(path);
    }
    for (int a : r.schema) at_level[pos[a]].push_back(static_cast<int>(e));
  }
  std::vector<int> cursor(q.relations.size(), 0);
  Row out(q.n, 0);
  bool stop = false;

  std::function<void(int)> rec = [&](int depth) {
    if (stop) return;
    if (depth == q.n) {
      if (!visit(out)) stop = true;
      return;
    }
    int attr = order[depth];
    const auto& rels = at_level[depth];
    std::vector<int> saved;
    for (int e : rels) saved.push_back(cursor[e]);
    auto descend = [&](int value) {
      for (std::size_t i = 0; i < rels.size(); ++i) {
        cursor[rels[i]] = tries[rels[i]].child(saved[i], value);
      }
      out[attr] = value;
      rec(depth + 1);
    };
    if (rels.empty()) {
      for (int v = 0; v < q.domain_size(attr) && !stop; ++v) descend(v);
    } else {
      std::size_t smallest = 0;
      for (std::size_t i = 1; i < rels.size(); ++i) {
        if (tries[rels[i]].nodes[saved[i]].keys.size() < tries[rels[smallest]].nodes[saved[smallest]].keys.size()) {
          smallest = i;
        }
      }
      for (int value : tries[rels[smallest]].nodes[saved[smallest]].keys) {
        if (stop) break;
        bool all = true;
        for (std::size_t i = 0; i < rels.size() && all; ++i) {
          if (i != smallest && tries[rels[i]].child(saved[i], value) < 0) all = false;
        }
        if (all) descend(value);
      }
    }
    for (std::size_t i = 0; i < rels.size(); ++i) cursor[rels[i]] = saved[i];
  };
  rec(0);
}

inline Relation generic_join(const QueryInstance& q, const std::vector<int>& order) {
  Relation out;
  for (int v = 0; v < q.n; ++v) out.schema.push_back(v);
  generic_join_visit(q, order, [&](const Row& r) {
    out.rows.push_back(r);
    return true;
  });
  std::sort(out.rows.begin(), out.rows.end());
  return out;
}

inline Relation generic_join(const QueryInstance& q) {
  std::vector<int> order(q.n);
  std::iota(order.begin(), order.end(), 0);
  return generic_join(q, order);
}

/// Induced query Q_S. Attribute i of the result corresponds to the i-th
/// smallest member of S.
inline QueryInstance projected_query(const QueryInstance& q, std::vector<int> S) {
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  if (S.empty()) throw InputError("projected query needs a non-empty attribute set");
  std::vector<int> local(q.n, -1);
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (S[i] < 0 || S[i] >= q.n) throw InputError("attribute id out of range");
    local[S[i]] = static_cast<int>(i);
  }
  std::vector<std::vector<std::string>> domains;
  for (int v : S) domains.push_back(q.domains[v]);
  std::vector<Relation> rels;
  for (const auto& r : q.relations) {
    std::vector<int> inter;
    for (int a : r.schema) {
      if (local[a] >= 0) inter.push_back(a);
    }
    if (inter.empty()) continue;
    Relation p = project(r, inter);
    for (int& a : p.schema) a = local[a];
    rels.push_back(std::move(p));
  }
  return make_query(static_cast<int>(S.size()), std::move(domains), std::move(rels), q.N);
}

}  // namespace joincover
