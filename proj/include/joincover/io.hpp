#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "joincover/bounds.hpp"
#include "joincover/codes.hpp"
#include "joincover/core.hpp"
#include "joincover/cover.hpp"
#include "joincover/decompose.hpp"
#include "joincover/errors.hpp"
#include "joincover/graph.hpp"
#include "joincover/pick.hpp"

namespace joincover {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << "\n";
}

namespace detail {

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace detail

inline Json to_json(const QueryInstance& q) {
  Json j;
  j["n"] = q.n;
  j["domains"] = q.domains;
  Json edges = Json::array(), rels = Json::array();
  for (const auto& r : q.relations) {
    edges.push_back(r.schema);
    Json rows = Json::array();
    for (const auto& row : r.rows) {
      Json t = Json::array();
      for (std::size_t i = 0; i < row.size(); ++i) t.push_back(q.domains[r.schema[i]][row[i]]);
      rows.push_back(std::move(t));
    }
    rels.push_back(std::move(rows));
  }
  j["edges"] = std::move(edges);
  j["relations"] = std::move(rels);
  j["N"] = q.N ? Json(*q.N) : Json(nullptr);
  return j;
}

inline QueryInstance query_from_json(const Json& j) {
  return detail::guarded("query", [&] {
    std::optional<std::int64_t> N;
    if (j.contains("N") && !j.at("N").is_null()) N = j.at("N").get<std::int64_t>();
    return make_query_from_symbols(j.at("n").get<int>(), j.at("domains").get<std::vector<std::vector<std::string>>>(),
                                   j.at("edges").get<std::vector<std::vector<int>>>(),
                                   j.at("relations").get<std::vector<std::vector<std::vector<std::string>>>>(), N);
  });
}

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  return Json{{"n", g.n}, {"edges", edges}};
}

inline Graph graph_from_json(const Json& j) {
  return detail::guarded("graph", [&] {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (e.size() != 2) throw InputError("graph edges must be pairs");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return make_graph(j.at("n").get<int>(), std::move(edges));
  });
}

inline Json to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw InputError("rational must be a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

inline Json to_json(const BoundReport& b) {
  Json sol = Json::object();
  for (const auto& [k, v] : b.solution) sol[k] = to_string(v);
  return Json{{"kind", to_string(b.kind)}, {"objective", to_string(b.objective)}, {"solution", sol}};
}

inline BoundReport bound_report_from_json(const Json& j) {
  return detail::guarded("bound report", [&] {
    BoundReport b;
    b.kind = parse_bound_kind(j.at("kind").get<std::string>());
    b.objective = rational_from_json(j.at("objective"));
    for (const auto& [k, v] : j.at("solution").items()) b.solution.emplace_back(k, rational_from_json(v));
    return b;
  });
}

inline Json to_json(const DegreeConstraint& dc) {
  return Json{{"X", dc.X}, {"Y", dc.Y}, {"exponent", to_string(dc.exponent)}, {"guard", dc.guard}};
}

inline std::vector<DegreeConstraint> constraints_from_json(const Json& j) {
  return detail::guarded("degree constraints", [&] {
    std::vector<DegreeConstraint> out;
    for (const auto& c : j) {
      out.push_back({c.at("X").get<std::vector<int>>(), c.at("Y").get<std::vector<int>>(),
                     rational_from_json(c.at("exponent")), c.at("guard").get<int>()});
    }
    return out;
  });
}

inline Json to_json(const Decomposition& d) {
  Json stars = Json::array();
  for (const auto& s : d.stars) stars.push_back(Json{{"center", s.center}, {"leaves", s.leaves}});
  Json matching = Json::array();
  for (auto [u, v] : d.matching) matching.push_back({u, v});
  Json y = Json::array();
  for (const auto& v : d.y) y.push_back(to_string(v));
  return Json{{"n", d.n},
              {"core", d.core},
              {"stars", stars},
              {"singletons", d.singletons},
              {"matching", matching},
              {"n_I", d.n_I},
              {"matched_outside_core", d.matched_outside_core},
              {"y", y}};
}

inline Decomposition decomposition_from_json(const Json& j) {
  return detail::guarded("decomposition", [&] {
    Decomposition d;
    d.n = j.at("n").get<int>();
    d.core = j.at("core").get<std::vector<int>>();
    for (const auto& s : j.at("stars")) d.stars.push_back({s.at("center").get<int>(), s.at("leaves").get<std::vector<int>>()});
    d.singletons = j.at("singletons").get<std::vector<int>>();
    for (const auto& e : j.at("matching")) d.matching.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    d.n_I = j.at("n_I").get<int>();
    d.matched_outside_core = j.at("matched_outside_core").get<int>();
    for (const auto& v : j.at("y")) d.y.push_back(rational_from_json(v));
    return d;
  });
}

inline Json to_json(const Codebook& c) {
  return Json{{"n", c.n}, {"alphabets", c.alphabet_sizes}, {"codewords", c.codewords()}, {"delta", c.designed_distance}};
}

inline Codebook codebook_from_json(const Json& j) {
  return detail::guarded("codebook", [&] {
    Codebook c;
    c.n = j.at("n").get<int>();
    c.alphabet_sizes = j.at("alphabets").get<std::vector<std::int64_t>>();
    c.designed_distance = j.at("delta").get<int>();
    for (const auto& w : j.at("codewords")) {
      auto word = w.get<std::vector<std::uint32_t>>();
      if (static_cast<int>(word.size()) != c.n) throw InputError("codeword length mismatch");
      c.symbols.insert(c.symbols.end(), word.begin(), word.end());
      ++c.size;
    }
    return c;
  });
}

inline CoverRole parse_role(const std::string& s) {
  for (auto r : {CoverRole::COVER, CoverRole::PACKING, CoverRole::BOTH}) {
    if (to_string(r) == s) return r;
  }
  throw InputError("unknown role '" + s + "'");
}

inline CoverMethod parse_method(const std::string& s) {
  for (auto m : {CoverMethod::GREEDY, CoverMethod::EXACT, CoverMethod::ALG_B}) {
    if (to_string(m) == s) return m;
  }
  throw InputError("unknown method '" + s + "'");
}

/// Tuples are written as symbol strings of the query's domains.
inline Json to_json(const CoverResult& c, const QueryInstance& q) {
  Json tuples = Json::array();
  for (const auto& t : c.tuples) {
    Json row = Json::array();
    for (int a = 0; a < q.n; ++a) row.push_back(q.domains[a][t[a]]);
    tuples.push_back(std::move(row));
  }
  return Json{{"delta", c.delta},
              {"role", to_string(c.role)},
              {"method", to_string(c.method)},
              {"size", c.size()},
              {"tuples", tuples}};
}

inline CoverResult cover_from_json(const Json& j, const QueryInstance& q) {
  return detail::guarded("cover", [&] {
    CoverResult c;
    c.delta = j.at("delta").get<int>();
    c.role = j.contains("role") ? parse_role(j.at("role").get<std::string>()) : CoverRole::COVER;
    c.method = j.contains("method") ? parse_method(j.at("method").get<std::string>()) : CoverMethod::EXACT;
    std::vector<std::unordered_map<std::string, int>> index(q.n);
    for (int a = 0; a < q.n; ++a) {
      for (int i = 0; i < q.domain_size(a); ++i) index[a].emplace(q.domains[a][i], i);
    }
    for (const auto& t : j.at("tuples")) {
      auto syms = t.get<std::vector<std::string>>();
      if (static_cast<int>(syms.size()) != q.n) throw InputError("cover tuple has the wrong arity");
      Row row;
      for (int a = 0; a < q.n; ++a) {
        auto it = index[a].find(syms[a]);
        if (it == index[a].end()) throw InputError("cover symbol '" + syms[a] + "' not in domain");
        row.push_back(it->second);
      }
      c.tuples.push_back(std::move(row));
    }
    return c;
  });
}

inline Json to_json(const PickResult& p) {
  return Json{{"row", p.row.row}, {"s", p.row.s}, {"S", p.S}, {"exponent", to_string(p.row.predicted_exponent)}};
}

}  // namespace joincover
