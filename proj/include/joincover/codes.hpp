#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "joincover/bounds.hpp"
#include "joincover/core.hpp"
#include "joincover/decompose.hpp"
#include "joincover/errors.hpp"
#include "joincover/graph.hpp"
#include "joincover/pick.hpp"
#include "joincover/rational.hpp"

namespace joincover {

inline bool is_prime(std::int64_t x) {
  if (x < 2) return false;
  for (std::int64_t d = 2; d * d <= x; ++d) {
    if (x % d == 0) return false;
  }
  return true;
}

/// Largest prime <= x, or nullopt.
inline std::optional<std::int64_t> largest_prime_at_most(std::int64_t x) {
  for (std::int64_t p = x; p >= 2; --p) {
    if (is_prime(p)) return p;
  }
  return std::nullopt;
}

inline std::int64_t isqrt(std::int64_t x) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

/// Element of the prime field F_q.
struct FieldElem {
  std::int64_t value = 0;
  std::int64_t q = 2;

  FieldElem() = default;
  FieldElem(std::int64_t v, std::int64_t mod) : value(((v % mod) + mod) % mod), q(mod) {}

  friend FieldElem operator+(FieldElem a, FieldElem b) { return {a.value + b.value, a.q}; }
  friend FieldElem operator-(FieldElem a, FieldElem b) { return {a.value - b.value, a.q}; }
  friend FieldElem operator*(FieldElem a, FieldElem b) { return {a.value * b.value, a.q}; }
  FieldElem pow(std::int64_t e) const {
    FieldElem r{1, q}, b = *this;
    for (; e > 0; e >>= 1, b = b * b) {
      if (e & 1) r = r * b;
    }
    return r;
  }
  FieldElem inverse() const {
    if (value == 0) throw std::domain_error("zero has no inverse");
    return pow(q - 2);
  }
  friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

/// Explicit code: size codewords of length n stored row-major.
struct Codebook {
  int n = 0;
  std::vector<std::int64_t> alphabet_sizes;
  std::vector<std::uint32_t> symbols;
  std::int64_t size = 0;
  int designed_distance = 0;

  std::vector<int> codeword(std::int64_t i) const {
    auto b = symbols.begin() + i * n;
    return std::vector<int>(b, b + n);
  }
  std::vector<std::vector<int>> codewords() const {
    std::vector<std::vector<int>> out;
    for (std::int64_t i = 0; i < size; ++i) out.push_back(codeword(i));
    return out;
  }
  friend bool operator==(const Codebook&, const Codebook&) = default;
};

inline constexpr std::int64_t kCodebookSymbolLimit = 50'000'000;

namespace detail {

inline void require_enumerable(std::int64_t count, int n) {
  if (count > kCodebookSymbolLimit / std::max(n, 1)) throw DeskScaleLimit("codebook too large to enumerate");
}

inline std::int64_t checked_pow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > kCodebookSymbolLimit / b) throw DeskScaleLimit("codebook too large to enumerate");
    r *= b;
  }
  return r;
}

inline void sort_codewords(Codebook& c) {
  std::vector<std::vector<int>> words = c.codewords();
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  c.size = static_cast<std::int64_t>(words.size());
  c.symbols.clear();
  for (const auto& w : words) c.symbols.insert(c.symbols.end(), w.begin(), w.end());
}

}  // namespace detail

inline std::vector<std::int64_t> default_eval_points(int n) {
  std::vector<std::int64_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

/// Generator rows alpha_j^i for i < k.
inline std::vector<std::vector<std::int64_t>> rs_generator(std::int64_t q, int k, const std::vector<std::int64_t>& points) {
  std::vector<std::vector<std::int64_t>> G(k, std::vector<std::int64_t>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) {
    FieldElem a{points[j], q};
    for (int i = 0; i < k; ++i) G[i][j] = a.pow(i).value;
  }
  return G;
}

namespace detail {

inline void validate_rs(std::int64_t q, int n, int delta, const std::vector<std::int64_t>& points) {
  if (!is_prime(q)) throw InputError("field size must be prime");
  if (n < 1 || n > q) throw InputError("RS code needs 1 <= n <= q");
  if (delta < 1 || delta > n) throw InputError("RS code needs 1 <= delta <= n");
  if (static_cast<int>(points.size()) != n) throw InputError("need one evaluation point per coordinate");
  std::vector<std::int64_t> p = points;
  for (auto& v : p) {
    if (v < 0 || v >= q) throw InputError("evaluation point outside the field");
  }
  std::sort(p.begin(), p.end());
  if (std::adjacent_find(p.begin(), p.end()) != p.end()) throw InputError("evaluation points must be distinct");
}

}  // namespace detail

/// Evaluations of all polynomials of degree <= n - delta at the given points.
inline Codebook rs_codebook(std::int64_t q, int n, int delta, std::vector<std::int64_t> points = {}) {
  if (points.empty()) points = default_eval_points(n);
  detail::validate_rs(q, n, delta, points);
  const int k = n - delta + 1;
  const std::int64_t M = detail::checked_pow(q, k);
  detail::require_enumerable(M, n);
  Codebook c;
  c.n = n;
  c.alphabet_sizes.assign(n, q);
  c.size = M;
  c.designed_distance = delta;
  c.symbols.resize(static_cast<std::size_t>(M) * n);
  std::vector<std::int64_t> msg(k, 0);
  for (std::int64_t idx = 0; idx < M; ++idx) {
    for (int j = 0; j < n; ++j) {
      std::int64_t acc = 0;
      for (int i = k - 1; i >= 0; --i) acc = (acc * points[j] + msg[i]) % q;
      c.symbols[idx * n + j] = static_cast<std::uint32_t>(acc);
    }
    for (int i = 0; i < k; ++i) {
      if (++msg[i] < q) break;
      msg[i] = 0;
    }
  }
  return c;
}

/// Same messages evaluated at t further points: an (n + t, q^k, delta + t) code.
inline Codebook rs_extend(std::int64_t q, int n, int delta, int t) {
  if (t < 0) throw InputError("extension count must be non-negative");
  if (n + t > q) throw InputError("extension needs q >= n + t");
  return rs_codebook(q, n + t, delta + t);
}

/// CRT code over distinct primes in any coordinate order; messages are 0..M-1 with
/// M the product of the k smallest moduli.
inline Codebook crt_codebook_moduli(const std::vector<std::int64_t>& moduli, int k) {
  const int n = static_cast<int>(moduli.size());
  if (k < 1 || k > n) throw InputError("CRT code needs 1 <= k <= n");
  for (auto p : moduli) {
    if (!is_prime(p)) throw InputError("CRT moduli must be prime");
  }
  std::vector<std::int64_t> sorted = moduli;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InputError("CRT moduli must be distinct");
  std::int64_t M = 1;
  for (int i = 0; i < k; ++i) {
    if (M > kCodebookSymbolLimit / sorted[i]) throw DeskScaleLimit("CRT message space too large");
    M *= sorted[i];
  }
  detail::require_enumerable(M, n);
  Codebook c;
  c.n = n;
  c.alphabet_sizes = moduli;
  c.size = M;
  c.designed_distance = n - k + 1;
  c.symbols.resize(static_cast<std::size_t>(M) * n);
  for (std::int64_t m = 0; m < M; ++m) {
    for (int j = 0; j < n; ++j) c.symbols[m * n + j] = static_cast<std::uint32_t>(m % moduli[j]);
  }
  return c;
}

inline Codebook crt_codebook(const std::vector<std::int64_t>& primes, int k) {
  for (std::size_t i = 1; i < primes.size(); ++i) {
    if (primes[i] <= primes[i - 1]) throw InputError("CRT moduli must be strictly increasing");
  }
  return crt_codebook_moduli(primes, k);
}

inline std::vector<int> crt_encode(const std::vector<std::int64_t>& moduli, std::int64_t m) {
  std::vector<int> out;
  for (auto p : moduli) out.push_back(static_cast<int>(m % p));
  return out;
}

struct DisedgeConstructionParams {
  int n_s = 0;
  int n_t = 0;
  int delta_s = 0;
};

inline void validate(const DisedgeConstructionParams& p) {
  if (p.n_s < 0 || p.n_t < 0 || p.n_s % 2 != 0) throw InputError("n_s must be even and n_t non-negative");
  if (p.delta_s <= 0 || p.delta_s % 2 != 0) throw InputError("delta_s must be positive and even");
  if (p.delta_s > p.n_s) throw InputError("delta_s exceeds n_s");
}

/// Copies base coordinate j (j < n_s/2) into positions 2j and 2j+1; the n_t trailing
/// base coordinates follow unchanged.
inline Codebook duplicated_code(const Codebook& base, const DisedgeConstructionParams& p) {
  validate(p);
  const int half = p.n_s / 2;
  if (base.n != half + p.n_t) throw InputError("base code length must be n_s/2 + n_t");
  Codebook c;
  c.n = p.n_s + p.n_t;
  c.size = base.size;
  c.designed_distance = p.delta_s + p.n_t;
  for (int j = 0; j < half; ++j) {
    c.alphabet_sizes.push_back(base.alphabet_sizes[j]);
    c.alphabet_sizes.push_back(base.alphabet_sizes[j]);
  }
  for (int j = half; j < base.n; ++j) c.alphabet_sizes.push_back(base.alphabet_sizes[j]);
  c.symbols.reserve(static_cast<std::size_t>(c.size) * c.n);
  for (std::int64_t i = 0; i < base.size; ++i) {
    for (int j = 0; j < half; ++j) {
      c.symbols.push_back(base.symbols[i * base.n + j]);
      c.symbols.push_back(base.symbols[i * base.n + j]);
    }
    for (int j = half; j < base.n; ++j) c.symbols.push_back(base.symbols[i * base.n + j]);
  }
  return c;
}

/// Duplicated RS code with message length (n_s - delta_s)/2 + 1.
inline Codebook duplicated_rs_code(std::int64_t q, const DisedgeConstructionParams& p) {
  validate(p);
  const int len = p.n_s / 2 + p.n_t;
  const int k = (p.n_s - p.delta_s) / 2 + 1;
  return duplicated_code(rs_codebook(q, len, len - k + 1), p);
}

/// Minimum pairwise Hamming distance by full scan.
inline int min_distance(const Codebook& c) {
  if (c.size < 2) throw InputError("minimum distance needs at least two codewords");
  int best = c.n;
  for (std::int64_t i = 0; i < c.size; ++i) {
    const auto* a = &c.symbols[i * c.n];
    for (std::int64_t j = i + 1; j < c.size; ++j) {
      const auto* b = &c.symbols[j * c.n];
      int d = 0;
      for (int t = 0; t < c.n && d < best; ++t) d += a[t] != b[t];
      best = std::min(best, d);
      if (best == 0) return 0;
    }
  }
  return best;
}

/// Minimum weight of a nonzero codeword; equals the minimum distance for linear codes.
inline int min_nonzero_weight(const Codebook& c) {
  int best = c.n + 1;
  for (std::int64_t i = 0; i < c.size; ++i) {
    int w = 0;
    for (int t = 0; t < c.n; ++t) w += c.symbols[i * c.n + t] != 0;
    if (w > 0) best = std::min(best, w);
  }
  if (best > c.n) throw InputError("code has no nonzero codeword");
  return best;
}

/// Rank over F_q of the given columns of G.
inline int rank_mod_p(std::vector<std::vector<std::int64_t>> rows, std::int64_t q) {
  int r = 0;
  const int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (int c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i) {
      if (rows[i][c] % q != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    std::int64_t inv = FieldElem{rows[r][c], q}.inverse().value;
    for (auto& v : rows[r]) v = v * inv % q;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      std::int64_t f = rows[i][c];
      for (int j = 0; j < cols; ++j) rows[i][j] = ((rows[i][j] - f * rows[r][j]) % q + q) % q;
    }
    ++r;
  }
  return r;
}

/// Minimum distance of the linear code generated by G (k x n over F_q):
/// n minus the largest column set on which some nonzero message vanishes.
inline int linear_code_distance(const std::vector<std::vector<std::int64_t>>& G, std::int64_t q) {
  const int k = static_cast<int>(G.size());
  const int n = static_cast<int>(G[0].size());
  if (n > 24) throw DeskScaleLimit("column-subset enumeration limited to n <= 24");
  int largest = -1;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    int size = std::popcount(mask);
    if (size <= largest) continue;
    std::vector<std::vector<std::int64_t>> sub(k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < n; ++j) {
        if (mask >> j & 1U) sub[i].push_back(G[i][j]);
      }
    }
    if (size == 0 || rank_mod_p(sub, q) < k) largest = size;
  }
  return n - largest;
}

/// R_e = projection of the codewords on e, with alphabet {0..a_v - 1} per vertex.
inline QueryInstance instance_from_codebook(const Hypergraph& g, const Codebook& c,
                                            std::optional<std::int64_t> N = std::nullopt) {
  if (c.n != g.n) throw InputError("codebook length must equal the vertex count");
  std::vector<std::vector<std::string>> domains(g.n);
  for (int v = 0; v < g.n; ++v) {
    for (std::int64_t a = 0; a < c.alphabet_sizes[v]; ++a) domains[v].push_back(std::to_string(a));
  }
  std::vector<Relation> rels;
  for (const auto& e : g.edges) {
    Relation r{e, {}};
    r.rows.reserve(static_cast<std::size_t>(c.size));
    for (std::int64_t i = 0; i < c.size; ++i) {
      Row row;
      for (int v : e) row.push_back(static_cast<int>(c.symbols[i * c.n + v]));
      r.rows.push_back(std::move(row));
    }
    detail::sort_unique(r.rows);
    rels.push_back(std::move(r));
  }
  return make_query(g.n, std::move(domains), std::move(rels), N);
}

inline Relation codebook_relation(const Codebook& c) {
  Relation r;
  for (int v = 0; v < c.n; ++v) r.schema.push_back(v);
  r.rows = c.codewords();
  detail::sort_unique(r.rows);
  return r;
}

struct LowerBoundInstance {
  QueryInstance query;
  Codebook code;
  CaseRow row;
  std::int64_t predicted_cover_size = 0;
  std::string construction;
  std::vector<std::int64_t> message_bases;  // |code| = product of the bases
  std::vector<Rational> message_exponents;  // base i is at most N^{exponent i}, up to a constant for exponent 0
  bool faithful = false;                    // join equals the codeword set
};

namespace detail {

inline bool join_equals_code(const QueryInstance& q, const Codebook& c) {
  if (c.size > 2'000'000) return false;
  Relation want = codebook_relation(c);
  std::int64_t count = 0;
  bool ok = true;
  generic_join_visit(q, all_vertices(q.n), [&](const Row& r) {
    if (++count > c.size || !std::binary_search(want.rows.begin(), want.rows.end(), r)) {
      ok = false;
      return false;
    }
    return true;
  });
  return ok && count == c.size;
}

inline std::int64_t require_prime_at_most(std::int64_t x, int need, const std::string& what) {
  auto p = largest_prime_at_most(x);
  if (!p || *p < need) throw InputError("no prime q with " + std::to_string(need) + " <= q <= " + std::to_string(x) + " for " + what);
  return *p;
}

}  // namespace detail

/// Code-based hard instance for the row of (g, delta).
inline LowerBoundInstance lower_bound_instance(const Graph& g, std::int64_t N, int delta) {
  if (N < 4) throw InputError("lower-bound instances need N >= 4");
  Decomposition d = decompose(g);
  LowerBoundInstance out;
  out.row = classify_case(g, delta, d);
  const int n = g.n, s = out.row.s;
  const Rational half = make_rational(1, 2);
  switch (out.row.row) {
    case 1: {
      std::int64_t q = detail::require_prime_at_most(N, 2, "the repetition code");
      Codebook c;
      c.n = n;
      c.alphabet_sizes.assign(n, q);
      c.size = q;
      c.designed_distance = n;
      for (std::int64_t i = 0; i < q; ++i) c.symbols.insert(c.symbols.end(), n, static_cast<std::uint32_t>(i));
      out.code = std::move(c);
      out.construction = "repetition";
      out.message_bases = {q};
      out.message_exponents = {Rational(1)};
      break;
    }
    case 2:
    case 3:
    case 5: {
      std::int64_t q = detail::require_prime_at_most(isqrt(N), n, "an RS code of length n");
      out.code = rs_codebook(q, n, delta);
      out.construction = "rs";
      out.message_bases.assign(s, q);
      out.message_exponents.assign(s, half);
      break;
    }
    case 4: {
      DisedgeConstructionParams p{out.row.matched, n - out.row.matched, out.row.matched + 1 - s};
      std::int64_t q = detail::require_prime_at_most(N, p.n_s / 2 + p.n_t, "the duplicated RS code");
      Codebook dup = duplicated_rs_code(q, p);
      // Coordinate 2j, 2j+1 -> endpoints of the j-th matching edge; the rest -> unmatched vertices.
      std::vector<int> vertex_of;
      for (auto [u, v] : d.matching) {
        vertex_of.push_back(u);
        vertex_of.push_back(v);
      }
      std::vector<int> mv = matched_vertices(d.matching);
      for (int v = 0; v < n; ++v) {
        if (!std::binary_search(mv.begin(), mv.end(), v)) vertex_of.push_back(v);
      }
      Codebook c = dup;
      for (int j = 0; j < n; ++j) c.alphabet_sizes[vertex_of[j]] = dup.alphabet_sizes[j];
      for (std::int64_t i = 0; i < dup.size; ++i) {
        for (int j = 0; j < n; ++j) c.symbols[i * n + vertex_of[j]] = dup.symbols[i * n + j];
      }
      out.code = std::move(c);
      out.construction = "duplicated-rs";
      const int k = (p.n_s - p.delta_s) / 2 + 1;
      out.message_bases.assign(k, q);
      out.message_exponents.assign(k, Rational(1));
      break;
    }
    default: {
      std::vector<int> y0, yh, y1;
      for (int v = 0; v < n; ++v) {
        if (sgn(d.y[v]) == 0) {
          y0.push_back(v);
        } else if (d.y[v] == half) {
          yh.push_back(v);
        } else {
          y1.push_back(v);
        }
      }
      std::vector<std::int64_t> moduli(n, 0);
      std::int64_t p = 1, p0max = 1;
      for (int v : y0) {
        do {
          ++p;
        } while (!is_prime(p));
        moduli[v] = p;
        p0max = p;
      }
      auto assign_down = [&](const std::vector<int>& vs, std::int64_t top, std::int64_t floor_excl) {
        std::int64_t cur = top + 1;
        for (int v : vs) {
          do {
            --cur;
          } while (cur > floor_excl && !is_prime(cur));
          if (cur <= floor_excl) throw InputError("N too small for distinct CRT moduli");
          moduli[v] = cur;
        }
        return cur;
      };
      // 0-primes < 1/2-primes <= sqrt(N) < 1-primes <= N / (largest 0-prime)
      const std::int64_t sq = isqrt(N);
      assign_down(yh, sq, p0max);
      assign_down(y1, N / p0max, std::max(sq, p0max));
      out.code = crt_codebook_moduli(moduli, s);
      out.construction = "crt";
      std::vector<std::int64_t> sorted = moduli;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < s; ++i) {
        out.message_bases.push_back(sorted[i]);
        auto v = static_cast<int>(std::find(moduli.begin(), moduli.end(), sorted[i]) - moduli.begin());
        out.message_exponents.push_back(d.y[v] == half ? half : Rational(sgn(d.y[v]) == 0 ? 0 : 1));
      }
      break;
    }
  }
  out.predicted_cover_size = out.code.size;
  out.query = instance_from_codebook(to_hypergraph(g), out.code, N);
  out.faithful = detail::join_equals_code(out.query, out.code);
  return out;
}

/// CRT instance from a fractional packing y: q_v is the smallest unused prime
/// >= ceil(N^{y_v}), and messages range over the product of the s smallest q_v.
struct CrtFromDual {
  QueryInstance query;
  Codebook code;
  std::vector<std::int64_t> moduli;
};

inline CrtFromDual crt_from_dual(const Hypergraph& g, std::int64_t N, const std::vector<Rational>& y, int s) {
  if (static_cast<int>(y.size()) != g.n) throw InputError("need one dual value per vertex");
  if (N < 2) throw InputError("N must be at least 2");
  for (const auto& e : g.edges) {
    Rational sum = 0;
    for (int v : e) sum += y[v];
    if (sum > 1) throw InputError("y violates an edge packing constraint");
  }
  bool all_zero = true;
  for (const auto& v : y) {
    if (sgn(v) < 0) throw InputError("dual values must be non-negative");
    if (sgn(v) != 0) all_zero = false;
  }
  if (all_zero) throw InputError("all-zero dual gives a degenerate code");
  CrtFromDual out;
  std::vector<std::int64_t> used;
  for (int v = 0; v < g.n; ++v) {
    std::int64_t lo = std::max<std::int64_t>(2, static_cast<std::int64_t>(ceil_power(static_cast<std::uint64_t>(N), y[v])));
    std::int64_t p = lo;
    while (!is_prime(p) || std::find(used.begin(), used.end(), p) != used.end()) {
      ++p;
      if (p > 4 * lo) throw InputError("prime search exceeded 4 N^{y_v}");
    }
    used.push_back(p);
    out.moduli.push_back(p);
  }
  out.code = crt_codebook_moduli(out.moduli, s);
  out.query = instance_from_codebook(g, out.code);
  return out;
}

}  // namespace joincover
