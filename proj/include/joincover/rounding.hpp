#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "joincover/bounds.hpp"
#include "joincover/errors.hpp"
#include "joincover/graph.hpp"
#include "joincover/rational.hpp"

namespace joincover {

using Rng = std::mt19937_64;

/// Independent stream for one trial of a seeded experiment.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

namespace detail {

template <class T>
bool draw_below(Rng& rng, const T& p) {
  if constexpr (std::is_same_v<T, Rational>) {
    // u = k / 2^53 compared exactly against p
    Rational u(BigInt(std::to_string(rng() >> 11)), BigInt(1));
    u /= Rational(BigInt(1) << 53);
    return u < p;
  } else {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  }
}

template <class T>
bool is_integral01(const T& v) {
  return v == T(0) || v == T(1);
}

}  // namespace detail

/// Pipage rounding: moves mass between two fractional entries at a time so that
/// every marginal is kept and the total changes only at the last fractional entry.
template <class T>
std::vector<int> dependent_round(std::vector<T> x, Rng& rng) {
  for (const auto& v : x) {
    if (v < T(0) || v > T(1)) throw InputError("rounding input must lie in [0, 1]");
  }
  std::vector<std::size_t> frac;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!detail::is_integral01(x[i])) frac.push_back(i);
  }
  while (frac.size() >= 2) {
    std::size_t i = frac[frac.size() - 2], j = frac.back();
    T up = std::min<T>(T(1) - x[i], x[j]);
    T down = std::min<T>(x[i], T(1) - x[j]);
    T p = down / (up + down);
    if (detail::draw_below(rng, p)) {
      x[i] += up;
      x[j] -= up;
    } else {
      x[i] -= down;
      x[j] += down;
    }
    if (detail::is_integral01(x[j])) frac.pop_back();
    if (detail::is_integral01(x[i])) frac.erase(frac.end() - (frac.back() == i ? 1 : 2));
  }
  std::vector<int> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (detail::is_integral01(x[i])) {
      out[i] = x[i] == T(1) ? 1 : 0;
    } else {
      out[i] = detail::draw_below(rng, x[i]) ? 1 : 0;
    }
  }
  return out;
}

struct RoundingConfig {
  Rational c = make_rational(648, 125);  // 2c = 10.368
  int max_retries = 1000;
  std::uint64_t seed = 0;

  double c1() const { return (1.0 - std::exp(-1.0)) * to_double(c); }
};

struct RoundingOutcome {
  std::vector<Rational> X;
  std::vector<int> Z;
  Rational cost;
  int covered = 0;
  int forced = 0;
};

namespace detail {

inline std::vector<int> coverage(const Hypergraph& g, const std::vector<Rational>& X) {
  std::vector<Rational> load(g.n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    for (int v : g.edges[e]) load[v] += X[e];
  }
  std::vector<int> Z(g.n);
  for (int v = 0; v < g.n; ++v) Z[v] = load[v] >= 1 ? 1 : 0;
  return Z;
}

inline RoundingOutcome finish(const Hypergraph& g, std::vector<Rational> X, int forced) {
  RoundingOutcome out;
  out.Z = coverage(g, X);
  out.covered = std::accumulate(out.Z.begin(), out.Z.end(), 0);
  for (const auto& v : X) out.cost += v;
  out.X = std::move(X);
  out.forced = forced;
  return out;
}

}  // namespace detail

/// X_e = max(Xt_e, min(c x_e, 1)) with Xt the dependent rounding of min(c x, 1).
inline RoundingOutcome algorithm_A(const Hypergraph& g, const std::vector<Rational>& x, const Rational& c, Rng& rng) {
  if (x.size() != g.edges.size()) throw InputError("need one x value per edge");
  std::vector<Rational> scaled(x.size());
  for (std::size_t e = 0; e < x.size(); ++e) {
    if (sgn(x[e]) < 0) throw InputError("x must be non-negative");
    scaled[e] = std::min<Rational>(c * x[e], Rational(1));
  }
  std::vector<int> rounded = dependent_round(scaled, rng);
  std::vector<Rational> X(x.size());
  for (std::size_t e = 0; e < x.size(); ++e) X[e] = rounded[e] ? Rational(1) : scaled[e];
  return detail::finish(g, std::move(X), 0);
}

/// Variant that first selects whole edges meeting at least eps * s' of the
/// low-z vertices V_2 = {v : z_v < 1/c}, then rounds the rest as above.
inline RoundingOutcome algorithm_A_forced(const Hypergraph& g, const std::vector<Rational>& x,
                                          const std::vector<Rational>& z, const Rational& c, const Rational& eps,
                                          Rng& rng) {
  if (x.size() != g.edges.size() || static_cast<int>(z.size()) != g.n) throw InputError("size mismatch");
  std::vector<char> low(g.n, 0);
  Rational s_prime = 0;
  for (int v = 0; v < g.n; ++v) {
    if (z[v] * c < 1) {
      low[v] = 1;
      s_prime += z[v];
    }
  }
  std::vector<char> forced(g.edges.size(), 0);
  int iterations = 0;
  for (bool again = true; again && sgn(s_prime) > 0;) {
    again = false;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (forced[e]) continue;
      int meet = 0;
      for (int v : g.edges[e]) meet += low[v];
      if (meet == 0 || meet < eps * s_prime) continue;
      forced[e] = 1;
      for (int v : g.edges[e]) low[v] = 0;
      s_prime -= meet;
      ++iterations;
      again = true;
      break;
    }
  }
  std::vector<Rational> scaled(x.size());
  std::vector<std::size_t> free_edges;
  for (std::size_t e = 0; e < x.size(); ++e) {
    scaled[e] = std::min<Rational>(c * x[e], Rational(1));
    if (!forced[e]) free_edges.push_back(e);
  }
  std::vector<Rational> sub;
  for (auto e : free_edges) sub.push_back(scaled[e]);
  std::vector<int> rounded = dependent_round(sub, rng);
  std::vector<Rational> X(x.size(), Rational(1));
  for (std::size_t i = 0; i < free_edges.size(); ++i) {
    X[free_edges[i]] = rounded[i] ? Rational(1) : scaled[free_edges[i]];
  }
  return detail::finish(g, std::move(X), iterations);
}

class RoundingFailed : public std::runtime_error {
 public:
  RoundingFailed(const std::string& what, int best) : std::runtime_error(what), best_coverage(best) {}
  int best_coverage;
};

struct RoundedCover {
  RoundingOutcome outcome;
  std::vector<int> edges;  // support of X
  int trials = 0;
};

/// Repeats the rounding of the fractional optimum of lp_ub until s vertices are covered.
inline RoundedCover rounded_cover(const Hypergraph& g, int s, const RoundingConfig& cfg) {
  RoundedCover out;
  if (s == 0) {
    out.outcome.X.assign(g.edges.size(), Rational(0));
    out.outcome.Z.assign(g.n, 0);
    return out;
  }
  BoundReport lp = lp_ub(g, s);
  std::vector<Rational> x;
  for (std::size_t e = 0; e < g.edges.size(); ++e) x.push_back(lp.value("x" + std::to_string(e)));
  int best = -1;
  for (int trial = 0; trial < cfg.max_retries; ++trial) {
    Rng rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(trial));
    RoundingOutcome r = algorithm_A(g, x, cfg.c, rng);
    best = std::max(best, r.covered);
    if (r.covered >= s) {
      out.trials = trial + 1;
      for (std::size_t e = 0; e < r.X.size(); ++e) {
        if (sgn(r.X[e]) > 0) out.edges.push_back(static_cast<int>(e));
      }
      out.outcome = std::move(r);
      return out;
    }
  }
  throw RoundingFailed("rounding did not cover s vertices within the retry budget", best);
}

/// lp_ub_star / lp_lb.
inline Rational gap_ratio(const Hypergraph& g, int s) {
  Rational lb = lp_lb(g, s).objective;
  if (sgn(lb) == 0) throw InputError("lp_lb is zero");
  return lp_ub_star(g, s).objective / lb;
}

struct GapInstanceParams {
  int n = 0;
  double epsilon = 0.3;
  double C = 13.0;

  int d() const { return static_cast<int>(std::ceil(C * std::log(static_cast<double>(n)) / (epsilon * epsilon))); }
  int d_private() const { return static_cast<int>(std::floor((1.0 - std::exp(-1.0)) * d())); }
  int k() const { return static_cast<int>(std::lround((2.0 - std::exp(-1.0)) * n)); }
};

/// Base edges over [0, n) plus d' private vertices per edge, numbered n + i*d' + j.
struct GapInstance {
  GapInstanceParams params;
  Hypergraph graph;
  std::vector<std::vector<int>> base_edges;
  int resamples = 0;
};

inline bool gap_property_a(const std::vector<std::vector<int>>& base, const GapInstanceParams& p) {
  for (const auto& e : base) {
    if (static_cast<double>(e.size()) > (1.0 + p.epsilon) * p.d()) return false;
  }
  return true;
}

inline bool gap_property_b(const std::vector<std::vector<int>>& base, const GapInstanceParams& p) {
  std::vector<int> deg(p.n, 0);
  for (const auto& e : base) {
    for (int v : e) ++deg[v];
  }
  for (int v = 0; v < p.n; ++v) {
    if (static_cast<double>(deg[v]) < (1.0 - p.epsilon) * p.d()) return false;
  }
  return true;
}

inline constexpr int kGapResampleBudget = 100;

inline GapInstance gap_instance(const GapInstanceParams& p, Rng& rng) {
  if (p.n < 2 || p.epsilon <= 0 || p.C <= 0) throw InputError("gap instance needs n >= 2 and positive eps, C");
  const int d = p.d();
  if (d >= p.n) throw InputError("gap instance needs d < n; increase n or eps");
  GapInstance out;
  out.params = p;
  std::bernoulli_distribution coin(static_cast<double>(d) / p.n);
  for (int attempt = 0; attempt < kGapResampleBudget; ++attempt) {
    std::vector<std::vector<int>> base(p.n);
    for (auto& e : base) {
      for (int v = 0; v < p.n; ++v) {
        if (coin(rng)) e.push_back(v);
      }
    }
    bool nonempty = std::all_of(base.begin(), base.end(), [](const auto& e) { return !e.empty(); });
    if (!nonempty || !gap_property_a(base, p) || !gap_property_b(base, p)) continue;
    out.resamples = attempt;
    out.base_edges = base;
    const int dp = p.d_private();
    std::vector<std::vector<int>> edges = base;
    for (int i = 0; i < p.n; ++i) {
      for (int j = 0; j < dp; ++j) edges[i].push_back(p.n + i * dp + j);
    }
    out.graph = Hypergraph{p.n + p.n * dp, std::move(edges)};
    return out;
  }
  throw InputError("gap instance resampling budget exhausted");
}

/// Union size of floor(n/d) random base edges, against (1 - 1/e + eps) n.
inline bool gap_property_c_sample(const GapInstance& gi, Rng& rng) {
  const auto& p = gi.params;
  const int m = p.n / p.d();
  std::vector<int> idx(p.n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<char> in(p.n, 0);
  for (int i = 0; i < m; ++i) {
    for (int v : gi.base_edges[idx[i]]) in[v] = 1;
  }
  const int cover = std::accumulate(in.begin(), in.end(), 0);
  return cover <= (1.0 - std::exp(-1.0) + p.epsilon) * p.n;
}

/// Certified bounds for the gap instance at s = k:
/// upper: lp_lb <= t*beta for the uniform primal x_e = beta;
/// lower: lp_ub_star >= edges forced by private vertices, refined when two suffice.
struct GapCertificate {
  Rational lp_lb_upper;
  Rational lp_ub_star_lower;
  Rational ratio_lower;
  int k = 0;
};

inline GapCertificate certify_gap(const GapInstance& gi) {
  const auto& p = gi.params;
  const int t = p.n, dp = p.d_private(), k = p.k();
  GapCertificate out;
  out.k = k;
  if (k > gi.graph.n) throw InputError("k exceeds the vertex count");
  std::vector<std::int64_t> deg(t, 0);
  for (const auto& e : gi.base_edges) {
    for (int v : e) ++deg[v];
  }
  // f(beta) = sum_v min(1, D_v beta) + t d' beta is piecewise linear and increasing.
  std::vector<std::int64_t> sorted = deg;
  std::sort(sorted.begin(), sorted.end());
  auto f = [&](const Rational& beta) {
    Rational total = Rational(static_cast<long>(t) * dp) * beta;
    for (auto dv : sorted) total += std::min<Rational>(Rational(1), Rational(static_cast<long>(dv)) * beta);
    return total;
  };
  // Walk breakpoints 1/D_v from the largest degree down; solve the linear piece containing k.
  Rational beta;
  bool found = false;
  std::vector<Rational> breaks;
  for (auto dv : sorted) breaks.push_back(Rational(1) / Rational(static_cast<long>(dv)));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  Rational lo = 0;
  for (std::size_t i = 0; i <= breaks.size() && !found; ++i) {
    Rational hi = i < breaks.size() ? breaks[i] : Rational(1);
    Rational flo = f(lo), fhi = f(hi);
    if (fhi >= k) {
      beta = lo + (Rational(k) - flo) * (hi - lo) / (fhi - flo);
      found = true;
    }
    lo = hi;
  }
  if (!found) throw std::logic_error("uniform primal cannot reach k");
  out.lp_lb_upper = beta * t;

  const int a_star = static_cast<int>((k - t + dp - 1) / dp);
  if (a_star != 2) {
    out.lp_ub_star_lower = std::max(a_star, 1);
  } else {
    const int words = (t + 63) / 64;
    std::vector<std::vector<std::uint64_t>> bits(t, std::vector<std::uint64_t>(words, 0));
    for (int i = 0; i < t; ++i) {
      for (int v : gi.base_edges[i]) bits[i][v / 64] |= std::uint64_t{1} << (v % 64);
    }
    Rational best = 3;
    for (int i = 0; i < t; ++i) {
      for (int j = i + 1; j < t; ++j) {
        int uni = 0;
        for (int w = 0; w < words; ++w) uni += std::popcount(bits[i][w] | bits[j][w]);
        const int missing = k - 2 * dp - uni;
        const int rest = t - uni;
        Rational cand = 2;
        if (missing > 0) {
          if (rest < missing) continue;  // this pair cannot reach k with only these two integral edges
          cand += Rational(missing) / Rational(rest);
        }
        best = std::min(best, cand);
      }
    }
    out.lp_ub_star_lower = best;
  }
  out.ratio_lower = out.lp_ub_star_lower / out.lp_lb_upper;
  return out;
}

}  // namespace joincover
