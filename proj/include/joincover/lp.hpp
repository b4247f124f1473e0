#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "joincover/errors.hpp"
#include "joincover/rational.hpp"

namespace joincover {

enum class Sense { Minimize, Maximize };
enum class Relop { LessEq, GreaterEq, Equal };

struct LinearConstraint {
  std::vector<std::pair<int, Rational>> terms;
  Relop op = Relop::LessEq;
  Rational rhs;
};

/// Linear program over variables that are non-negative unless flagged free.
struct LinearProgram {
  int num_vars = 0;
  Sense sense = Sense::Minimize;
  std::vector<Rational> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<bool> free;

  int add_var(const Rational& cost = 0, bool is_free = false) {
    objective.push_back(cost);
    free.push_back(is_free);
    return num_vars++;
  }
  void add_constraint(std::vector<std::pair<int, Rational>> terms, Relop op, Rational rhs) {
    constraints.push_back({std::move(terms), op, std::move(rhs)});
  }
};

/// Optimal basic solution plus one dual value per constraint, signed so that
/// sum(rhs_i * duals_i) equals the objective.
struct LpSolution {
  Rational objective;
  std::vector<Rational> x;
  std::vector<Rational> duals;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : t_(rows, std::vector<Rational>(cols + 1)), basis_(rows), obj_(cols + 1) {}

  std::vector<Rational>& row(std::size_t i) { return t_[i]; }
  std::vector<Rational>& obj() { return obj_; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return obj_.size() - 1; }
  Rational& rhs(std::size_t i) { return t_[i].back(); }

  /// Loads a cost vector and prices out the current basis.
  void set_costs(const std::vector<Rational>& c) {
    for (std::size_t j = 0; j < cols(); ++j) obj_[j] = c[j];
    obj_.back() = 0;
    for (std::size_t i = 0; i < rows(); ++i) {
      const Rational& cb = c[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols(); ++j) {
        if (sgn(t_[i][j]) != 0) obj_[j] -= cb * t_[i][j];
      }
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    Rational inv = 1 / t_[pr][pc];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= cols(); ++j) {
      if (sgn(t_[pr][j]) != 0) {
        t_[pr][j] *= inv;
        nz.push_back(j);
      }
    }
    auto eliminate = [&](std::vector<Rational>& r) {
      if (sgn(r[pc]) == 0) return;
      Rational f = r[pc];
      for (std::size_t j : nz) r[j] -= f * t_[pr][j];
    };
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i != pr) eliminate(t_[i]);
    }
    eliminate(obj_);
    basis_[pr] = pc;
  }

  /// Bland's rule simplex on the loaded costs. Returns false when unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols();
      for (std::size_t j = 0; j < cols(); ++j) {
        if (allowed[j] && sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols()) return true;
      std::size_t leave = rows();
      Rational best;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (sgn(t_[i][enter]) <= 0) continue;
        Rational ratio = t_[i].back() / t_[i][enter];
        if (leave == rows() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::vector<std::vector<Rational>> t_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> obj_;
};

}  // namespace detail

/// Exact two-phase primal simplex with Bland's anti-cycling rule.
inline LpSolution solve_lp(const LinearProgram& lp) {
  if (static_cast<int>(lp.objective.size()) != lp.num_vars) throw InputError("objective size mismatch");
  const std::size_t m = lp.constraints.size();
  std::vector<std::size_t> plus(lp.num_vars), minus(lp.num_vars, SIZE_MAX);
  std::size_t ncols = 0;
  for (int j = 0; j < lp.num_vars; ++j) {
    plus[j] = ncols++;
    if (j < static_cast<int>(lp.free.size()) && lp.free[j]) minus[j] = ncols++;
  }
  std::vector<int> flip(m, 1);
  std::vector<Relop> ops(m);
  for (std::size_t i = 0; i < m; ++i) {
    ops[i] = lp.constraints[i].op;
    if (sgn(lp.constraints[i].rhs) < 0) {
      flip[i] = -1;
      if (ops[i] == Relop::LessEq) {
        ops[i] = Relop::GreaterEq;
      } else if (ops[i] == Relop::GreaterEq) {
        ops[i] = Relop::LessEq;
      }
    }
  }
  std::vector<std::size_t> slack(m, SIZE_MAX), artificial(m, SIZE_MAX);
  for (std::size_t i = 0; i < m; ++i) {
    if (ops[i] != Relop::Equal) slack[i] = ncols++;
  }
  std::size_t first_artificial = ncols;
  for (std::size_t i = 0; i < m; ++i) {
    if (ops[i] != Relop::LessEq) artificial[i] = ncols++;
  }

  detail::Tableau tab(m, ncols);
  std::vector<std::size_t> init_col(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = tab.row(i);
    for (const auto& [var, coef] : lp.constraints[i].terms) {
      if (var < 0 || var >= lp.num_vars) throw InputError("constraint references unknown variable");
      Rational c = coef * flip[i];
      row[plus[var]] += c;
      if (minus[var] != SIZE_MAX) row[minus[var]] -= c;
    }
    row.back() = lp.constraints[i].rhs * flip[i];
    if (ops[i] == Relop::LessEq) {
      row[slack[i]] = 1;
      tab.basis()[i] = slack[i];
      init_col[i] = slack[i];
    } else {
      if (ops[i] == Relop::GreaterEq) row[slack[i]] = -1;
      row[artificial[i]] = 1;
      tab.basis()[i] = artificial[i];
      init_col[i] = artificial[i];
    }
  }

  std::vector<bool> allowed(ncols, true);
  if (first_artificial < ncols) {
    std::vector<Rational> phase1(ncols);
    for (std::size_t j = first_artificial; j < ncols; ++j) phase1[j] = 1;
    tab.set_costs(phase1);
    tab.optimize(allowed);
    if (sgn(tab.obj().back()) != 0) throw LpInfeasible("linear program is infeasible");
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < first_artificial) continue;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (sgn(tab.row(i)[j]) != 0) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = first_artificial; j < ncols; ++j) allowed[j] = false;
  }

  std::vector<Rational> cost(ncols);
  const int dir = lp.sense == Sense::Minimize ? 1 : -1;
  for (int j = 0; j < lp.num_vars; ++j) {
    cost[plus[j]] = lp.objective[j] * dir;
    if (minus[j] != SIZE_MAX) cost[minus[j]] = -lp.objective[j] * dir;
  }
  tab.set_costs(cost);
  if (!tab.optimize(allowed)) throw LpUnbounded("linear program is unbounded");

  std::vector<Rational> value(ncols);
  for (std::size_t i = 0; i < m; ++i) value[tab.basis()[i]] = tab.rhs(i);
  LpSolution sol;
  sol.x.resize(lp.num_vars);
  for (int j = 0; j < lp.num_vars; ++j) {
    sol.x[j] = value[plus[j]];
    if (minus[j] != SIZE_MAX) sol.x[j] -= value[minus[j]];
  }
  sol.objective = 0;
  for (int j = 0; j < lp.num_vars; ++j) sol.objective += lp.objective[j] * sol.x[j];
  sol.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rational y = 0;
    for (std::size_t r = 0; r < m; ++r) {
      const Rational& cb = cost[tab.basis()[r]];
      if (sgn(cb) != 0) y += cb * tab.row(r)[init_col[i]];
    }
    sol.duals[i] = y * flip[i] * dir;
  }
  return sol;
}

}  // namespace joincover
