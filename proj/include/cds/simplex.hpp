#pragma once

// Two-phase primal simplex over exact rationals with Bland's rule.
//
//   maximize  c . x   subject to  a_i . x (<=|=|>=) b_i,  x >= 0
//
// Duals are read off the final reduced costs of each row's identity column
// (its slack, or its artificial for = and >= rows), so every optimal solution
// comes with y satisfying A^T y >= c and y . b == c . x.

#include <gmp.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cds/error.hpp"
#include "cds/rational.hpp"

namespace cds {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

inline const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::kLessEqual: return "<=";
    case Relation::kEqual: return "=";
    case Relation::kGreaterEqual: return ">=";
  }
  return "?";
}

struct LpTerm {
  std::size_t var;
  Rational coef;
};

struct LpConstraint {
  std::vector<LpTerm> terms;
  Relation relation = Relation::kLessEqual;
  Rational rhs;
};

struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<LpTerm> objective;  // maximized
  std::vector<LpConstraint> constraints;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Rational value;
  std::vector<Rational> primal;
  /// One multiplier per constraint, in the original orientation: >= 0 for
  /// <= rows, <= 0 for >= rows, free for = rows.
  std::vector<Rational> duals;
  std::size_t pivots = 0;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, std::vector<Rational>(cols + 1)), cost_(cols + 1) {}

  Rational& at(std::size_t r, std::size_t c) { return rows_[r][c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
  Rational& rhs(std::size_t r) { return rows_[r][cols_]; }
  const Rational& rhs(std::size_t r) const { return rows_[r][cols_]; }
  std::vector<Rational>& cost() { return cost_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    auto& prow = rows_[r];
    {
      const Rational inv = 1 / prow[c];
      for (auto& e : prow) {
        if (sgn(e) != 0) e *= inv;
      }
    }
    nonzero_.clear();
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (sgn(prow[j]) != 0) nonzero_.push_back(j);
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i], prow, c);
    }
    eliminate(cost_, prow, c);
  }

 private:
  // row -= row[c] * prow, touching only prow's nonzeros.
  void eliminate(std::vector<Rational>& row, const std::vector<Rational>& prow, std::size_t c) {
    if (sgn(row[c]) == 0) return;
    factor_ = row[c];
    for (std::size_t j : nonzero_) {
      mpq_mul(tmp_.get_mpq_t(), factor_.get_mpq_t(), prow[j].get_mpq_t());
      mpq_sub(row[j].get_mpq_t(), row[j].get_mpq_t(), tmp_.get_mpq_t());
    }
  }

  std::size_t cols_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> cost_;  // reduced costs d_j; cost_[cols] = objective value
  std::vector<std::size_t> nonzero_;
  Rational factor_, tmp_;
};

}  // namespace detail

inline LpSolution simplex_solve(const LinearProgram& lp) {
  const std::size_t m = lp.constraints.size();
  const std::size_t n = lp.num_vars;
  for (const auto& t : lp.objective) {
    if (t.var >= n) throw Error("objective references variable out of range");
  }

  // Normalize rows to b >= 0; rows with b == 0 and >= become <= by negation,
  // so they start with a slack in the basis.
  std::vector<int> sign(m, 1);
  std::vector<Relation> rel(m);
  std::size_t extra = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& con = lp.constraints[i];
    rel[i] = con.relation;
    const int s = sgn(con.rhs);
    if (s < 0 || (s == 0 && rel[i] == Relation::kGreaterEqual)) {
      sign[i] = -1;
      if (rel[i] == Relation::kLessEqual) {
        rel[i] = Relation::kGreaterEqual;
      } else if (rel[i] == Relation::kGreaterEqual) {
        rel[i] = Relation::kLessEqual;
      }
    }
    extra += rel[i] == Relation::kGreaterEqual ? 2 : 1;
  }

  const std::size_t cols = n + extra;
  detail::Tableau t(m, cols);
  std::vector<std::size_t> basis(m), identity(m);
  std::vector<bool> artificial(cols, false);
  std::size_t next = n;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& con = lp.constraints[i];
    for (const auto& term : con.terms) {
      if (term.var >= n) throw Error("constraint references variable out of range");
      t.at(i, term.var) += sign[i] * term.coef;
    }
    t.rhs(i) = sign[i] * con.rhs;
    if (rel[i] == Relation::kLessEqual) {
      t.at(i, next) = 1;
      identity[i] = basis[i] = next++;
    } else {
      if (rel[i] == Relation::kGreaterEqual) t.at(i, next++) = -1;
      t.at(i, next) = 1;
      artificial[next] = true;
      identity[i] = basis[i] = next++;
    }
  }

  LpSolution sol;

  // Bland: lowest-index improving column; ties in the ratio test go to the
  // lowest-index basic variable.
  auto run = [&](const std::vector<bool>& banned) -> bool {
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!banned[j] && sgn(t.cost()[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return true;
      std::size_t leave = m;
      Rational best, ratio;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(t.at(i, enter)) <= 0) continue;
        ratio = t.rhs(i) / t.at(i, enter);
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;
      t.pivot(leave, enter);
      basis[leave] = enter;
      ++sol.pivots;
    }
  };

  auto load_costs = [&](const std::vector<Rational>& c) {
    auto& d = t.cost();
    for (std::size_t j = 0; j <= cols; ++j) d[j] = 0;
    for (std::size_t j = 0; j < cols; ++j) d[j] = -c[j];
    for (std::size_t i = 0; i < m; ++i) {
      const Rational& cb = c[basis[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(t.at(i, j)) != 0) d[j] += cb * t.at(i, j);
      }
    }
  };

  // Phase 1: maximize -(sum of artificials).
  bool any_artificial = false;
  for (std::size_t j = 0; j < cols; ++j) any_artificial = any_artificial || artificial[j];
  if (any_artificial) {
    std::vector<Rational> c1(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      if (artificial[j]) c1[j] = -1;
    }
    load_costs(c1);
    run(std::vector<bool>(cols, false));
    if (sgn(t.cost()[cols]) < 0) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible; rows
    // where that fails are redundant and keep their artificial at zero.
    for (std::size_t i = 0; i < m; ++i) {
      if (!artificial[basis[i]]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!artificial[j] && sgn(t.at(i, j)) != 0) {
          t.pivot(i, j);
          basis[i] = j;
          ++sol.pivots;
          break;
        }
      }
    }
  }

  // Phase 2.
  std::vector<Rational> c2(cols);
  for (const auto& term : lp.objective) c2[term.var] += term.coef;
  load_costs(c2);
  if (!run(artificial)) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  sol.status = LpStatus::kOptimal;
  sol.value = t.cost()[cols];
  sol.primal.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) sol.primal[basis[i]] = t.rhs(i);
  }
  sol.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.duals[i] = sign[i] * t.cost()[identity[i]];
  return sol;
}

/// Exact check that x >= 0 satisfies every constraint of lp.
inline bool primal_feasible(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.num_vars) return false;
  for (const auto& v : x) {
    if (sgn(v) < 0) return false;
  }
  Rational lhs;
  for (const auto& c : lp.constraints) {
    lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * x[t.var];
    const int cmp = ::cmp(lhs, c.rhs);
    if ((c.relation == Relation::kLessEqual && cmp > 0) || (c.relation == Relation::kEqual && cmp != 0) ||
        (c.relation == Relation::kGreaterEqual && cmp < 0)) {
      return false;
    }
  }
  return true;
}

inline Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& x) {
  Rational v = 0;
  for (const auto& t : lp.objective) v += t.coef * x.at(t.var);
  return v;
}

/// Solves lp by running the same simplex on its dual
///
///   maximize -b . y   subject to  A^T y >= c,  y oriented per row sense,
///
/// which has one row per primal variable instead of one per constraint. The
/// primal point is read back from the dual's multipliers and checked
/// exactly. Falls back to the primal simplex when the dual is not optimal.
inline LpSolution simplex_solve_dual(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  const std::size_t m = lp.constraints.size();
  LinearProgram d;
  std::vector<std::vector<LpTerm>> rows(n);
  // Row i contributes y_i = sign * (first - second); second only for = rows.
  std::vector<std::size_t> first(m), second(m, SIZE_MAX);
  std::vector<int> sense(m);
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = lp.constraints[i];
    sense[i] = c.relation == Relation::kGreaterEqual ? -1 : 1;
    auto emit = [&](int sg) {
      const Rational f = sg * sense[i];
      for (const auto& t : c.terms) {
        if (t.var >= n) throw Error("constraint references variable out of range");
        rows[t.var].push_back({k, f * t.coef});
      }
      if (sgn(c.rhs) != 0) d.objective.push_back({k, -f * c.rhs});
      return k++;
    };
    first[i] = emit(1);
    if (c.relation == Relation::kEqual) second[i] = emit(-1);
  }
  d.num_vars = k;
  std::vector<Rational> cost(n);
  for (const auto& t : lp.objective) {
    if (t.var >= n) throw Error("objective references variable out of range");
    cost[t.var] += t.coef;
  }
  d.constraints.reserve(n);
  for (std::size_t j = 0; j < n; ++j) d.constraints.push_back({std::move(rows[j]), Relation::kGreaterEqual, cost[j]});

  const LpSolution ds = simplex_solve(d);
  if (ds.status != LpStatus::kOptimal) return simplex_solve(lp);

  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.value = -ds.value;
  sol.pivots = ds.pivots;
  sol.primal.resize(n);
  for (std::size_t j = 0; j < n; ++j) sol.primal[j] = -ds.duals[j];
  sol.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rational y = ds.primal[first[i]];
    if (second[i] != SIZE_MAX) y -= ds.primal[second[i]];
    sol.duals[i] = sense[i] * y;
  }
  if (!primal_feasible(lp, sol.primal) || objective_value(lp, sol.primal) != sol.value) {
    throw Error("dual solve produced an inconsistent primal point");
  }
  return sol;
}

}  // namespace cds
