#pragma once

#include <vector>

#include "blform/rational.hpp"

namespace blform {

enum class LpStatus { Optimal, Infeasible, Unbounded };

enum class LpRelation { Equal, GreaterEqual, LessEqual };

struct LpRow {
  std::vector<Rational> coeffs;
  LpRelation relation = LpRelation::GreaterEqual;
  Rational rhs;
};

/// maximize (or minimize) objective . x subject to the rows; variables are
/// free (unbounded in both directions).
struct LpProblem {
  int variable_count = 0;
  std::vector<LpRow> rows;
  std::vector<Rational> objective;
  bool maximize = true;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational objective_value;
  std::vector<Rational> values;
};

/// Exact two-phase primal simplex with Bland's rule (guaranteed
/// termination). Free variables are split internally; all arithmetic is
/// rational, so verdicts derived from the solution are exact.
LpSolution solve_lp(const LpProblem& problem);

}  // namespace blform
