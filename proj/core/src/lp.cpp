#include "blform/lp.hpp"

#include <string>
#include <vector>

#include "blform/exceptions.hpp"

namespace blform {

namespace {

// Dense exact simplex tableau. Columns: the split free variables first
// (x_j = col 2j - col 2j+1), then one slack or surplus column per inequality
// row, then artificials. The phase-1 and phase-2 reduced-cost rows are
// carried together so the phase switch is just a change of pivot row.
struct Tableau {
  int cols = 0;
  std::vector<std::vector<Rational>> rows;  // constraint rows, coeffs only
  std::vector<Rational> rhs;
  std::vector<int> basis;
  std::vector<Rational> phase1;  // reduced costs, minimization
  std::vector<Rational> phase2;
  Rational phase1_rhs;  // negated objective values
  Rational phase2_rhs;
  int artificial_start = 0;  // columns >= this are artificial

  void pivot(int r, int e) {
    const Rational piv = rows[r][e];
    if (piv == 0) throw InternalError("pivot on a zero element");
    for (int j = 0; j < cols; ++j) rows[r][j] /= piv;
    rhs[r] /= piv;
    auto eliminate = [&](std::vector<Rational>& row, Rational& row_rhs) {
      const Rational factor = row[e];
      if (factor == 0) return;
      for (int j = 0; j < cols; ++j) row[j] -= factor * rows[r][j];
      row_rhs -= factor * rhs[r];
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) != r) eliminate(rows[i], rhs[i]);
    }
    eliminate(phase1, phase1_rhs);
    eliminate(phase2, phase2_rhs);
    basis[r] = e;
  }

  // Bland's rule: entering = lowest column with negative reduced cost;
  // leaving = lowest basic variable among the minimum-ratio rows. Returns
  // Optimal or Unbounded.
  LpStatus run(const std::vector<Rational>& costs, bool allow_artificial) {
    const std::vector<Rational>& reduced = costs;
    while (true) {
      int entering = -1;
      for (int j = 0; j < cols; ++j) {
        if (!allow_artificial && j >= artificial_start) break;
        if (reduced[j] < 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LpStatus::Optimal;

      int leaving = -1;
      Rational best_ratio;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][entering] <= 0) continue;
        Rational ratio = rhs[i] / rows[i][entering];
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leaving])) {
          leaving = static_cast<int>(i);
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return LpStatus::Unbounded;
      pivot(leaving, entering);
    }
  }
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  const int n = problem.variable_count;
  if (n < 0) throw InputError("negative variable count");
  if (static_cast<int>(problem.objective.size()) != n) {
    throw InputError("objective has " + std::to_string(problem.objective.size()) +
                     " entries, expected " + std::to_string(n));
  }
  for (const LpRow& row : problem.rows) {
    if (static_cast<int>(row.coeffs.size()) != n) {
      throw InputError("constraint row has " + std::to_string(row.coeffs.size()) +
                       " entries, expected " + std::to_string(n));
    }
  }

  const int row_count = static_cast<int>(problem.rows.size());
  int slack_count = 0;
  int artificial_count = 0;
  for (const LpRow& row : problem.rows) {
    // After sign normalization, <= rows take a slack, >= rows a surplus plus
    // an artificial, = rows an artificial.
    LpRelation rel = row.relation;
    if (row.rhs < 0 && rel != LpRelation::Equal) {
      rel = rel == LpRelation::LessEqual ? LpRelation::GreaterEqual : LpRelation::LessEqual;
    }
    if (rel != LpRelation::Equal) ++slack_count;
    if (rel != LpRelation::LessEqual) ++artificial_count;
  }

  Tableau t;
  t.artificial_start = 2 * n + slack_count;
  t.cols = t.artificial_start + artificial_count;
  t.rows.assign(row_count, std::vector<Rational>(t.cols, Rational(0)));
  t.rhs.assign(row_count, Rational(0));
  t.basis.assign(row_count, -1);
  t.phase1.assign(t.cols, Rational(0));
  t.phase2.assign(t.cols, Rational(0));

  int next_slack = 2 * n;
  int next_artificial = t.artificial_start;
  for (int i = 0; i < row_count; ++i) {
    const LpRow& row = problem.rows[i];
    const bool flip = row.rhs < 0;
    LpRelation rel = row.relation;
    if (flip && rel != LpRelation::Equal) {
      rel = rel == LpRelation::LessEqual ? LpRelation::GreaterEqual : LpRelation::LessEqual;
    }
    for (int j = 0; j < n; ++j) {
      Rational c = flip ? -row.coeffs[j] : row.coeffs[j];
      t.rows[i][2 * j] = c;
      t.rows[i][2 * j + 1] = -c;
    }
    t.rhs[i] = flip ? -row.rhs : row.rhs;
    if (rel == LpRelation::LessEqual) {
      t.rows[i][next_slack] = 1;
      t.basis[i] = next_slack++;
    } else if (rel == LpRelation::GreaterEqual) {
      t.rows[i][next_slack++] = -1;
      t.rows[i][next_artificial] = 1;
      t.basis[i] = next_artificial++;
    } else {
      t.rows[i][next_artificial] = 1;
      t.basis[i] = next_artificial++;
    }
  }

  // Phase-2 costs: minimize -objective for a maximization problem.
  for (int j = 0; j < n; ++j) {
    Rational c = problem.maximize ? -problem.objective[j] : problem.objective[j];
    t.phase2[2 * j] = c;
    t.phase2[2 * j + 1] = -c;
  }
  // Phase-1 costs: unit cost per artificial, then cancel the reduced costs
  // of the starting basis.
  for (int j = t.artificial_start; j < t.cols; ++j) t.phase1[j] = 1;
  for (int i = 0; i < row_count; ++i) {
    if (t.basis[i] < t.artificial_start) continue;
    for (int j = 0; j < t.cols; ++j) t.phase1[j] -= t.rows[i][j];
    t.phase1_rhs -= t.rhs[i];
  }

  LpSolution solution;
  if (artificial_count > 0) {
    if (t.run(t.phase1, true) != LpStatus::Optimal) {
      throw InternalError("phase-1 objective is bounded by zero yet reported unbounded");
    }
    if (t.phase1_rhs != 0) {  // minimum of the artificial sum is -phase1_rhs
      solution.status = LpStatus::Infeasible;
      return solution;
    }
    // Drive any zero-valued artificial out of the basis; a row with no
    // non-artificial entry left is redundant and dropped.
    for (int i = static_cast<int>(t.rows.size()) - 1; i >= 0; --i) {
      if (t.basis[i] < t.artificial_start) continue;
      int entering = -1;
      for (int j = 0; j < t.artificial_start; ++j) {
        if (t.rows[i][j] != 0) {
          entering = j;
          break;
        }
      }
      if (entering >= 0) {
        t.pivot(i, entering);
      } else {
        t.rows.erase(t.rows.begin() + i);
        t.rhs.erase(t.rhs.begin() + i);
        t.basis.erase(t.basis.begin() + i);
      }
    }
  }

  const LpStatus status = t.run(t.phase2, false);
  if (status == LpStatus::Unbounded) {
    solution.status = LpStatus::Unbounded;
    return solution;
  }

  std::vector<Rational> column_value(t.cols, Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) column_value[t.basis[i]] = t.rhs[i];
  solution.values.reserve(n);
  for (int j = 0; j < n; ++j) {
    solution.values.push_back(column_value[2 * j] - column_value[2 * j + 1]);
  }
  solution.objective_value = 0;
  for (int j = 0; j < n; ++j) {
    solution.objective_value += problem.objective[j] * solution.values[j];
  }
  solution.status = LpStatus::Optimal;
  return solution;
}

}  // namespace blform
