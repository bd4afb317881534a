#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blform/feasibility.hpp"

namespace blform {

/// One linear row a . z >= rhs over the 2N variables z = (x, mu) with
/// x_j = 1/p_j and mu_j = lambda_j / k. `trivial` marks rows with all-zero
/// coefficients and rhs <= 0 (the full-flat rows), which constrain nothing.
/// `scaling_parallel` marks rows proportional to the scaling equality; on
/// the scaling hyperplane their slack is identically zero, so the interior
/// point objective skips them.
struct ConstraintRow {
  std::string id;
  std::string source;                      // scaling | subspace | lambda | integrability | box | slice
  std::optional<std::vector<int>> flat;    // 0-based members when flat-derived
  std::optional<int> index;                // coordinate for box/slice rows
  std::vector<Rational> coeffs;
  Rational rhs;
  bool trivial = false;
  bool scaling_parallel = false;
};

/// The necessity-condition polytope in H-representation. Row layout:
/// scaling as a +/- pair, then per flat (lexicographic) the non-strict
/// subspace row and the lambda row, then integrability, then the box rows.
/// Row count: 2*#flats + 2N + 3.
struct ConstraintSystem {
  int n = 0;  // N
  int m = 0;
  std::vector<ConstraintRow> rows;

  int dimension() const { return 2 * n; }
};

ConstraintSystem build_system(const VectorSet& set, int flat_cap = 16);

/// Appends mu_j = 0 for every j (as +/- row pairs), restricting to the
/// weightless slice.
void append_lambda_zero_slice(ConstraintSystem& system);

/// Exact point-in-polytope test. Point dimension must be 2N.
struct SystemCheck {
  bool satisfies_all = false;
  std::vector<std::string> violated_rows;
};

SystemCheck feasible(const ConstraintSystem& system, const std::vector<Rational>& point);

/// The point z = (1/p, lambda/k) of an index vector, for cross-checks
/// against the feasibility module.
std::vector<Rational> index_point(const VectorSet& set, const IndexVector& ix);

struct Vertex {
  std::vector<Rational> coordinates;
  std::vector<std::string> tight_rows;  // every row active at the vertex
};

/// All vertices by exhaustive enumeration of independent active sets,
/// deduplicated and sorted by coordinates. Throws InputError when the
/// dimension 2N exceeds dim_cap (default 12); the LP-based interior point
/// remains available above the cap.
std::vector<Vertex> enumerate_vertices(const ConstraintSystem& system, int dim_cap = 12);

/// Exact LP maximizing the minimum slack over non-trivial, non-parallel
/// inequality rows within the scaling hyperplane. found means positive
/// optimal slack; otherwise the polytope has empty relative interior (the
/// maximizer and its slack are still reported). Slacks are re-evaluated
/// against every row after the solve; a mismatch raises InternalError.
struct InteriorPoint {
  bool found = false;
  std::vector<Rational> point;
  Rational min_slack;
};

InteriorPoint chebyshev_like_interior_point(const ConstraintSystem& system);

}  // namespace blform
