#include "blform/linalg.hpp"

#include <algorithm>
#include <utility>

#include "blform/exceptions.hpp"

namespace blform {

namespace {

void require_same_dimension(const RationalVector& a, const RationalVector& b,
                            const char* what) {
  if (a.size() != b.size()) {
    throw InputError(std::string(what) + ": dimension mismatch");
  }
}

void require_rectangular(const std::vector<RationalVector>& rows) {
  for (const auto& row : rows) {
    if (row.size() != rows[0].size()) {
      throw InputError("matrix rows have differing lengths");
    }
  }
}

}  // namespace

Rational dot(const RationalVector& a, const RationalVector& b) {
  require_same_dimension(a, b, "dot");
  Rational sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

bool is_zero_vector(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

int rank(RationalMatrix matrix) {
  auto& rows = matrix.rows;
  if (rows.empty()) return 0;
  require_rectangular(rows);
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = rows[0].size();

  std::size_t r = 0;
  for (std::size_t c = 0; c < n_cols && r < n_rows; ++c) {
    // Pivot: nonzero entry of largest numerator bit length in this column.
    std::size_t pivot = n_rows;
    std::size_t best_bits = 0;
    for (std::size_t i = r; i < n_rows; ++i) {
      if (rows[i][c] == 0) continue;
      const std::size_t bits = numerator_bit_length(rows[i][c]);
      if (pivot == n_rows || bits > best_bits) {
        pivot = i;
        best_bits = bits;
      }
    }
    if (pivot == n_rows) continue;
    std::swap(rows[r], rows[pivot]);
    for (std::size_t i = r + 1; i < n_rows; ++i) {
      if (rows[i][c] == 0) continue;
      const Rational factor = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < n_cols; ++j) {
        rows[i][j] -= factor * rows[r][j];
      }
    }
    ++r;
  }
  return static_cast<int>(r);
}

int rank_of(const std::vector<RationalVector>& vectors) {
  return rank(RationalMatrix{vectors});
}

bool in_span(const RationalVector& v, const std::vector<RationalVector>& basis_rows) {
  if (basis_rows.empty()) return is_zero_vector(v);
  EchelonBasis basis(basis_rows[0].size());
  for (const auto& row : basis_rows) {
    require_same_dimension(row, basis_rows[0], "in_span");
    basis.insert(row);
  }
  require_same_dimension(v, basis_rows[0], "in_span");
  return basis.contains(v);
}

namespace {

struct ColumnSolve {
  bool dependent = false;
  std::optional<std::vector<Rational>> coords;
};

// Solves sum_i coords[i] * columns[i] = target by elimination on the
// augmented system. dependent reports a rank-deficient column set.
ColumnSolve solve_columns(const std::vector<RationalVector>& columns,
                          const RationalVector& target) {
  const std::size_t n_cols = columns.size();
  const std::size_t dim = target.size();
  for (const auto& col : columns) require_same_dimension(col, target, "solve");

  // augmented[i] = row i of [columns | target]
  std::vector<RationalVector> augmented(dim, RationalVector(n_cols + 1));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t c = 0; c < n_cols; ++c) augmented[i][c] = columns[c][i];
    augmented[i][n_cols] = target[i];
  }

  std::vector<std::size_t> pivot_row_of_col(n_cols, dim);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n_cols; ++c) {
    std::size_t pivot = dim;
    std::size_t best_bits = 0;
    for (std::size_t i = r; i < dim; ++i) {
      if (augmented[i][c] == 0) continue;
      const std::size_t bits = numerator_bit_length(augmented[i][c]);
      if (pivot == dim || bits > best_bits) {
        pivot = i;
        best_bits = bits;
      }
    }
    if (pivot == dim) return {true, std::nullopt};
    std::swap(augmented[r], augmented[pivot]);
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == r || augmented[i][c] == 0) continue;
      const Rational factor = augmented[i][c] / augmented[r][c];
      for (std::size_t j = c; j <= n_cols; ++j) {
        augmented[i][j] -= factor * augmented[r][j];
      }
    }
    pivot_row_of_col[c] = r;
    ++r;
  }
  for (std::size_t i = r; i < dim; ++i) {
    if (augmented[i][n_cols] != 0) return {false, std::nullopt};
  }
  std::vector<Rational> coords(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    const std::size_t row = pivot_row_of_col[c];
    coords[c] = augmented[row][n_cols] / augmented[row][c];
  }
  return {false, coords};
}

}  // namespace

std::vector<Rational> solve_in_basis(const RationalVector& target,
                                     const std::vector<RationalVector>& basis) {
  const std::size_t dim = target.size();
  for (const auto& b : basis) require_same_dimension(b, target, "solve_in_basis");
  if (basis.size() != dim) throw PreconditionError("not a basis");
  ColumnSolve result = solve_columns(basis, target);
  if (result.dependent || !result.coords) throw PreconditionError("not a basis");
  return std::move(*result.coords);
}

std::optional<std::vector<Rational>> coordinates_in_span(
    const RationalVector& target, const std::vector<RationalVector>& vectors) {
  if (vectors.empty()) {
    if (is_zero_vector(target)) return std::vector<Rational>{};
    return std::nullopt;
  }
  ColumnSolve result = solve_columns(vectors, target);
  if (result.dependent) throw PreconditionError("vectors are linearly dependent");
  return result.coords;
}

RationalVector project_orthogonal(const RationalVector& v,
                                  const std::vector<RationalVector>& subspace_basis) {
  if (subspace_basis.empty()) return v;
  for (const auto& b : subspace_basis) require_same_dimension(b, v, "project_orthogonal");

  // Solve the Gram system G c = B v; singular G means a dependent basis.
  const std::size_t r = subspace_basis.size();
  std::vector<RationalVector> gram(r, RationalVector(r));
  RationalVector rhs(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) gram[i][j] = dot(subspace_basis[i], subspace_basis[j]);
    rhs[i] = dot(subspace_basis[i], v);
  }
  // Gram matrix columns as vectors for the shared solver.
  std::vector<RationalVector> columns(r, RationalVector(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) columns[j][i] = gram[i][j];
  }
  ColumnSolve solved = solve_columns(columns, rhs);
  if (solved.dependent || !solved.coords) {
    throw PreconditionError("projection basis is linearly dependent");
  }
  RationalVector result = v;
  for (std::size_t i = 0; i < r; ++i) {
    const Rational& c = (*solved.coords)[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      result[j] -= c * subspace_basis[i][j];
    }
  }
  return result;
}

bool EchelonBasis::insert(RationalVector v) {
  if (v.size() != dimension_) throw InputError("EchelonBasis: dimension mismatch");
  reduce(v);
  std::size_t lead = dimension_;
  for (std::size_t j = 0; j < dimension_; ++j) {
    if (v[j] != 0) {
      lead = j;
      break;
    }
  }
  if (lead == dimension_) return false;
  const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, lead);
  rows_.insert(rows_.begin() + pos, std::move(v));
  return true;
}

bool EchelonBasis::contains(const RationalVector& v) const {
  if (v.size() != dimension_) throw InputError("EchelonBasis: dimension mismatch");
  RationalVector reduced = v;
  reduce(reduced);
  return is_zero_vector(reduced);
}

void EchelonBasis::reduce(RationalVector& v) const {
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t p = pivots_[k];
    if (v[p] == 0) continue;
    const Rational factor = v[p] / rows_[k][p];
    for (std::size_t j = p; j < dimension_; ++j) {
      v[j] -= factor * rows_[k][j];
    }
  }
}

}  // namespace blform
