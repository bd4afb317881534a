#pragma once

#include <optional>
#include <vector>

#include "blform/rational.hpp"

namespace blform {

using RationalVector = std::vector<Rational>;

/// Dense matrix of exact rationals, stored row-major. Rows may be empty only
/// when the matrix has no rows at all.
struct RationalMatrix {
  std::vector<RationalVector> rows;

  std::size_t row_count() const { return rows.size(); }
  std::size_t col_count() const { return rows.empty() ? 0 : rows[0].size(); }
};

Rational dot(const RationalVector& a, const RationalVector& b);

bool is_zero_vector(const RationalVector& v);

/// Exact rank via fraction-preserving Gaussian elimination. Within each
/// column the pivot is the entry of largest numerator bit length.
int rank(RationalMatrix matrix);

int rank_of(const std::vector<RationalVector>& vectors);

/// Membership of v in the row space of `basis_rows`. The rows need not be
/// independent. The zero vector lies in every span, including span{}.
bool in_span(const RationalVector& v, const std::vector<RationalVector>& basis_rows);

/// Coordinates of `target` in a full basis of Q^m.
/// Throws PreconditionError("not a basis") when the set is not m independent
/// vectors, InputError on dimension mismatch.
std::vector<Rational> solve_in_basis(const RationalVector& target,
                                     const std::vector<RationalVector>& basis);

/// Coordinates of `target` as a combination of `vectors` (independent, but
/// not necessarily spanning). Returns nullopt when target is outside the
/// span. Throws PreconditionError when the vectors are dependent.
std::optional<std::vector<Rational>> coordinates_in_span(
    const RationalVector& target, const std::vector<RationalVector>& vectors);

/// v minus its orthogonal projection onto span(subspace_basis). The basis
/// must be independent; an empty basis projects onto {0}, returning v.
RationalVector project_orthogonal(const RationalVector& v,
                                  const std::vector<RationalVector>& subspace_basis);

/// Incremental row-space accumulator in echelon form. Used for closures,
/// genericity tests, and active-set enumeration, where vectors arrive one at
/// a time and only membership/rank questions are asked.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t dimension) : dimension_(dimension) {}

  /// Inserts a vector; returns true when the rank grew.
  bool insert(RationalVector v);

  bool contains(const RationalVector& v) const;

  int rank() const { return static_cast<int>(rows_.size()); }
  std::size_t dimension() const { return dimension_; }

 private:
  // Reduces v against the stored rows; afterwards v is zero at every stored
  // pivot column.
  void reduce(RationalVector& v) const;

  std::size_t dimension_;
  std::vector<RationalVector> rows_;   // kept sorted by pivot column
  std::vector<std::size_t> pivots_;
};

}  // namespace blform
