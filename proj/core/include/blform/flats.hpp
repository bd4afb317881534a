#pragma once

#include <vector>

#include "blform/vector_set.hpp"

namespace blform {

/// A set of indices closed under span: j is a member whenever v_j lies in
/// the span of the members' vectors. Flats are the finite surrogate for the
/// subspace quantifiers in the feasibility conditions: every subspace V
/// induces the flat {j : v_j in V}, and the span of a flat realizes the
/// binding case.
struct Flat {
  std::vector<int> members;  // sorted, 0-based
  int rank = 0;              // dim span of the members' vectors

  bool operator==(const Flat& other) const { return members == other.members; }
};

/// True when every subset of size min(m, N) is independent. For N >= m this
/// is the usual condition that every m of the vectors form a basis; for
/// N < m it degenerates to rank(E) = N.
bool is_generic(const VectorSet& set);

/// First vector on the moment curve (1, t, t^2, ..., t^{m-1}), t = 1, 2, ...,
/// whose addition keeps the set generic. Termination is guaranteed: each
/// hyperplane spanned by m-1 of the vectors meets the curve in at most m-1
/// points. Requires the input to be generic and m >= 2.
RationalVector extend_generic(const VectorSet& set);

/// Smallest flat containing the given indices.
Flat closure(const std::vector<int>& subset, const VectorSet& set);

/// All distinct flats, sorted lexicographically by member list. Found by
/// closing every subset of size <= m, which reaches every flat: a flat of
/// rank r is the closure of any r independent members. Includes the empty
/// flat and the full flat.
std::vector<Flat> enumerate_flats(const VectorSet& set, int size_cap = 16);

}  // namespace blform
