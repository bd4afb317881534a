#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blform/flats.hpp"
#include "blform/vector_set.hpp"

namespace blform {

/// Exponent data for the form: reciprocals 1/p_j (p = infinity is 1/p = 0),
/// power weights lambda_j, and the block dimension k >= 1 shared with the
/// vector set.
struct IndexVector {
  std::vector<Rational> p_inv;
  std::vector<Rational> lambda;
  int k = 1;
};

enum class Relation { Equal, Greater, GreaterEqual, Less, LessEqual };

std::string relation_string(Relation relation);

/// One failed constraint, with the exact offending value. `subset` carries
/// the flat or index subset the constraint quantified over; `index` the
/// coordinate for per-index constraints. `message`-only violations (no
/// numeric content) cover structural failures such as genericity.
struct Violation {
  std::string constraint;
  std::optional<std::vector<int>> subset;  // 0-based members
  std::optional<int> index;                // 0-based coordinate
  std::optional<Rational> lhs;
  Relation relation = Relation::GreaterEqual;
  std::optional<Rational> rhs;
  std::string message;
};

enum class FeasibilityStatus { SufficientInterior, NecessaryOnly, Infeasible };

std::string status_string(FeasibilityStatus status);

/// Joint outcome of the sufficiency-side and necessity-side condition
/// systems. status is SufficientInterior exactly when the sufficiency set is
/// empty; NecessaryOnly when only the necessity set is empty; Infeasible
/// otherwise.
struct Verdict {
  FeasibilityStatus status = FeasibilityStatus::Infeasible;
  bool generic = false;
  std::vector<Violation> sufficient_violations;
  std::vector<Violation> necessary_violations;
};

/// Scaling balance sum_j (1/p_j + lambda_j/k) = m. Returns (holds, residual)
/// with residual = sum - m.
std::pair<bool, Rational> check_scaling(const VectorSet& set, const IndexVector& ix);

/// Strict surplus on proper subspaces: for every flat S of rank <= m-1,
/// sum over j outside S of (1/p_j + lambda_j/k) > m - max(rank(S), 1).
/// The max(., 1) floor realizes the binding nonzero subspace; for m = 1 the
/// quantifier is empty and the check is vacuous.
std::vector<Violation> check_subspace_strict(const VectorSet& set, const IndexVector& ix);

/// Weight positivity outside every flat: sum over j outside S of
/// lambda_j >= 0, for all flats including the empty and full flat.
std::vector<Violation> check_lambda_nonneg(const VectorSet& set, const IndexVector& ix);

/// Global integrability: sum_j 1/p_j >= 1.
bool check_integrability(const IndexVector& ix);

/// Sufficiency-side verdict: genericity, every 1/p_j in (0,1), scaling
/// balance, strict subspace surplus, lambda positivity, integrability.
Verdict check_sufficient(const VectorSet& set, const IndexVector& ix);

/// Necessity-side verdict: every 1/p_j in [0,1], scaling balance, non-strict
/// subspace surplus (sum over j outside S >= m - rank(S), all flats), lambda
/// positivity, integrability. Throws PreconditionError when the set has a
/// collinear pair (hypothesis of the necessity conditions).
Verdict check_necessary(const VectorSet& set, const IndexVector& ix);

enum class SubsetForm { Lambda, Strict };

/// For generic sets the subspace quantifiers collapse to index subsets:
///   Lambda: sum over j outside K of lambda_j >= 0 for all K with |K| <= m-1;
///   Strict: sum over j outside K of (1/p_j + lambda_j/k) > m - |K| for all
///           K with 1 <= |K| <= m-1.
/// Equivalent to the flat-based checks on generic sets; kept as a separate
/// code path so the equivalence can be tested. Throws PreconditionError on a
/// non-generic set.
std::vector<Violation> generic_subset_check(const VectorSet& set, const IndexVector& ix,
                                            SubsetForm form);

namespace detail {
/// Shared flat-parameterized evaluations (callers pass cached flats).
std::vector<Violation> subspace_strict_violations(const VectorSet& set, const IndexVector& ix,
                                                  const std::vector<Flat>& flats);
std::vector<Violation> subspace_nonstrict_violations(const VectorSet& set, const IndexVector& ix,
                                                     const std::vector<Flat>& flats);
std::vector<Violation> lambda_violations(const VectorSet& set, const IndexVector& ix,
                                         const std::vector<Flat>& flats);
/// Throws InputError unless ix matches the set's count and k >= 1.
void validate_sizes(const VectorSet& set, const IndexVector& ix);
}  // namespace detail

}  // namespace blform
