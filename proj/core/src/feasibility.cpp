#include "blform/feasibility.hpp"

#include <string>
#include <utility>

#include "blform/exceptions.hpp"

namespace blform {

std::string relation_string(Relation relation) {
  switch (relation) {
    case Relation::Equal: return "=";
    case Relation::Greater: return ">";
    case Relation::GreaterEqual: return ">=";
    case Relation::Less: return "<";
    case Relation::LessEqual: return "<=";
  }
  throw InternalError("unknown relation");
}

std::string status_string(FeasibilityStatus status) {
  switch (status) {
    case FeasibilityStatus::SufficientInterior: return "sufficient_interior";
    case FeasibilityStatus::NecessaryOnly: return "necessary_only";
    case FeasibilityStatus::Infeasible: return "infeasible";
  }
  throw InternalError("unknown status");
}

namespace detail {

void validate_sizes(const VectorSet& set, const IndexVector& ix) {
  const std::size_t n = static_cast<std::size_t>(set.count());
  if (ix.p_inv.size() != n) {
    throw InputError("expected " + std::to_string(n) + " exponent entries, got " +
                     std::to_string(ix.p_inv.size()));
  }
  if (ix.lambda.size() != n) {
    throw InputError("expected " + std::to_string(n) + " weight entries, got " +
                     std::to_string(ix.lambda.size()));
  }
  if (ix.k < 1) throw InputError("block dimension must be at least 1");
  if (ix.k != set.block_dim()) {
    throw InputError("index block dimension " + std::to_string(ix.k) +
                     " does not match the vector set's " + std::to_string(set.block_dim()));
  }
}

namespace {

std::string members_text(const std::vector<int>& members) {
  std::string text = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) text += ",";
    text += std::to_string(members[i] + 1);
  }
  text += "}";
  return text;
}

Rational outside_sum(const IndexVector& ix, const std::vector<int>& members, bool with_p) {
  const int n = static_cast<int>(ix.lambda.size());
  std::vector<char> inside(n, 0);
  for (int j : members) inside[j] = 1;
  Rational sum = 0;
  for (int j = 0; j < n; ++j) {
    if (inside[j]) continue;
    sum += ix.lambda[j];
    if (with_p) {
      sum += ix.p_inv[j] * ix.k;
    }
  }
  if (with_p) sum /= ix.k;  // sum of 1/p_j + lambda_j/k over j outside
  return sum;
}

std::vector<Violation> subspace_violations(const VectorSet& set, const IndexVector& ix,
                                           const std::vector<Flat>& flats, bool strict) {
  const int m = set.ambient_dim();
  std::vector<Violation> violations;
  for (const Flat& flat : flats) {
    // The strict form ranges over nonzero proper subspaces only, so the empty
    // flat binds at dimension 1 and rank-m flats are skipped. The non-strict
    // form ranges over all subspaces; the full flat is the binding case for
    // V = R^m and catches rank-deficient sets.
    if (strict && flat.rank >= m) continue;
    const int dim = strict ? std::max(flat.rank, 1) : flat.rank;
    Rational lhs = outside_sum(ix, flat.members, true);
    Rational rhs = Rational(m - dim);
    const bool ok = strict ? lhs > rhs : lhs >= rhs;
    if (ok) continue;
    Violation v;
    v.constraint = strict ? "subspace_strict" : "subspace";
    v.subset = flat.members;
    v.lhs = lhs;
    v.relation = strict ? Relation::Greater : Relation::GreaterEqual;
    v.rhs = rhs;
    v.message = "sum of 1/p_j + lambda_j/k outside flat " + members_text(flat.members) +
                " is " + rational_string(lhs) + ", needs " + relation_string(v.relation) +
                " " + rational_string(rhs);
    violations.push_back(std::move(v));
  }
  return violations;
}

}  // namespace

std::vector<Violation> subspace_strict_violations(const VectorSet& set, const IndexVector& ix,
                                                  const std::vector<Flat>& flats) {
  if (set.ambient_dim() == 1) return {};  // no nonzero proper subspaces
  return subspace_violations(set, ix, flats, true);
}

std::vector<Violation> subspace_nonstrict_violations(const VectorSet& set, const IndexVector& ix,
                                                     const std::vector<Flat>& flats) {
  return subspace_violations(set, ix, flats, false);
}

std::vector<Violation> lambda_violations(const VectorSet& set, const IndexVector& ix,
                                         const std::vector<Flat>& flats) {
  (void)set;
  std::vector<Violation> violations;
  for (const Flat& flat : flats) {
    Rational lhs = outside_sum(ix, flat.members, false);
    if (lhs >= 0) continue;
    Violation v;
    v.constraint = "lambda_nonneg";
    v.subset = flat.members;
    v.lhs = lhs;
    v.relation = Relation::GreaterEqual;
    v.rhs = Rational(0);
    v.message = "sum of lambda_j outside flat " + members_text(flat.members) + " is " +
                rational_string(lhs) + ", needs >= 0";
    violations.push_back(std::move(v));
  }
  return violations;
}

}  // namespace detail

std::pair<bool, Rational> check_scaling(const VectorSet& set, const IndexVector& ix) {
  detail::validate_sizes(set, ix);
  Rational sum = 0;
  for (std::size_t j = 0; j < ix.p_inv.size(); ++j) {
    sum += ix.p_inv[j] + ix.lambda[j] / ix.k;
  }
  Rational residual = sum - set.ambient_dim();
  return {residual == 0, residual};
}

std::vector<Violation> check_subspace_strict(const VectorSet& set, const IndexVector& ix) {
  detail::validate_sizes(set, ix);
  return detail::subspace_strict_violations(set, ix, enumerate_flats(set));
}

std::vector<Violation> check_lambda_nonneg(const VectorSet& set, const IndexVector& ix) {
  detail::validate_sizes(set, ix);
  return detail::lambda_violations(set, ix, enumerate_flats(set));
}

bool check_integrability(const IndexVector& ix) {
  Rational sum = 0;
  for (const Rational& x : ix.p_inv) sum += x;
  return sum >= 1;
}

namespace {

Violation scalar_violation(std::string constraint, Rational lhs, Relation relation, Rational rhs,
                           std::string message) {
  Violation v;
  v.constraint = std::move(constraint);
  v.lhs = std::move(lhs);
  v.relation = relation;
  v.rhs = std::move(rhs);
  v.message = std::move(message);
  return v;
}

void append_range_violations(std::vector<Violation>& out, const IndexVector& ix, bool open) {
  for (std::size_t j = 0; j < ix.p_inv.size(); ++j) {
    const Rational& x = ix.p_inv[j];
    const bool low_ok = open ? x > 0 : x >= 0;
    const bool high_ok = open ? x < 1 : x <= 1;
    if (low_ok && high_ok) continue;
    Violation v;
    v.constraint = open ? "exponent_open_range" : "exponent_range";
    v.index = static_cast<int>(j);
    v.lhs = x;
    if (!low_ok) {
      v.relation = open ? Relation::Greater : Relation::GreaterEqual;
      v.rhs = Rational(0);
    } else {
      v.relation = open ? Relation::Less : Relation::LessEqual;
      v.rhs = Rational(1);
    }
    v.message = "1/p_" + std::to_string(j + 1) + " = " + rational_string(x) + " is outside " +
                (open ? "(0,1)" : "[0,1]");
    out.push_back(std::move(v));
  }
}

void append_scaling_violation(std::vector<Violation>& out, const VectorSet& set,
                              const IndexVector& ix) {
  auto [ok, residual] = check_scaling(set, ix);
  if (ok) return;
  Rational sum = residual + set.ambient_dim();
  out.push_back(scalar_violation(
      "scaling", sum, Relation::Equal, Rational(set.ambient_dim()),
      "sum of 1/p_j + lambda_j/k is " + rational_string(sum) + ", needs = " +
          std::to_string(set.ambient_dim())));
}

void append_integrability_violation(std::vector<Violation>& out, const IndexVector& ix) {
  if (check_integrability(ix)) return;
  Rational sum = 0;
  for (const Rational& x : ix.p_inv) sum += x;
  out.push_back(scalar_violation("integrability", sum, Relation::GreaterEqual, Rational(1),
                                 "sum of 1/p_j is " + rational_string(sum) + ", needs >= 1"));
}

}  // namespace

Verdict check_sufficient(const VectorSet& set, const IndexVector& ix) {
  detail::validate_sizes(set, ix);
  Verdict verdict;
  verdict.generic = is_generic(set);
  std::vector<Flat> flats = enumerate_flats(set);

  append_range_violations(verdict.sufficient_violations, ix, true);
  append_scaling_violation(verdict.sufficient_violations, set, ix);
  for (auto& v : detail::subspace_strict_violations(set, ix, flats)) {
    verdict.sufficient_violations.push_back(std::move(v));
  }
  for (auto& v : detail::lambda_violations(set, ix, flats)) {
    verdict.sufficient_violations.push_back(std::move(v));
  }
  append_integrability_violation(verdict.sufficient_violations, ix);

  verdict.status = verdict.sufficient_violations.empty() ? FeasibilityStatus::SufficientInterior
                                                         : FeasibilityStatus::Infeasible;
  return verdict;
}

Verdict check_necessary(const VectorSet& set, const IndexVector& ix) {
  detail::validate_sizes(set, ix);
  if (set.has_collinear_pair()) {
    auto [i, j] = set.first_collinear_pair();
    throw PreconditionError("necessity conditions require no collinear pair; vectors " +
                            std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                            " are collinear");
  }
  Verdict verdict;
  verdict.generic = is_generic(set);
  std::vector<Flat> flats = enumerate_flats(set);

  append_range_violations(verdict.necessary_violations, ix, false);
  append_scaling_violation(verdict.necessary_violations, set, ix);
  for (auto& v : detail::subspace_nonstrict_violations(set, ix, flats)) {
    verdict.necessary_violations.push_back(std::move(v));
  }
  for (auto& v : detail::lambda_violations(set, ix, flats)) {
    verdict.necessary_violations.push_back(std::move(v));
  }
  append_integrability_violation(verdict.necessary_violations, ix);

  verdict.status = verdict.necessary_violations.empty() ? FeasibilityStatus::NecessaryOnly
                                                        : FeasibilityStatus::Infeasible;
  return verdict;
}

std::vector<Violation> generic_subset_check(const VectorSet& set, const IndexVector& ix,
                                            SubsetForm form) {
  detail::validate_sizes(set, ix);
  if (!is_generic(set)) {
    throw PreconditionError("subset-form checks require a generic vector set");
  }
  const int m = set.ambient_dim();
  const int n = set.count();
  std::vector<Violation> violations;

  // Iterate subsets K in lexicographic member order (matching the flat
  // ordering) by scanning bitmasks grouped by size would lose that order, so
  // recurse over sorted member lists instead.
  std::vector<int> subset;
  auto visit = [&](const std::vector<int>& members) {
    const int size = static_cast<int>(members.size());
    if (form == SubsetForm::Strict && size == 0) return;
    Violation v;
    if (form == SubsetForm::Lambda) {
      Rational lhs = 0;
      std::vector<char> inside(n, 0);
      for (int j : members) inside[j] = 1;
      for (int j = 0; j < n; ++j) {
        if (!inside[j]) lhs += ix.lambda[j];
      }
      if (lhs >= 0) return;
      v.constraint = "lambda_nonneg_subset";
      v.lhs = lhs;
      v.relation = Relation::GreaterEqual;
      v.rhs = Rational(0);
    } else {
      Rational lhs = 0;
      std::vector<char> inside(n, 0);
      for (int j : members) inside[j] = 1;
      for (int j = 0; j < n; ++j) {
        if (!inside[j]) lhs += ix.p_inv[j] + ix.lambda[j] / ix.k;
      }
      Rational rhs = Rational(m - size);
      if (lhs > rhs) return;
      v.constraint = "subspace_strict_subset";
      v.lhs = lhs;
      v.relation = Relation::Greater;
      v.rhs = rhs;
    }
    v.subset = members;
    v.message = (form == SubsetForm::Lambda ? "sum of lambda_j" : "sum of 1/p_j + lambda_j/k");
    v.message += " outside subset is " + rational_string(*v.lhs) + ", needs " +
                 relation_string(v.relation) + " " + rational_string(*v.rhs);
    violations.push_back(std::move(v));
  };

  const int max_size = std::min(m - 1, n);
  auto recurse = [&](auto&& self, int next) -> void {
    if (static_cast<int>(subset.size()) <= max_size) visit(subset);
    if (static_cast<int>(subset.size()) == max_size) return;
    for (int j = next; j < n; ++j) {
      subset.push_back(j);
      self(self, j + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);
  return violations;
}

}  // namespace blform
