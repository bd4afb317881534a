#pragma once

#include <vector>

#include "blform/feasibility.hpp"

namespace blform {

/// One exponent vector in the redistribution tree. `gamma` is the amount
/// moved from coordinate `branch_index` to `target_index` when this node was
/// created from its parent (0 at the root). `alpha_path` is the multi-index
/// of branch choices, as positions (1-based) in the sorted order of the
/// stage that produced each entry.
struct BetaNode {
  std::vector<Rational> beta;        // original coordinate order
  std::vector<int> alpha_path;
  Rational gamma;
  int branch_index = -1;             // 0-based original index, -1 at root
  int target_index = -1;             // 0-based original index being zeroed
  std::vector<int> stage_permutation;  // sorted->original map when a stage starts here
  std::vector<BetaNode> children;
};

struct BetaLeaf {
  std::vector<Rational> beta;
  std::vector<int> alpha_path;
};

/// Full redistribution family: a tree rooted at lambda whose leaves all have
/// nonnegative weight entries, each node satisfying the four index
/// conditions (scaling balance, strict subspace surplus, lambda positivity,
/// integrability) for the same vector set.
struct BetaFamily {
  std::vector<Rational> root_lambda;
  std::vector<int> permutation;      // sorted->original map of the root stage
  BetaNode root;
  std::vector<BetaLeaf> leaves;
  int depth = 0;                     // longest root-to-leaf path length
};

/// Coefficients writing v_dependent as a combination of the basis members'
/// vectors. The basis must be independent and must not contain the dependent
/// index; the dependent vector must lie in the basis span.
std::vector<Rational> spread_coefficients(const VectorSet& set, int dependent,
                                          const std::vector<int>& basis);

/// One redistribution round at the current minimum weight: with lambda
/// sorted descending (stable; ties keep original order) and the minimum at
/// sorted position N, emits the m branches that move
/// gamma_0 = min(lambda_(m), |lambda_(N)|) from sorted position j_1 in
/// {1..m} onto the minimum. Requires a generic set, all 1/p_j in (0,1), the
/// four index conditions, and at least one negative weight. Each branch is
/// re-verified; failures raise InternalError.
std::vector<BetaNode> single_step(const VectorSet& set, const IndexVector& ix);

/// Iterates rounds until the current minimum is zeroed (round t moves
/// gamma_t = min(lambda_(m+t), remaining target) and draws the branch from
/// sorted positions {1..m+t} minus those already used on the path), then
/// recurses on each result with one fewer negative entry. All-nonnegative
/// input yields the trivial single-leaf family.
BetaFamily decompose(const VectorSet& set, const IndexVector& ix);

/// Per-leaf weight shift lambda - beta. Entries over each root-to-leaf chain
/// cancel pairwise, so every shift sums to zero.
struct WeightShift {
  std::vector<int> alpha_path;
  std::vector<Rational> shift;
};

std::vector<WeightShift> weight_shift_report(const BetaFamily& family);

/// Demo helper: spreads the negative weight at `target` over an explicit
/// independent set of positive-weight indices whose span contains
/// v_target, moving gamma = min(min over basis of lambda_b, |lambda_target|)
/// in each branch. This is the naive one-round spread; unlike decompose it
/// takes the basis as given and performs no feasibility re-verification.
std::vector<std::vector<Rational>> naive_spread(const VectorSet& set, const IndexVector& ix,
                                                int target, const std::vector<int>& basis);

}  // namespace blform
