#include "blform/decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "blform/exceptions.hpp"

namespace blform {

namespace {

// perm[s] = original index at sorted position s. Stable descending order, so
// equal weights keep ascending original order.
std::vector<int> stable_descending(const std::vector<Rational>& values) {
  std::vector<int> perm(values.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  return perm;
}

bool has_negative(const std::vector<Rational>& values) {
  return std::any_of(values.begin(), values.end(), [](const Rational& v) { return v < 0; });
}

void require_hypotheses(const VectorSet& set, const IndexVector& ix, const char* what) {
  detail::validate_sizes(set, ix);
  if (!is_generic(set)) {
    throw PreconditionError(std::string(what) + " requires a generic vector set");
  }
  Verdict verdict = check_sufficient(set, ix);
  if (!verdict.sufficient_violations.empty()) {
    throw PreconditionError(std::string(what) + " requires the index conditions to hold; " +
                            verdict.sufficient_violations.front().message);
  }
}

void verify_node(const VectorSet& set, const IndexVector& ix, const std::vector<Rational>& beta,
                 const std::vector<Flat>& flats) {
  IndexVector node;
  node.p_inv = ix.p_inv;
  node.lambda = beta;
  node.k = ix.k;
  auto [balanced, residual] = check_scaling(set, node);
  if (!balanced) {
    throw InternalError("redistribution broke scaling balance by " + rational_string(residual));
  }
  if (!detail::subspace_strict_violations(set, node, flats).empty()) {
    throw InternalError("redistribution broke the strict subspace surplus");
  }
  if (!detail::lambda_violations(set, node, flats).empty()) {
    throw InternalError("redistribution broke weight positivity");
  }
  if (!check_integrability(node)) {
    throw InternalError("redistribution broke integrability");
  }
}

struct StageSetup {
  std::vector<int> perm;          // sorted -> original
  std::vector<Rational> sorted;   // stage-start weights in sorted order
  int target = 0;                 // original index of the minimum
  Rational remaining;             // amount still to move onto the target
};

// Sorts the stage and checks the donor-budget inequality the index
// conditions guarantee: with l the last positive sorted position, l >= m and
// |min| <= sum of sorted positions m..l. A failure here is a logic error,
// not bad input.
StageSetup open_stage(const std::vector<Rational>& beta, int m) {
  StageSetup stage;
  stage.perm = stable_descending(beta);
  const int n = static_cast<int>(beta.size());
  stage.sorted.reserve(n);
  for (int s = 0; s < n; ++s) stage.sorted.push_back(beta[stage.perm[s]]);
  stage.target = stage.perm[n - 1];
  stage.remaining = -stage.sorted[n - 1];
  if (stage.remaining <= 0) throw InternalError("stage opened without a negative weight");

  int last_positive = -1;
  for (int s = 0; s < n; ++s) {
    if (stage.sorted[s] > 0) last_positive = s;
  }
  Rational budget = 0;
  for (int s = m - 1; s <= last_positive; ++s) budget += stage.sorted[s];
  if (last_positive < m - 1 || budget < stage.remaining) {
    throw InternalError("donor budget below the outstanding negative weight");
  }
  return stage;
}

struct FamilyBuilder {
  const VectorSet& set;
  const IndexVector& ix;
  const std::vector<Flat>& flats;
  std::vector<BetaLeaf> leaves;
  int depth = 0;

  void finish(BetaNode& node, int path_len) {
    if (has_negative(node.beta)) {
      run_stage(node, path_len);
    } else {
      leaves.push_back(BetaLeaf{node.beta, node.alpha_path});
      depth = std::max(depth, path_len);
    }
  }

  void run_stage(BetaNode& stage_root, int path_len) {
    StageSetup stage = open_stage(stage_root.beta, set.ambient_dim());
    stage_root.stage_permutation = stage.perm;
    std::vector<int> used;  // 1-based sorted positions drained on this path
    expand(stage_root, stage, used, 0, stage.remaining, path_len);
  }

  // Emits round t below `node`: moves gamma from each unused sorted position
  // in {1..m+t} onto the stage target, verifies, then either continues the
  // round loop or closes the stage on each child.
  void expand(BetaNode& node, const StageSetup& stage, std::vector<int>& used, int t,
              const Rational& remaining, int path_len) {
    const int m = set.ambient_dim();
    const int cap_pos = m + t;  // 1-based sorted position bounding this round's pool
    if (cap_pos > static_cast<int>(stage.sorted.size()) || stage.sorted[cap_pos - 1] <= 0) {
      throw InternalError("round pool exhausted before the target was zeroed");
    }
    Rational gamma = stage.sorted[cap_pos - 1];
    if (gamma > remaining) gamma = remaining;
    Rational next_remaining = remaining - gamma;

    for (int pos = 1; pos <= cap_pos; ++pos) {
      if (std::find(used.begin(), used.end(), pos) != used.end()) continue;
      BetaNode child;
      child.beta = node.beta;
      const int donor = stage.perm[pos - 1];
      child.beta[donor] -= gamma;
      child.beta[stage.target] += gamma;
      child.alpha_path = node.alpha_path;
      child.alpha_path.push_back(pos);
      child.gamma = gamma;
      child.branch_index = donor;
      child.target_index = stage.target;
      verify_node(set, ix, child.beta, flats);
      node.children.push_back(std::move(child));
    }
    if (node.children.size() != static_cast<std::size_t>(m)) {
      throw InternalError("round emitted " + std::to_string(node.children.size()) +
                          " branches, expected " + std::to_string(m));
    }

    for (BetaNode& child : node.children) {
      if (next_remaining == 0) {
        finish(child, path_len + 1);
      } else {
        const int pos = child.alpha_path.back();
        used.push_back(pos);
        expand(child, stage, used, t + 1, next_remaining, path_len + 1);
        used.pop_back();
      }
    }
  }
};

}  // namespace

std::vector<Rational> spread_coefficients(const VectorSet& set, int dependent,
                                          const std::vector<int>& basis) {
  const int n = set.count();
  if (dependent < 0 || dependent >= n) {
    throw InputError("dependent index " + std::to_string(dependent + 1) + " out of range");
  }
  if (basis.empty()) throw InputError("basis is empty");
  std::vector<char> seen(n, 0);
  std::vector<RationalVector> basis_vectors;
  basis_vectors.reserve(basis.size());
  for (int b : basis) {
    if (b < 0 || b >= n) {
      throw InputError("basis index " + std::to_string(b + 1) + " out of range");
    }
    if (b == dependent) {
      throw InputError("basis contains the dependent index " + std::to_string(b + 1));
    }
    if (seen[b]) throw InputError("basis repeats index " + std::to_string(b + 1));
    seen[b] = 1;
    basis_vectors.push_back(set.vector(b));
  }
  std::optional<std::vector<Rational>> coords;
  try {
    coords = coordinates_in_span(set.vector(dependent), basis_vectors);
  } catch (const PreconditionError&) {
    throw PreconditionError("basis vectors are linearly dependent");
  }
  if (!coords) {
    throw PreconditionError("vector " + std::to_string(dependent + 1) +
                            " is outside the basis span");
  }
  return *coords;
}

std::vector<BetaNode> single_step(const VectorSet& set, const IndexVector& ix) {
  require_hypotheses(set, ix, "single_step");
  if (!has_negative(ix.lambda)) {
    throw PreconditionError("single_step requires a negative weight entry");
  }
  const std::vector<Flat> flats = enumerate_flats(set);
  const int m = set.ambient_dim();
  StageSetup stage = open_stage(ix.lambda, m);
  Rational gamma = stage.sorted[m - 1];
  if (gamma > stage.remaining) gamma = stage.remaining;

  std::vector<BetaNode> branches;
  branches.reserve(m);
  for (int pos = 1; pos <= m; ++pos) {
    BetaNode branch;
    branch.beta = ix.lambda;
    const int donor = stage.perm[pos - 1];
    branch.beta[donor] -= gamma;
    branch.beta[stage.target] += gamma;
    branch.alpha_path = {pos};
    branch.gamma = gamma;
    branch.branch_index = donor;
    branch.target_index = stage.target;
    verify_node(set, ix, branch.beta, flats);
    branches.push_back(std::move(branch));
  }
  return branches;
}

BetaFamily decompose(const VectorSet& set, const IndexVector& ix) {
  require_hypotheses(set, ix, "decompose");
  const std::vector<Flat> flats = enumerate_flats(set);

  BetaFamily family;
  family.root_lambda = ix.lambda;
  family.root.beta = ix.lambda;
  family.root.gamma = 0;

  FamilyBuilder builder{set, ix, flats, {}, 0};
  builder.finish(family.root, 0);
  family.permutation = family.root.stage_permutation.empty() ? stable_descending(ix.lambda)
                                                             : family.root.stage_permutation;
  family.leaves = std::move(builder.leaves);
  family.depth = builder.depth;
  return family;
}

std::vector<WeightShift> weight_shift_report(const BetaFamily& family) {
  std::vector<WeightShift> report;
  report.reserve(family.leaves.size());
  for (const BetaLeaf& leaf : family.leaves) {
    WeightShift shift;
    shift.alpha_path = leaf.alpha_path;
    shift.shift.reserve(family.root_lambda.size());
    for (std::size_t j = 0; j < family.root_lambda.size(); ++j) {
      shift.shift.push_back(family.root_lambda[j] - leaf.beta[j]);
    }
    report.push_back(std::move(shift));
  }
  return report;
}

std::vector<std::vector<Rational>> naive_spread(const VectorSet& set, const IndexVector& ix,
                                                int target, const std::vector<int>& basis) {
  detail::validate_sizes(set, ix);
  const int n = set.count();
  if (target < 0 || target >= n) {
    throw InputError("target index " + std::to_string(target + 1) + " out of range");
  }
  if (ix.lambda[target] >= 0) {
    throw PreconditionError("target weight must be negative");
  }
  // Validates independence, distinctness, and that v_target lies in the span.
  spread_coefficients(set, target, basis);

  Rational gamma = -ix.lambda[target];
  for (int b : basis) {
    if (ix.lambda[b] <= 0) {
      throw PreconditionError("basis index " + std::to_string(b + 1) +
                              " does not carry positive weight");
    }
    if (ix.lambda[b] < gamma) gamma = ix.lambda[b];
  }

  std::vector<std::vector<Rational>> branches;
  branches.reserve(basis.size());
  for (int b : basis) {
    std::vector<Rational> beta = ix.lambda;
    beta[b] -= gamma;
    beta[target] += gamma;
    branches.push_back(std::move(beta));
  }
  return branches;
}

}  // namespace blform
