#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>
#include <vector>

#include "blform/decomposition.hpp"
#include "blform/exceptions.hpp"
#include "blform/feasibility.hpp"
#include "blform/vector_set.hpp"

#include "generators.hpp"

using blform::BetaFamily;
using blform::BetaNode;
using blform::frac;
using blform::IndexVector;
using blform::Rational;
using blform::VectorSet;

namespace {

VectorSet fan_set() {
  return VectorSet::create(2, 1, {{1, 0}, {0, 1}, {1, 1}, {1, 2}, {1, 3}});
}

IndexVector fan_indices() {
  IndexVector ix;
  ix.p_inv.assign(5, frac(3, 10));
  ix.lambda = {frac(3, 10), frac(3, 10), frac(1, 10), frac(-1, 10), frac(-1, 10)};
  ix.k = 1;
  return ix;
}

VectorSet five_vector_demo() {
  return VectorSet::create(3, 1, {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, -1, 0}, {1, 0, -1}});
}

IndexVector demo_indices() {
  IndexVector ix;
  ix.p_inv = {frac(11, 15), frac(2, 5), frac(2, 3), frac(2, 5), frac(2, 3)};
  ix.lambda = {frac(-2, 15), frac(2, 15), frac(0), frac(2, 15), frac(0)};
  ix.k = 1;
  return ix;
}

void walk(const BetaNode& node, const std::function<void(const BetaNode&)>& visit) {
  visit(node);
  for (const auto& child : node.children) walk(child, visit);
}

}  // namespace

TEST_CASE("spread coefficients") {
  const VectorSet set = five_vector_demo();
  // 2 v_1 = v_2 + v_4.
  const auto coeffs = blform::spread_coefficients(set, 0, {1, 3});
  CHECK(coeffs == std::vector<Rational>{frac(1, 2), frac(1, 2)});
  CHECK_THROWS_AS(blform::spread_coefficients(set, 0, {}), blform::InputError);
  CHECK_THROWS_AS(blform::spread_coefficients(set, 0, {1, 1}), blform::InputError);
  CHECK_THROWS_AS(blform::spread_coefficients(set, 0, {0, 1}), blform::InputError);
  CHECK_THROWS_AS(blform::spread_coefficients(set, 9, {1, 3}), blform::InputError);
  // v_2 is outside span{v_3, v_5}: a hypothesis failure, not a shape error.
  CHECK_THROWS_WITH_AS(blform::spread_coefficients(set, 1, {2, 4}),
                       doctest::Contains("outside the basis span"), blform::PreconditionError);
}

TEST_CASE("naive spread reproduces the hand-checked branches") {
  const VectorSet set = five_vector_demo();
  const IndexVector ix = demo_indices();
  const auto branches = blform::naive_spread(set, ix, 0, {1, 3});
  REQUIRE(branches.size() == 2);
  CHECK(branches[0] ==
        std::vector<Rational>{frac(0), frac(0), frac(0), frac(2, 15), frac(0)});
  CHECK(branches[1] ==
        std::vector<Rational>{frac(0), frac(2, 15), frac(0), frac(0), frac(0)});
  CHECK_THROWS_AS(blform::naive_spread(set, ix, 1, {0, 2}), blform::PreconditionError);
  // Basis members must carry positive weight: lambda_3 = 0.
  CHECK_THROWS_AS(blform::naive_spread(set, ix, 0, {1, 2}), blform::PreconditionError);
}

TEST_CASE("single step moves the minimum onto the two largest weights") {
  const auto branches = blform::single_step(fan_set(), fan_indices());
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].beta == std::vector<Rational>{frac(1, 5), frac(3, 10), frac(1, 10),
                                                  frac(-1, 10), frac(0)});
  CHECK(branches[0].alpha_path == std::vector<int>{1});
  CHECK(branches[0].branch_index == 0);
  CHECK(branches[0].target_index == 4);
  CHECK(branches[0].gamma == frac(1, 10));
  CHECK(branches[1].beta == std::vector<Rational>{frac(3, 10), frac(1, 5), frac(1, 10),
                                                  frac(-1, 10), frac(0)});
  CHECK(branches[1].alpha_path == std::vector<int>{2});
}

TEST_CASE("single step requires a negative weight and a generic set") {
  IndexVector ix = fan_indices();
  ix.lambda = {frac(1, 10), frac(1, 10), frac(1, 10), frac(1, 10), frac(1, 10)};
  ix.p_inv.assign(5, frac(3, 10));
  CHECK_THROWS_WITH_AS(blform::single_step(fan_set(), ix),
                       doctest::Contains("negative weight"), blform::PreconditionError);
  CHECK_THROWS_WITH_AS(blform::single_step(five_vector_demo(), demo_indices()),
                       doctest::Contains("generic"), blform::PreconditionError);
}

TEST_CASE("decompose reproduces the hand-expanded two-stage tree") {
  const BetaFamily family = blform::decompose(fan_set(), fan_indices());
  CHECK(family.root_lambda == fan_indices().lambda);
  CHECK(family.permutation == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(family.depth == 2);
  REQUIRE(family.leaves.size() == 4);

  CHECK(family.leaves[0].alpha_path == std::vector<int>{1, 1});
  CHECK(family.leaves[0].beta == std::vector<Rational>{frac(1, 5), frac(1, 5), frac(1, 10),
                                                       frac(0), frac(0)});
  CHECK(family.leaves[1].alpha_path == std::vector<int>{1, 2});
  CHECK(family.leaves[1].beta == std::vector<Rational>{frac(1, 10), frac(3, 10), frac(1, 10),
                                                       frac(0), frac(0)});
  CHECK(family.leaves[2].alpha_path == std::vector<int>{2, 1});
  CHECK(family.leaves[2].beta == std::vector<Rational>{frac(1, 5), frac(1, 5), frac(1, 10),
                                                       frac(0), frac(0)});
  CHECK(family.leaves[3].alpha_path == std::vector<int>{2, 2});
  CHECK(family.leaves[3].beta == std::vector<Rational>{frac(3, 10), frac(1, 10), frac(1, 10),
                                                       frac(0), frac(0)});

  // Second stage re-sorts each branch; the A branch promotes index 1.
  REQUIRE(family.root.children.size() == 2);
  CHECK(family.root.children[0].stage_permutation == std::vector<int>{1, 0, 2, 4, 3});
  CHECK(family.root.children[1].stage_permutation == std::vector<int>{0, 1, 2, 4, 3});
}

TEST_CASE("all-nonnegative weights give the trivial family") {
  IndexVector ix;
  ix.p_inv.assign(5, frac(3, 10));
  ix.lambda = {frac(1, 10), frac(1, 10), frac(1, 10), frac(1, 10), frac(1, 10)};
  ix.k = 1;
  const BetaFamily family = blform::decompose(fan_set(), ix);
  CHECK(family.depth == 0);
  REQUIRE(family.leaves.size() == 1);
  CHECK(family.leaves[0].beta == ix.lambda);
  CHECK(family.leaves[0].alpha_path.empty());
  CHECK(family.root.children.empty());
}

TEST_CASE("weight shifts cancel over every root-to-leaf chain") {
  const BetaFamily family = blform::decompose(fan_set(), fan_indices());
  const auto shifts = blform::weight_shift_report(family);
  REQUIRE(shifts.size() == family.leaves.size());
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    CHECK(shifts[i].alpha_path == family.leaves[i].alpha_path);
    Rational total = 0;
    for (const auto& entry : shifts[i].shift) total += entry;
    CHECK(total == 0);
    for (std::size_t j = 0; j < shifts[i].shift.size(); ++j) {
      CHECK(family.leaves[i].beta[j] + shifts[i].shift[j] == family.root_lambda[j]);
    }
  }
}

TEST_CASE("decompose requires the index conditions") {
  IndexVector ix = fan_indices();
  ix.lambda = {frac(3, 10), frac(3, 10), frac(1, 10), frac(-1, 10), frac(-2, 10)};
  // Scaling now misses m.
  CHECK_THROWS_WITH_AS(blform::decompose(fan_set(), ix),
                       doctest::Contains("index conditions"), blform::PreconditionError);
}

TEST_CASE("randomized decomposition invariants") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = testgen::draw(rng, 2, 4);
    const int n = testgen::draw(rng, m + 1, 8);
    const VectorSet set = testgen::random_generic_set(rng, m, n);
    const IndexVector ix = testgen::random_feasible_index_vector(rng, set);
    const BetaFamily family = blform::decompose(set, ix);

    CHECK(family.root_lambda == ix.lambda);
    CHECK_FALSE(family.leaves.empty());
    for (const auto& leaf : family.leaves) {
      for (const auto& entry : leaf.beta) CHECK(entry >= 0);
    }

    // Every node keeps all four index conditions (re-checked independently
    // of the internal verifier) and every child moves gamma from the donor
    // to the target.
    int max_depth = 0;
    walk(family.root, [&](const BetaNode& node) {
      IndexVector node_ix = ix;
      node_ix.lambda = node.beta;
      CHECK(blform::check_sufficient(set, node_ix).sufficient_violations.empty());
      max_depth = std::max(max_depth, static_cast<int>(node.alpha_path.size()));
      for (const auto& child : node.children) {
        REQUIRE(child.branch_index >= 0);
        REQUIRE(child.target_index >= 0);
        CHECK(child.gamma > 0);
        for (int j = 0; j < n; ++j) {
          Rational expected = node.beta[j];
          if (j == child.branch_index) expected -= child.gamma;
          if (j == child.target_index) expected += child.gamma;
          CHECK(child.beta[j] == expected);
        }
      }
    });
    CHECK(family.depth == max_depth);
  }
}
