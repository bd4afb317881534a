#include "blform/flats.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "blform/exceptions.hpp"

namespace blform {

namespace {

// Visits every size-`size` index subset of {0..n-1} in lexicographic order.
template <typename Visitor>
void for_each_subset(int n, int size, Visitor&& visit) {
  std::vector<int> subset(size);
  for (int i = 0; i < size; ++i) subset[i] = i;
  if (size > n) return;
  while (true) {
    visit(subset);
    int i = size - 1;
    while (i >= 0 && subset[i] == n - size + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < size; ++j) subset[j] = subset[j - 1] + 1;
  }
}

}  // namespace

bool is_generic(const VectorSet& set) {
  const int m = set.ambient_dim();
  const int n = set.count();
  if (n < m) return rank_of(set.vectors()) == n;
  bool generic = true;
  for_each_subset(n, m, [&](const std::vector<int>& subset) {
    if (!generic) return;
    std::vector<RationalVector> chosen;
    chosen.reserve(subset.size());
    for (int i : subset) chosen.push_back(set.vector(i));
    if (rank_of(chosen) != m) generic = false;
  });
  return generic;
}

RationalVector extend_generic(const VectorSet& set) {
  if (!is_generic(set)) {
    throw PreconditionError("extend_generic requires a generic vector set");
  }
  const int m = set.ambient_dim();
  if (m < 2) {
    // Every pair of vectors in Q^1 is collinear, so no extension preserves
    // the vector-set invariants.
    throw PreconditionError("extend_generic requires ambient dimension at least 2");
  }
  for (long long t = 1;; ++t) {
    RationalVector candidate(m);
    Rational power = 1;
    for (int i = 0; i < m; ++i) {
      candidate[i] = power;
      power *= t;
    }
    std::vector<RationalVector> extended = set.vectors();
    extended.push_back(candidate);
    if (is_generic(VectorSet::create(m, set.block_dim(), std::move(extended)))) {
      return candidate;
    }
  }
}

Flat closure(const std::vector<int>& subset, const VectorSet& set) {
  const int n = set.count();
  EchelonBasis basis(set.ambient_dim());
  for (int i : subset) {
    if (i < 0 || i >= n) {
      throw InputError("closure: index " + std::to_string(i + 1) + " out of range");
    }
    basis.insert(set.vector(i));
  }
  Flat flat;
  flat.rank = basis.rank();
  for (int i = 0; i < n; ++i) {
    if (flat.rank > 0 && basis.contains(set.vector(i))) flat.members.push_back(i);
  }
  return flat;
}

std::vector<Flat> enumerate_flats(const VectorSet& set, int size_cap) {
  const int n = set.count();
  const int m = set.ambient_dim();
  if (n > size_cap) {
    throw InputError("vector count " + std::to_string(n) +
                     " exceeds the flat enumeration cap " + std::to_string(size_cap) +
                     "; raise the cap to proceed");
  }

  std::set<std::vector<int>> seen;
  std::vector<Flat> flats;
  const int max_size = std::min(m, n);
  for (int size = 0; size <= max_size; ++size) {
    for_each_subset(n, size, [&](const std::vector<int>& subset) {
      Flat flat = closure(subset, set);
      if (seen.insert(flat.members).second) flats.push_back(std::move(flat));
    });
  }
  std::sort(flats.begin(), flats.end(),
            [](const Flat& a, const Flat& b) { return a.members < b.members; });
  return flats;
}

}  // namespace blform
