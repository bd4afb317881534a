#include "blform/vector_set.hpp"

#include <string>

#include "blform/exceptions.hpp"

namespace blform {

namespace {

bool collinear(const RationalVector& a, const RationalVector& b) {
  // All 2x2 minors vanish. Both vectors are known nonzero.
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i] * b[j] != a[j] * b[i]) return false;
    }
  }
  return true;
}

}  // namespace

VectorSet VectorSet::create(int ambient_dim, int block_dim,
                            std::vector<RationalVector> vectors) {
  if (ambient_dim < 1) throw InputError("ambient dimension m must be at least 1");
  if (block_dim < 1) throw InputError("block dimension k must be at least 1");
  if (vectors.empty()) throw InputError("vector set must contain at least one vector");
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != static_cast<std::size_t>(ambient_dim)) {
      throw InputError("vector at index " + std::to_string(i + 1) + " has length " +
                       std::to_string(vectors[i].size()) + ", expected " +
                       std::to_string(ambient_dim));
    }
    if (is_zero_vector(vectors[i])) {
      throw InputError("zero vector at index " + std::to_string(i + 1));
    }
  }
  return VectorSet(ambient_dim, block_dim, std::move(vectors));
}

bool VectorSet::has_collinear_pair() const { return first_collinear_pair().first >= 0; }

std::pair<int, int> VectorSet::first_collinear_pair() const {
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors_.size(); ++j) {
      if (collinear(vectors_[i], vectors_[j])) {
        return {static_cast<int>(i), static_cast<int>(j)};
      }
    }
  }
  return {-1, -1};
}

}  // namespace blform
