#pragma once

#include <vector>

#include "blform/linalg.hpp"

namespace blform {

/// The data E = {v_1, ..., v_N} in Q^m together with the block dimension k
/// of the form's arguments. Vectors are validated nonzero; collinear pairs
/// are permitted here and only rejected by operations whose hypotheses
/// exclude them (necessity checks).
class VectorSet {
 public:
  /// Validates m >= 1, k >= 1, N >= 1, every vector of length m and nonzero.
  static VectorSet create(int ambient_dim, int block_dim,
                          std::vector<RationalVector> vectors);

  int ambient_dim() const { return ambient_dim_; }   // m
  int block_dim() const { return block_dim_; }       // k
  int count() const { return static_cast<int>(vectors_.size()); }  // N

  const std::vector<RationalVector>& vectors() const { return vectors_; }
  const RationalVector& vector(int index) const { return vectors_.at(index); }

  bool has_collinear_pair() const;

  /// Indices (i, j), i < j, of the first collinear pair, or (-1, -1).
  std::pair<int, int> first_collinear_pair() const;

 private:
  VectorSet(int ambient_dim, int block_dim, std::vector<RationalVector> vectors)
      : ambient_dim_(ambient_dim), block_dim_(block_dim), vectors_(std::move(vectors)) {}

  int ambient_dim_;
  int block_dim_;
  std::vector<RationalVector> vectors_;
};

}  // namespace blform
