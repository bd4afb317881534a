#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blform/feasibility.hpp"
#include "blform/flats.hpp"

namespace blform {

/// Radial test functions on R^k used by the Monte-Carlo harness. All
/// evaluate pointwise in doubles; the exact layer only certifies the
/// constructions that pick their parameters.
enum class TestFunctionKind {
  Shell,          // indicator of c1 <= |y|/scale <= c2
  FixedAnnulus,   // indicator of c1 <= |y| <= c2
  TranslatedBall, // indicator of |y - center * e_1| <= radius
  DyadicSeries,   // sum_l l^{-(1+eps)/p} 2^{-l * exponent} on 2^l <= |y| < 2^{l+1}
};

struct TestFunctionSpec {
  TestFunctionKind kind = TestFunctionKind::Shell;
  double c1 = 0.0;
  double c2 = 0.0;
  double scale = 1.0;     // R for Shell
  double center = 0.0;    // signed offset along e_1 for TranslatedBall
  double radius = 0.0;    // TranslatedBall radius
  double exponent = 0.0;  // DyadicSeries: k/p + lambda
  double p_inv = 0.0;     // DyadicSeries: 1/p
  double epsilon = 0.0;   // DyadicSeries: eps
};

double evaluate(const TestFunctionSpec& spec, std::span<const double> y);

/// Sampling region: axis-aligned cube center +/- radius in R^{mk},
/// coordinates blocked as m consecutive groups of k. Estimates are rescaled
/// by the cube volume. Fixed chunking with per-chunk seeds keeps results
/// bit-identical for a given seed, independent of thread count.
struct SampleConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::vector<double> region_center;  // length m*k
  double region_radius = 1.0;
  bool antithetic = false;
  int threads = 1;
};

struct FormEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  double hit_fraction = 0.0;
  bool all_zero = false;  // zero-measure support warning, not an error
};

/// Monte-Carlo estimate of the integral over the region of
/// prod_j f_j(v_j . x). One spec per vector; the caller chooses a region
/// covering the support intersection.
FormEstimate estimate_form(const VectorSet& set, const std::vector<TestFunctionSpec>& specs,
                           const SampleConfig& config);

/// Constructive witness: w in span(w_basis) orthogonal to span(v_basis) with
/// w . v != 0 for every listed vector. Starts from the orthogonal part of
/// the first vector and repairs zero dots with the correction
/// w <- c w + v_perp, c = (1 + max |v_perp . v_j|) / min |w . v_j|. All
/// arithmetic exact; the nonzero-dot guarantee is asserted before any float
/// conversion. Vectors must lie in span(w_basis) but outside span(v_basis);
/// v_basis may be any generating list (dependent entries are reduced away).
RationalVector find_w(const std::vector<RationalVector>& v_basis,
                      const std::vector<RationalVector>& w_basis,
                      const std::vector<RationalVector>& vectors);

struct GrowthFit {
  std::vector<double> scales;
  std::vector<double> estimates;
  std::vector<double> standard_errors;
  std::vector<double> log_estimates;
  double slope = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares of log(estimate) on log(scale). Needs >= 3 points.
GrowthFit fit_growth(const std::vector<double>& scales, const std::vector<double>& estimates,
                     const std::vector<double>& standard_errors);

struct SlopeConfig {
  std::uint64_t samples_per_scale = 1'000'000;
  std::uint64_t seed = 1;
  int scale_count = 5;
  double scale_base = 2.0;
  int threads = 1;
};

/// Dilated-shell growth: supports concentrated near scale R in every
/// direction make the form grow like R^{mk}, matching the norm product's
/// exponent sum when the scaling balance holds.
struct ScalingSlopeResult {
  GrowthFit fit;
  double expected_slope = 0.0;       // m*k
  double norm_product_slope = 0.0;   // sum_j (k/p_j + lambda_j)
  std::vector<double> dots;          // |v_j . w|, certified nonzero
};

ScalingSlopeResult scaling_slope_test(const VectorSet& set, const IndexVector& ix,
                                      const SlopeConfig& config);

/// Mixed-scale growth along a flat: fixed annuli for members, dilated shells
/// outside, giving growth k * (m - rank(flat)). The exact gap between the
/// norm-product exponent and that growth has the same sign as the flat's
/// non-strict subspace condition.
struct SubspaceSlopeResult {
  GrowthFit fit;
  double expected_slope = 0.0;        // k * (m - rank)
  Rational norm_exponent;             // sum outside (k/p_j + lambda_j)
  Rational expected_exponent;         // k * (m - rank)
  Rational gap;                       // norm_exponent - expected_exponent
};

SubspaceSlopeResult subspace_slope_test(const VectorSet& set, const IndexVector& ix,
                                        const Flat& flat, const SlopeConfig& config);

/// Translated-ball family: the form stays bounded below (slope about 0)
/// while the norm product scales like T^{sum of lambda outside the flat}.
struct TranslationResult {
  GrowthFit fit;
  Rational lambda_sum_outside;
};

TranslationResult translation_test(const VectorSet& set, const IndexVector& ix,
                                   const Flat& flat, const SlopeConfig& config);

/// Dyadic-series divergence probe for the integrability condition. Exact
/// preconditions: scaling balance holds, eps > 0, terms >= 10. diverging is
/// the numeric flag (partial sums still grow more than 1% over the last
/// decade); exponent_divergent is the exact p-series verdict
/// (1+eps) * sum 1/p_j <= 1, reported alongside for boundary cases.
struct IntegrabilityReport {
  double epsilon = 0.0;
  long terms = 0;
  double p_inv_sum = 0.0;
  double series_exponent = 0.0;
  double partial_sum = 0.0;
  double decade_growth = 0.0;
  bool diverging = false;
  bool exponent_divergent = false;
  double norm_bound = 0.0;  // truncated product bound from the factor norms
};

IntegrabilityReport integrability_test(const VectorSet& set, const IndexVector& ix,
                                       double epsilon, long terms = 4096);

}  // namespace blform
