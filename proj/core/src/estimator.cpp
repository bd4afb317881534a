#include "blform/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>
#include <utility>

#include "blform/exceptions.hpp"
#include "blform/linalg.hpp"

namespace blform {

namespace {

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::uint64_t splitmix64(std::uint64_t state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Minimal xorshift-free generator: mt19937_64 seeded per chunk, uniforms via
// the top 53 bits so streams do not depend on library distribution details.
struct ChunkRng {
  std::mt19937_64 engine;

  explicit ChunkRng(std::uint64_t seed) : engine(seed) {}

  double symmetric() {  // uniform in [-1, 1)
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }
};

double norm2(std::span<const double> y) {
  double sum = 0.0;
  for (double c : y) sum += c * c;
  return std::sqrt(sum);
}

}  // namespace

double evaluate(const TestFunctionSpec& spec, std::span<const double> y) {
  switch (spec.kind) {
    case TestFunctionKind::Shell: {
      const double r = norm2(y) / spec.scale;
      return (r >= spec.c1 && r <= spec.c2) ? 1.0 : 0.0;
    }
    case TestFunctionKind::FixedAnnulus: {
      const double r = norm2(y);
      return (r >= spec.c1 && r <= spec.c2) ? 1.0 : 0.0;
    }
    case TestFunctionKind::TranslatedBall: {
      double sum = 0.0;
      for (std::size_t c = 0; c < y.size(); ++c) {
        const double d = c == 0 ? y[c] - spec.center : y[c];
        sum += d * d;
      }
      return sum <= spec.radius * spec.radius ? 1.0 : 0.0;
    }
    case TestFunctionKind::DyadicSeries: {
      const double r = norm2(y);
      if (r < 2.0) return 0.0;
      const double l = std::floor(std::log2(r));
      return std::pow(l, -(1.0 + spec.epsilon) * spec.p_inv) * std::pow(2.0, -l * spec.exponent);
    }
  }
  throw InternalError("unknown test function kind");
}

FormEstimate estimate_form(const VectorSet& set, const std::vector<TestFunctionSpec>& specs,
                           const SampleConfig& config) {
  const int m = set.ambient_dim();
  const int k = set.block_dim();
  const int n = set.count();
  const int dim = m * k;
  if (static_cast<int>(specs.size()) != n) {
    throw InputError("expected " + std::to_string(n) + " test functions, got " +
                     std::to_string(specs.size()));
  }
  if (config.samples == 0) throw InputError("sample count must be positive");
  if (!(config.region_radius > 0.0)) throw InputError("region radius must be positive");
  std::vector<double> center = config.region_center;
  if (center.empty()) center.assign(dim, 0.0);
  if (static_cast<int>(center.size()) != dim) {
    throw InputError("region center has " + std::to_string(center.size()) +
                     " coordinates, expected " + std::to_string(dim));
  }

  std::vector<std::vector<double>> vf(n, std::vector<double>(m));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) vf[j][i] = to_double(set.vector(j)[i]);
  }

  constexpr std::uint64_t kChunk = 65536;
  const std::uint64_t chunks = (config.samples + kChunk - 1) / kChunk;

  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t hits = 0;
  };
  std::vector<Partial> partials(chunks);

  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(begin + kChunk, config.samples);
    ChunkRng rng(splitmix64(config.seed + 0x9E3779B97F4A7C15ULL * (c + 1)));
    std::vector<double> x(dim);
    std::vector<double> y(k);
    Partial part;

    auto integrand = [&](const std::vector<double>& point) {
      double product = 1.0;
      for (int j = 0; j < n; ++j) {
        for (int col = 0; col < k; ++col) {
          double acc = 0.0;
          for (int i = 0; i < m; ++i) acc += vf[j][i] * point[i * k + col];
          y[col] = acc;
        }
        const double f = evaluate(specs[j], y);
        if (f == 0.0) return 0.0;
        product *= f;
      }
      return product;
    };

    std::vector<double> mirror(dim);
    for (std::uint64_t s = begin; s < end; ++s) {
      for (int i = 0; i < dim; ++i) x[i] = center[i] + config.region_radius * rng.symmetric();
      double value = integrand(x);
      if (config.antithetic) {
        for (int i = 0; i < dim; ++i) mirror[i] = 2.0 * center[i] - x[i];
        value = 0.5 * (value + integrand(mirror));
      }
      part.sum += value;
      part.sum_sq += value * value;
      if (value != 0.0) ++part.hits;
    }
    partials[c] = part;
  };

  const int threads = std::max(1, config.threads);
  if (threads == 1 || chunks == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (std::uint64_t c = t; c < chunks; c += threads) run_chunk(c);
      });
    }
    for (std::thread& worker : pool) worker.join();
  }

  // Chunk-ordered reduction keeps the result independent of thread count.
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t hits = 0;
  for (const Partial& part : partials) {
    sum += part.sum;
    sum_sq += part.sum_sq;
    hits += part.hits;
  }

  const double count = static_cast<double>(config.samples);
  const double mean = sum / count;
  const double variance = std::max(0.0, sum_sq / count - mean * mean);
  const double volume = std::pow(2.0 * config.region_radius, dim);

  FormEstimate estimate;
  estimate.value = volume * mean;
  estimate.standard_error = volume * std::sqrt(variance / count);
  estimate.hit_fraction = static_cast<double>(hits) / count;
  estimate.all_zero = hits == 0;
  return estimate;
}

namespace {

Rational abs_rational(const Rational& value) { return value < 0 ? -value : value; }

std::vector<RationalVector> standard_basis(int m) {
  std::vector<RationalVector> basis(m, RationalVector(m, Rational(0)));
  for (int i = 0; i < m; ++i) basis[i][i] = 1;
  return basis;
}

}  // namespace

RationalVector find_w(const std::vector<RationalVector>& v_basis,
                      const std::vector<RationalVector>& w_basis,
                      const std::vector<RationalVector>& vectors) {
  if (w_basis.empty()) throw InputError("witness span is empty");
  if (vectors.empty()) throw InputError("no vectors to separate");
  const std::size_t m = w_basis.front().size();
  for (const RationalVector& v : vectors) {
    if (v.size() != m) throw InputError("vector dimension mismatch");
    if (!in_span(v, w_basis)) {
      throw PreconditionError("a vector lies outside the witness span");
    }
    if (!v_basis.empty() && in_span(v, v_basis)) {
      throw PreconditionError("a vector lies inside the excluded span");
    }
  }

  // w must be orthogonal to span(v_basis) while staying inside the witness
  // span, so replace each excluded generator by its witness-span component:
  // for w in the witness span the two orthogonality conditions agree. Only
  // rank-growing generators are kept; callers may pass dependent lists
  // (e.g. every member of a flat) and projection needs an independent set.
  std::vector<RationalVector> excluded;
  EchelonBasis excluded_span(m);
  for (const RationalVector& v : v_basis) {
    RationalVector outside = project_orthogonal(v, w_basis);
    RationalVector inside(m);
    bool nonzero = false;
    for (std::size_t i = 0; i < m; ++i) {
      inside[i] = v[i] - outside[i];
      if (inside[i] != 0) nonzero = true;
    }
    if (nonzero && excluded_span.insert(inside)) excluded.push_back(std::move(inside));
  }

  auto component_off_excluded = [&](const RationalVector& v) {
    return project_orthogonal(v, excluded);
  };

  RationalVector w = component_off_excluded(vectors[0]);
  if (is_zero_vector(w)) {
    throw PreconditionError("vector 1 projects into the excluded span");
  }

  auto dots = [&](const RationalVector& candidate) {
    std::vector<Rational> values;
    values.reserve(vectors.size());
    for (const RationalVector& v : vectors) values.push_back(dot(candidate, v));
    return values;
  };

  for (std::size_t round = 0; round <= vectors.size(); ++round) {
    std::vector<Rational> current = dots(w);
    int zero_at = -1;
    Rational min_nonzero;
    bool have_nonzero = false;
    for (std::size_t j = 0; j < current.size(); ++j) {
      Rational a = abs_rational(current[j]);
      if (a == 0) {
        if (zero_at < 0) zero_at = static_cast<int>(j);
      } else if (!have_nonzero || a < min_nonzero) {
        min_nonzero = a;
        have_nonzero = true;
      }
    }
    if (zero_at < 0) return w;
    if (!have_nonzero) throw InternalError("witness vector lost every nonzero pairing");

    RationalVector repair = component_off_excluded(vectors[zero_at]);
    if (is_zero_vector(repair)) {
      throw PreconditionError("vector " + std::to_string(zero_at + 1) +
                              " projects into the excluded span");
    }
    // c w + repair keeps every nonzero pairing nonzero (|c d| exceeds the
    // repair's contribution by at least 1) and fixes vectors[zero_at], whose
    // new pairing is |repair|^2 > 0.
    Rational max_repair = 0;
    for (const RationalVector& v : vectors) {
      Rational a = abs_rational(dot(repair, v));
      if (a > max_repair) max_repair = a;
    }
    Rational c = (1 + max_repair) / min_nonzero;
    for (std::size_t i = 0; i < m; ++i) w[i] = c * w[i] + repair[i];
  }
  throw InternalError("witness repair loop failed to terminate");
}

GrowthFit fit_growth(const std::vector<double>& scales, const std::vector<double>& estimates,
                     const std::vector<double>& standard_errors) {
  const std::size_t n = scales.size();
  if (n < 3) throw InputError("growth fit needs at least 3 points");
  if (estimates.size() != n || standard_errors.size() != n) {
    throw InputError("growth fit inputs have mismatched lengths");
  }
  GrowthFit fit;
  fit.scales = scales;
  fit.estimates = estimates;
  fit.standard_errors = standard_errors;
  fit.log_estimates.reserve(n);
  std::vector<double> log_scales;
  log_scales.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(scales[i] > 0.0)) throw InputError("growth fit scales must be positive");
    if (!(estimates[i] > 0.0)) {
      throw InputError("estimate " + std::to_string(i + 1) +
                       " is not positive; cannot fit growth on a log scale");
    }
    log_scales.push_back(std::log(scales[i]));
    fit.log_estimates.push_back(std::log(estimates[i]));
  }

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += log_scales[i];
    mean_y += fit.log_estimates[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = log_scales[i] - mean_x;
    sxx += dx * dx;
    sxy += dx * (fit.log_estimates[i] - mean_y);
  }
  if (sxx == 0.0) throw InputError("growth fit scales are all equal");
  fit.slope = sxy / sxx;

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double predicted = mean_y + fit.slope * (log_scales[i] - mean_x);
    const double r = fit.log_estimates[i] - predicted;
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return fit;
}

namespace {

void require_slope_config(const SlopeConfig& config) {
  if (config.scale_count < 3) throw InputError("slope tests need at least 3 scales");
  if (!(config.scale_base > 1.0)) throw InputError("scale base must exceed 1");
  if (config.samples_per_scale == 0) throw InputError("sample count must be positive");
}

std::uint64_t scale_seed(std::uint64_t seed, int index) {
  return seed + 1000003ULL * static_cast<std::uint64_t>(index);
}

std::vector<RationalVector> gather(const VectorSet& set, const std::vector<int>& indices) {
  std::vector<RationalVector> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(set.vector(i));
  return out;
}

// Fixed direction e_1 in each k-block turns a rational direction u in Q^m
// into the sampling center u (x) e_1 in R^{mk}.
std::vector<double> block_center(const RationalVector& u, int k, double factor) {
  std::vector<double> center(u.size() * static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    center[i * static_cast<std::size_t>(k)] = to_double(u[i]) * factor;
  }
  return center;
}

double max_norm2(const VectorSet& set) {
  double best = 0.0;
  for (int j = 0; j < set.count(); ++j) {
    double sum = 0.0;
    for (const Rational& c : set.vector(j)) {
      const double v = to_double(c);
      sum += v * v;
    }
    best = std::max(best, std::sqrt(sum));
  }
  return best;
}

// Row-sum norm of the inverse of the square matrix with the given rows;
// bounds |x|_inf by norm * max_j |row_j . x|.
Rational inverse_infinity_norm(const std::vector<RationalVector>& rows) {
  const std::size_t m = rows.size();
  std::vector<RationalVector> columns(m, RationalVector(m));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) columns[c][r] = rows[r][c];
  }
  std::vector<Rational> row_sums(m, Rational(0));
  for (std::size_t c = 0; c < m; ++c) {
    RationalVector unit(m, Rational(0));
    unit[c] = 1;
    std::vector<Rational> solved = solve_in_basis(unit, columns);
    for (std::size_t i = 0; i < m; ++i) row_sums[i] += abs_rational(solved[i]);
  }
  Rational best = 0;
  for (const Rational& s : row_sums) {
    if (s > best) best = s;
  }
  return best;
}

void require_proper_flat(const VectorSet& set, const Flat& flat) {
  Flat closed = closure(flat.members, set);
  if (!(closed == flat) || closed.rank != flat.rank) {
    throw PreconditionError("index set is not a flat; its closure is larger");
  }
  if (flat.rank >= set.ambient_dim()) {
    throw PreconditionError("flat spans the ambient space; no transverse direction exists");
  }
  if (static_cast<int>(flat.members.size()) == set.count()) {
    throw PreconditionError("flat excludes no vector");
  }
}

}  // namespace

ScalingSlopeResult scaling_slope_test(const VectorSet& set, const IndexVector& ix,
                                      const SlopeConfig& config) {
  detail::validate_sizes(set, ix);
  require_slope_config(config);
  const int m = set.ambient_dim();
  const int k = set.block_dim();
  const int n = set.count();

  std::vector<int> all(n);
  for (int j = 0; j < n; ++j) all[j] = j;
  RationalVector w = find_w({}, standard_basis(m), gather(set, all));

  ScalingSlopeResult result;
  std::vector<Rational> exact_dots(n);
  for (int j = 0; j < n; ++j) {
    exact_dots[j] = dot(set.vector(j), w);
    if (exact_dots[j] == 0) throw InternalError("witness pairing is zero after repair");
    result.dots.push_back(std::abs(to_double(exact_dots[j])));
  }

  const double big = max_norm2(set);
  double min_dot = result.dots[0];
  for (double d : result.dots) min_dot = std::min(min_dot, d);
  const double eps = min_dot / (8.0 * big);

  // Shells of width big*eps around each |dot| catch every point of the
  // sampled cube whose offset has Euclidean norm <= eps * R, so hits are a
  // scale-independent fraction and the estimate grows like R^{mk}.
  std::vector<TestFunctionSpec> specs(n);
  std::vector<double> scales;
  std::vector<double> estimates;
  std::vector<double> errors;
  for (int i = 0; i < config.scale_count; ++i) {
    const double scale = std::pow(config.scale_base, i);
    for (int j = 0; j < n; ++j) {
      specs[j].kind = TestFunctionKind::Shell;
      specs[j].scale = scale;
      specs[j].c1 = result.dots[j] - big * eps;
      specs[j].c2 = result.dots[j] + big * eps;
    }
    SampleConfig sample;
    sample.samples = config.samples_per_scale;
    sample.seed = scale_seed(config.seed, i);
    sample.region_center = block_center(w, k, scale);
    sample.region_radius = eps * scale;
    sample.threads = config.threads;
    FormEstimate estimate = estimate_form(set, specs, sample);
    scales.push_back(scale);
    estimates.push_back(estimate.value);
    errors.push_back(estimate.standard_error);
  }

  result.fit = fit_growth(scales, estimates, errors);
  result.expected_slope = static_cast<double>(m * k);
  Rational norm_slope = 0;
  for (int j = 0; j < n; ++j) norm_slope += ix.p_inv[j] * k + ix.lambda[j];
  result.norm_product_slope = to_double(norm_slope);
  return result;
}

SubspaceSlopeResult subspace_slope_test(const VectorSet& set, const IndexVector& ix,
                                        const Flat& flat, const SlopeConfig& config) {
  detail::validate_sizes(set, ix);
  require_slope_config(config);
  require_proper_flat(set, flat);
  const int m = set.ambient_dim();
  const int k = set.block_dim();
  const int n = set.count();
  if (rank_of(set.vectors()) != m) {
    throw PreconditionError("subspace growth test requires the vectors to span");
  }

  std::vector<char> inside(n, 0);
  for (int j : flat.members) inside[j] = 1;
  std::vector<int> outside;
  for (int j = 0; j < n; ++j) {
    if (!inside[j]) outside.push_back(j);
  }

  const std::vector<RationalVector> member_vectors = gather(set, flat.members);
  RationalVector w = find_w(member_vectors, standard_basis(m), gather(set, outside));

  RationalVector anchor(m, Rational(0));
  if (!flat.members.empty()) {
    anchor = find_w({}, standard_basis(m), member_vectors);
  }

  std::vector<Rational> alpha(n);  // fixed pairings from the anchor
  std::vector<Rational> beta(n);   // growing pairings from the witness
  Rational max_alpha = 0;
  for (int j = 0; j < n; ++j) {
    alpha[j] = dot(set.vector(j), anchor);
    beta[j] = dot(set.vector(j), w);
    if (inside[j] && beta[j] != 0) throw InternalError("member pairing is not orthogonal");
    if (!inside[j] && beta[j] == 0) throw InternalError("outside pairing vanished");
    Rational a = abs_rational(alpha[j]);
    if (a > max_alpha) max_alpha = a;
  }
  Rational min_beta = 0;
  bool first_beta = true;
  for (int j : outside) {
    Rational b = abs_rational(beta[j]);
    if (first_beta || b < min_beta) min_beta = b;
    first_beta = false;
  }
  // Rescale the witness so the moving pairings dominate the fixed ones by 8x
  // at every scale >= 1.
  const Rational sigma = 8 * (max_alpha + 1) / min_beta;
  for (Rational& c : w) c *= sigma;
  for (int j = 0; j < n; ++j) beta[j] *= sigma;

  // Region radius: every admissible point has |row . x| <= 3/2 the band
  // center for each row of an exact basis, so |x|_inf <= inv_norm * that.
  std::vector<RationalVector> basis_rows;
  std::vector<char> basis_inside;
  {
    EchelonBasis span_basis(m);
    for (int j : flat.members) {
      if (span_basis.insert(set.vector(j))) {
        basis_rows.push_back(set.vector(j));
        basis_inside.push_back(1);
      }
    }
    for (int j : outside) {
      if (span_basis.insert(set.vector(j))) {
        basis_rows.push_back(set.vector(j));
        basis_inside.push_back(0);
      }
    }
    if (static_cast<int>(basis_rows.size()) != m) {
      throw InternalError("failed to assemble a spanning basis");
    }
  }
  const Rational inv_norm = inverse_infinity_norm(basis_rows);
  Rational max_fixed = 0;
  Rational max_moving = 0;
  for (std::size_t r = 0; r < basis_rows.size(); ++r) {
    const RationalVector& row = basis_rows[r];
    if (basis_inside[r]) {
      Rational band = Rational(3) * abs_rational(dot(row, anchor)) / 2;
      if (band > max_fixed) max_fixed = band;
    } else {
      Rational band = Rational(3) * abs_rational(dot(row, w)) / 2;
      if (band > max_moving) max_moving = band;
    }
  }
  const Rational eps_fixed = inv_norm * max_fixed;
  const Rational eps_moving = inv_norm * max_moving;

  std::vector<TestFunctionSpec> specs(n);
  std::vector<double> scales;
  std::vector<double> estimates;
  std::vector<double> errors;
  for (int i = 0; i < config.scale_count; ++i) {
    const double scale = std::pow(config.scale_base, i);
    for (int j = 0; j < n; ++j) {
      if (inside[j]) {
        const double a = std::abs(to_double(alpha[j]));
        specs[j].kind = TestFunctionKind::FixedAnnulus;
        specs[j].c1 = 0.5 * a;
        specs[j].c2 = 1.5 * a;
      } else {
        const double b = std::abs(to_double(beta[j]));
        specs[j].kind = TestFunctionKind::Shell;
        specs[j].scale = scale;
        specs[j].c1 = 0.5 * b;
        specs[j].c2 = 1.5 * b;
      }
    }
    SampleConfig sample;
    sample.samples = config.samples_per_scale;
    sample.seed = scale_seed(config.seed, i);
    sample.region_center.assign(static_cast<std::size_t>(m * k), 0.0);
    sample.region_radius = 1.05 * (to_double(eps_fixed) + to_double(eps_moving) * scale);
    sample.threads = config.threads;
    FormEstimate estimate = estimate_form(set, specs, sample);
    scales.push_back(scale);
    estimates.push_back(estimate.value);
    errors.push_back(estimate.standard_error);
  }

  SubspaceSlopeResult result;
  result.fit = fit_growth(scales, estimates, errors);
  result.expected_slope = static_cast<double>(k * (m - flat.rank));
  result.norm_exponent = 0;
  for (int j : outside) result.norm_exponent += ix.p_inv[j] * k + ix.lambda[j];
  result.expected_exponent = Rational(k * (m - flat.rank));
  result.gap = result.norm_exponent - result.expected_exponent;
  return result;
}

TranslationResult translation_test(const VectorSet& set, const IndexVector& ix, const Flat& flat,
                                   const SlopeConfig& config) {
  detail::validate_sizes(set, ix);
  require_slope_config(config);
  require_proper_flat(set, flat);
  const int m = set.ambient_dim();
  const int k = set.block_dim();
  const int n = set.count();

  std::vector<char> inside(n, 0);
  for (int j : flat.members) inside[j] = 1;
  std::vector<int> outside;
  for (int j = 0; j < n; ++j) {
    if (!inside[j]) outside.push_back(j);
  }

  const std::vector<RationalVector> member_vectors = gather(set, flat.members);
  RationalVector w = find_w(member_vectors, standard_basis(m), gather(set, outside));
  RationalVector anchor(m, Rational(0));
  if (!flat.members.empty()) {
    anchor = find_w({}, standard_basis(m), member_vectors);
  }

  std::vector<Rational> alpha(n);
  std::vector<Rational> beta(n);
  Rational max_alpha = 0;
  for (int j = 0; j < n; ++j) {
    alpha[j] = dot(set.vector(j), anchor);
    beta[j] = dot(set.vector(j), w);
    Rational a = abs_rational(alpha[j]);
    if (a > max_alpha) max_alpha = a;
  }
  Rational min_beta = 0;
  bool first_beta = true;
  for (int j : outside) {
    Rational b = abs_rational(beta[j]);
    if (first_beta || b < min_beta) min_beta = b;
    first_beta = false;
  }
  const Rational sigma = 8 * (max_alpha + 1) / min_beta;
  for (Rational& c : w) c *= sigma;
  for (int j = 0; j < n; ++j) beta[j] *= sigma;

  const double ball_radius = 1.0;
  const double big = max_norm2(set);
  const int dim = m * k;
  // Twice the certified all-hit radius, so hits stay strictly inside (0, 1).
  const double region_radius = 2.0 * ball_radius / (big * std::sqrt(static_cast<double>(dim)));

  std::vector<TestFunctionSpec> specs(n);
  std::vector<double> scales;
  std::vector<double> estimates;
  std::vector<double> errors;
  for (int i = 0; i < config.scale_count; ++i) {
    const double shift = std::pow(config.scale_base, i);
    for (int j = 0; j < n; ++j) {
      specs[j].kind = TestFunctionKind::TranslatedBall;
      specs[j].center = to_double(alpha[j]) + shift * to_double(beta[j]);
      specs[j].radius = ball_radius;
    }
    SampleConfig sample;
    sample.samples = config.samples_per_scale;
    sample.seed = scale_seed(config.seed, i);
    sample.region_center.resize(static_cast<std::size_t>(dim));
    {
      std::vector<double> center = block_center(anchor, k, 1.0);
      std::vector<double> moving = block_center(w, k, shift);
      for (int c = 0; c < dim; ++c) sample.region_center[c] = center[c] + moving[c];
    }
    sample.region_radius = region_radius;
    sample.threads = config.threads;
    FormEstimate estimate = estimate_form(set, specs, sample);
    scales.push_back(shift);
    estimates.push_back(estimate.value);
    errors.push_back(estimate.standard_error);
  }

  TranslationResult result;
  result.fit = fit_growth(scales, estimates, errors);
  result.lambda_sum_outside = 0;
  for (int j : outside) result.lambda_sum_outside += ix.lambda[j];
  return result;
}

IntegrabilityReport integrability_test(const VectorSet& set, const IndexVector& ix,
                                       double epsilon, long terms) {
  detail::validate_sizes(set, ix);
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (terms < 10) throw InputError("need at least 10 series terms");
  auto [balanced, residual] = check_scaling(set, ix);
  if (!balanced) {
    throw PreconditionError("integrability probe requires scaling balance; residual " +
                            rational_string(residual));
  }

  Rational p_sum = 0;
  for (const Rational& x : ix.p_inv) p_sum += x;

  IntegrabilityReport report;
  report.epsilon = epsilon;
  report.terms = terms;
  report.p_inv_sum = to_double(p_sum);
  report.series_exponent = (1.0 + epsilon) * report.p_inv_sum;

  const long decade_start = std::max(1L, terms / 10);
  double sum = 0.0;
  double at_decade_start = 0.0;
  for (long l = 1; l <= terms; ++l) {
    sum += std::pow(static_cast<double>(l), -report.series_exponent);
    if (l == decade_start) at_decade_start = sum;
  }
  report.partial_sum = sum;
  report.decade_growth = (sum - at_decade_start) / at_decade_start;
  report.diverging = report.decade_growth > 0.01;

  // Doubles are dyadic rationals, so the exponent comparison is exact.
  const Rational exact_exponent = (Rational(1) + Rational(epsilon)) * p_sum;
  report.exponent_divergent = exact_exponent <= 1;

  report.norm_bound = std::pow(sum, report.p_inv_sum);
  return report;
}

}  // namespace blform
