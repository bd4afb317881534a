#include "blform/polytope.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "blform/exceptions.hpp"
#include "blform/linalg.hpp"
#include "blform/lp.hpp"

namespace blform {

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

bool all_zero(const std::vector<Rational>& coeffs) {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c == 0; });
}

// Proportional to the scaling equality sum z = m: constant coefficient c != 0
// with rhs = c*m. Such a row's slack vanishes identically on the scaling
// hyperplane.
bool parallel_to_scaling(const std::vector<Rational>& coeffs, const Rational& rhs, int m) {
  const Rational& c = coeffs.front();
  if (c == 0) return false;
  for (const Rational& entry : coeffs) {
    if (entry != c) return false;
  }
  return rhs == c * m;
}

Rational row_slack(const ConstraintRow& row, const std::vector<Rational>& point) {
  Rational value = 0;
  for (std::size_t j = 0; j < row.coeffs.size(); ++j) value += row.coeffs[j] * point[j];
  return value - row.rhs;
}

void finalize_row(ConstraintRow& row, int m) {
  row.trivial = all_zero(row.coeffs) && row.rhs <= 0;
  row.scaling_parallel = parallel_to_scaling(row.coeffs, row.rhs, m);
}

}  // namespace

ConstraintSystem build_system(const VectorSet& set, int flat_cap) {
  const int n = set.count();
  const int m = set.ambient_dim();
  const int d = 2 * n;
  ConstraintSystem system;
  system.n = n;
  system.m = m;

  auto add = [&](ConstraintRow row) {
    finalize_row(row, m);
    system.rows.push_back(std::move(row));
  };

  ConstraintRow scaling_up;
  scaling_up.id = "scaling+";
  scaling_up.source = "scaling";
  scaling_up.coeffs.assign(d, Rational(1));
  scaling_up.rhs = m;
  add(std::move(scaling_up));

  ConstraintRow scaling_down;
  scaling_down.id = "scaling-";
  scaling_down.source = "scaling";
  scaling_down.coeffs.assign(d, Rational(-1));
  scaling_down.rhs = -m;
  add(std::move(scaling_down));

  for (const Flat& flat : enumerate_flats(set, flat_cap)) {
    std::vector<char> inside(n, 0);
    for (int j : flat.members) inside[j] = 1;

    ConstraintRow subspace;
    subspace.id = "subspace" + members_text(flat.members);
    subspace.source = "subspace";
    subspace.flat = flat.members;
    subspace.coeffs.assign(d, Rational(0));
    for (int j = 0; j < n; ++j) {
      if (!inside[j]) {
        subspace.coeffs[j] = 1;
        subspace.coeffs[n + j] = 1;
      }
    }
    subspace.rhs = m - flat.rank;
    add(std::move(subspace));

    ConstraintRow lambda;
    lambda.id = "lambda" + members_text(flat.members);
    lambda.source = "lambda";
    lambda.flat = flat.members;
    lambda.coeffs.assign(d, Rational(0));
    for (int j = 0; j < n; ++j) {
      if (!inside[j]) lambda.coeffs[n + j] = 1;
    }
    lambda.rhs = 0;
    add(std::move(lambda));
  }

  ConstraintRow integrability;
  integrability.id = "integrability";
  integrability.source = "integrability";
  integrability.coeffs.assign(d, Rational(0));
  for (int j = 0; j < n; ++j) integrability.coeffs[j] = 1;
  integrability.rhs = 1;
  add(std::move(integrability));

  for (int j = 0; j < n; ++j) {
    ConstraintRow lower;
    lower.id = "x" + std::to_string(j + 1) + ">=0";
    lower.source = "box";
    lower.index = j;
    lower.coeffs.assign(d, Rational(0));
    lower.coeffs[j] = 1;
    lower.rhs = 0;
    add(std::move(lower));

    ConstraintRow upper;
    upper.id = "x" + std::to_string(j + 1) + "<=1";
    upper.source = "box";
    upper.index = j;
    upper.coeffs.assign(d, Rational(0));
    upper.coeffs[j] = -1;
    upper.rhs = -1;
    add(std::move(upper));
  }

  return system;
}

void append_lambda_zero_slice(ConstraintSystem& system) {
  const int n = system.n;
  const int d = 2 * n;
  for (int j = 0; j < n; ++j) {
    ConstraintRow up;
    up.id = "mu" + std::to_string(j + 1) + ">=0";
    up.source = "slice";
    up.index = j;
    up.coeffs.assign(d, Rational(0));
    up.coeffs[n + j] = 1;
    up.rhs = 0;
    finalize_row(up, system.m);
    system.rows.push_back(std::move(up));

    ConstraintRow down;
    down.id = "mu" + std::to_string(j + 1) + "<=0";
    down.source = "slice";
    down.index = j;
    down.coeffs.assign(d, Rational(0));
    down.coeffs[n + j] = -1;
    down.rhs = 0;
    finalize_row(down, system.m);
    system.rows.push_back(std::move(down));
  }
}

SystemCheck feasible(const ConstraintSystem& system, const std::vector<Rational>& point) {
  if (static_cast<int>(point.size()) != system.dimension()) {
    throw InputError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                     std::to_string(system.dimension()));
  }
  SystemCheck check;
  for (const ConstraintRow& row : system.rows) {
    if (row_slack(row, point) < 0) check.violated_rows.push_back(row.id);
  }
  check.satisfies_all = check.violated_rows.empty();
  return check;
}

std::vector<Rational> index_point(const VectorSet& set, const IndexVector& ix) {
  detail::validate_sizes(set, ix);
  const int n = set.count();
  std::vector<Rational> z;
  z.reserve(2 * n);
  for (int j = 0; j < n; ++j) z.push_back(ix.p_inv[j]);
  for (int j = 0; j < n; ++j) z.push_back(ix.lambda[j] / ix.k);
  return z;
}

namespace {

struct Hyperplane {
  std::vector<Rational> normal;
  Rational offset;
};

// Rows paired as {a.z >= b, -a.z >= -b} pin the hyperplane a.z = b. Returns
// the deduplicated hyperplanes and marks the member rows.
std::vector<Hyperplane> equality_pairs(const ConstraintSystem& system,
                                       std::vector<char>& is_equality_member) {
  const std::size_t count = system.rows.size();
  std::set<std::vector<Rational>> seen;
  std::vector<Hyperplane> planes;
  for (std::size_t i = 0; i < count; ++i) {
    const ConstraintRow& a = system.rows[i];
    if (all_zero(a.coeffs)) continue;
    for (std::size_t j = i + 1; j < count; ++j) {
      const ConstraintRow& b = system.rows[j];
      if (a.rhs != -b.rhs) continue;
      bool negated = true;
      for (std::size_t c = 0; c < a.coeffs.size(); ++c) {
        if (a.coeffs[c] != -b.coeffs[c]) {
          negated = false;
          break;
        }
      }
      if (!negated) continue;
      is_equality_member[i] = 1;
      is_equality_member[j] = 1;
      // Canonical form: scale so the first nonzero coefficient is 1.
      Hyperplane plane{a.coeffs, a.rhs};
      Rational lead = 0;
      for (const Rational& c : plane.normal) {
        if (c != 0) {
          lead = c;
          break;
        }
      }
      for (Rational& c : plane.normal) c /= lead;
      plane.offset = plane.offset / lead;
      std::vector<Rational> key = plane.normal;
      key.push_back(plane.offset);
      if (seen.insert(std::move(key)).second) planes.push_back(std::move(plane));
    }
  }
  return planes;
}

std::optional<std::vector<Rational>> solve_square(
    const std::vector<const std::vector<Rational>*>& normals,
    const std::vector<const Rational*>& offsets, int d) {
  std::vector<RationalVector> columns(d, RationalVector(normals.size()));
  RationalVector target(normals.size());
  for (std::size_t r = 0; r < normals.size(); ++r) {
    for (int c = 0; c < d; ++c) columns[c][r] = (*normals[r])[c];
    target[r] = *offsets[r];
  }
  try {
    return solve_in_basis(target, columns);
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<Vertex> enumerate_vertices(const ConstraintSystem& system, int dim_cap) {
  const int d = system.dimension();
  if (d > dim_cap) {
    throw InputError("dimension " + std::to_string(d) +
                     " exceeds the vertex enumeration cap " + std::to_string(dim_cap) +
                     "; raise the cap to proceed");
  }

  std::vector<char> is_equality_member(system.rows.size(), 0);
  std::vector<Hyperplane> planes = equality_pairs(system, is_equality_member);

  // Base active set: one normal per independent equality hyperplane.
  EchelonBasis base(d);
  std::vector<const std::vector<Rational>*> normals;
  std::vector<const Rational*> offsets;
  for (const Hyperplane& plane : planes) {
    if (base.insert(plane.normal)) {
      normals.push_back(&plane.normal);
      offsets.push_back(&plane.offset);
    }
  }

  std::vector<const ConstraintRow*> candidates;
  for (std::size_t i = 0; i < system.rows.size(); ++i) {
    const ConstraintRow& row = system.rows[i];
    if (is_equality_member[i] || row.trivial || all_zero(row.coeffs)) continue;
    candidates.push_back(&row);
  }

  std::map<std::vector<Rational>, std::vector<std::string>> found;
  auto record = [&]() {
    std::optional<std::vector<Rational>> point = solve_square(normals, offsets, d);
    if (!point || !feasible(system, *point).satisfies_all) return;
    if (found.count(*point)) return;
    std::vector<std::string> tight;
    for (const ConstraintRow& row : system.rows) {
      if (row_slack(row, *point) == 0) tight.push_back(row.id);
    }
    found.emplace(std::move(*point), std::move(tight));
  };

  auto dfs = [&](auto&& self, std::size_t start, const EchelonBasis& basis) -> void {
    if (basis.rank() == d) {
      record();
      return;
    }
    const int needed = d - basis.rank();
    for (std::size_t i = start; i < candidates.size(); ++i) {
      if (static_cast<int>(candidates.size() - i) < needed) break;
      EchelonBasis grown = basis;
      if (!grown.insert(candidates[i]->coeffs)) continue;
      normals.push_back(&candidates[i]->coeffs);
      offsets.push_back(&candidates[i]->rhs);
      self(self, i + 1, grown);
      normals.pop_back();
      offsets.pop_back();
    }
  };
  dfs(dfs, 0, base);

  std::vector<Vertex> vertices;
  vertices.reserve(found.size());
  for (auto& [coords, tight] : found) {
    vertices.push_back(Vertex{coords, std::move(tight)});
  }
  return vertices;
}

InteriorPoint chebyshev_like_interior_point(const ConstraintSystem& system) {
  const int d = system.dimension();
  LpProblem lp;
  lp.variable_count = d + 1;  // z plus the slack floor t
  lp.maximize = true;
  lp.objective.assign(d + 1, Rational(0));
  lp.objective[d] = 1;

  LpRow scaling;
  scaling.coeffs.assign(d + 1, Rational(1));
  scaling.coeffs[d] = 0;
  scaling.relation = LpRelation::Equal;
  scaling.rhs = system.m;
  lp.rows.push_back(std::move(scaling));

  std::vector<const ConstraintRow*> slack_rows;
  for (const ConstraintRow& row : system.rows) {
    if (row.trivial || row.scaling_parallel) continue;
    slack_rows.push_back(&row);
    LpRow lp_row;
    lp_row.coeffs = row.coeffs;
    lp_row.coeffs.push_back(Rational(-1));
    lp_row.relation = LpRelation::GreaterEqual;
    lp_row.rhs = row.rhs;
    lp.rows.push_back(std::move(lp_row));
  }

  LpSolution solution = solve_lp(lp);
  if (solution.status == LpStatus::Unbounded) {
    throw InternalError("interior-point slack is unbounded; the box rows should prevent this");
  }
  if (solution.status == LpStatus::Infeasible) {
    throw InternalError("interior-point program is infeasible; the scaling hyperplane is never empty");
  }

  InteriorPoint interior;
  interior.point.assign(solution.values.begin(), solution.values.begin() + d);
  interior.min_slack = solution.objective_value;
  interior.found = interior.min_slack > 0;

  // The reported slack must be exactly what the point achieves.
  Rational scaling_sum = 0;
  for (const Rational& c : interior.point) scaling_sum += c;
  if (scaling_sum != system.m) {
    throw InternalError("interior-point solution left the scaling hyperplane");
  }
  bool first = true;
  Rational observed;
  for (const ConstraintRow* row : slack_rows) {
    Rational slack = row_slack(*row, interior.point);
    if (first || slack < observed) observed = slack;
    first = false;
  }
  if (!first && observed != interior.min_slack) {
    throw InternalError("interior-point slack mismatch: optimizer reported " +
                        rational_string(interior.min_slack) + ", rows give " +
                        rational_string(observed));
  }
  return interior;
}

}  // namespace blform
