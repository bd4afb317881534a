#include "blform/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "blform/exceptions.hpp"

namespace blform {

namespace {

using nlohmann::json;

Rational rational_at(const json& value, const std::string& path) {
  if (value.is_number_integer()) {
    return Rational(value.get<long long>());
  }
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const InputError& error) {
      throw InputError(path + ": " + error.what());
    }
  }
  throw InputError(path + ": expected a rational as \"a\", \"a/b\", or an integer");
}

std::vector<Rational> rational_array_at(const json& value, const std::string& path,
                                        std::size_t expected) {
  if (!value.is_array()) throw InputError(path + ": expected an array");
  if (value.size() != expected) {
    throw InputError(path + ": expected " + std::to_string(expected) + " entries, got " +
                     std::to_string(value.size()));
  }
  std::vector<Rational> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    out.push_back(rational_at(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

int positive_int_at(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw InputError("missing required key '" + key + "'");
  const json& value = doc.at(key);
  if (!value.is_number_integer()) throw InputError(key + ": expected an integer");
  const long long v = value.get<long long>();
  if (v < 1 || v > 1'000'000) throw InputError(key + ": must be a positive integer");
  return static_cast<int>(v);
}

std::string string_at(const json& doc, const std::string& key) {
  if (!doc.contains(key)) return "";
  const json& value = doc.at(key);
  if (!value.is_string()) throw InputError(key + ": expected a string");
  return value.get<std::string>();
}

}  // namespace

ParsedInstance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& error) {
    throw InputError(std::string("invalid JSON: ") + error.what());
  }
  if (!doc.is_object()) throw InputError("instance document must be a JSON object");

  static const char* kKnown[] = {"schema_version", "name", "notes", "m",
                                 "k",              "vectors", "p_inv", "lambda"};
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : kKnown) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw InputError("unknown key '" + item.key() + "'");
  }

  if (doc.contains("schema_version")) {
    const json& version = doc.at("schema_version");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
      throw InputError("unsupported schema_version; this reader handles version " +
                       std::to_string(kSchemaVersion));
    }
  }

  const int m = positive_int_at(doc, "m");
  const int k = positive_int_at(doc, "k");

  if (!doc.contains("vectors")) throw InputError("missing required key 'vectors'");
  const json& vectors_json = doc.at("vectors");
  if (!vectors_json.is_array() || vectors_json.empty()) {
    throw InputError("vectors: expected a non-empty array");
  }
  std::vector<RationalVector> vectors;
  vectors.reserve(vectors_json.size());
  for (std::size_t i = 0; i < vectors_json.size(); ++i) {
    vectors.push_back(rational_array_at(vectors_json[i],
                                        "vectors[" + std::to_string(i) + "]",
                                        static_cast<std::size_t>(m)));
  }
  VectorSet set = VectorSet::create(m, k, std::move(vectors));
  const std::size_t n = static_cast<std::size_t>(set.count());

  std::optional<IndexVector> indices;
  const bool has_p = doc.contains("p_inv");
  const bool has_lambda = doc.contains("lambda");
  if (has_p != has_lambda) {
    throw InputError("p_inv and lambda must be given together");
  }
  if (has_p) {
    IndexVector ix;
    ix.p_inv = rational_array_at(doc.at("p_inv"), "p_inv", n);
    ix.lambda = rational_array_at(doc.at("lambda"), "lambda", n);
    ix.k = k;
    indices = std::move(ix);
  }

  ParsedInstance instance{std::move(set), std::move(indices), string_at(doc, "name"),
                          string_at(doc, "notes"), {}};
  if (instance.set.has_collinear_pair()) {
    auto [i, j] = instance.set.first_collinear_pair();
    instance.warnings.push_back("vectors " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1) +
                                " are collinear; necessity checks will refuse this set");
  }
  return instance;
}

ParsedInstance load_instance_file(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw InputError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse_instance(buffer.str());
}

std::string write_instance(const VectorSet& set, const std::optional<IndexVector>& indices,
                           const std::string& name, const std::string& notes) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = name;
  doc["notes"] = notes;
  doc["m"] = set.ambient_dim();
  doc["k"] = set.block_dim();
  json vectors = json::array();
  for (int j = 0; j < set.count(); ++j) vectors.push_back(rational_array_json(set.vector(j)));
  doc["vectors"] = std::move(vectors);
  if (indices) {
    doc["p_inv"] = rational_array_json(indices->p_inv);
    doc["lambda"] = rational_array_json(indices->lambda);
  }
  return doc.dump(2) + "\n";
}

std::string write_report(nlohmann::json body) {
  body["schema_version"] = kSchemaVersion;
  return body.dump(2) + "\n";
}

nlohmann::json rational_json(const Rational& value) { return rational_string(value); }

nlohmann::json rational_array_json(const std::vector<Rational>& values) {
  json out = json::array();
  for (const Rational& value : values) out.push_back(rational_json(value));
  return out;
}

nlohmann::json members_json(const std::vector<int>& members) {
  json out = json::array();
  for (int member : members) out.push_back(member + 1);
  return out;
}

nlohmann::json flat_json(const Flat& flat) {
  json out;
  out["members"] = members_json(flat.members);
  out["rank"] = flat.rank;
  return out;
}

nlohmann::json violation_json(const Violation& violation) {
  json out;
  out["constraint"] = violation.constraint;
  if (violation.subset) out["subset"] = members_json(*violation.subset);
  if (violation.index) out["index"] = *violation.index + 1;
  if (violation.lhs) out["lhs"] = rational_json(*violation.lhs);
  out["relation"] = relation_string(violation.relation);
  if (violation.rhs) out["rhs"] = rational_json(*violation.rhs);
  out["message"] = violation.message;
  return out;
}

nlohmann::json verdict_json(const Verdict& verdict) {
  json out;
  out["status"] = status_string(verdict.status);
  out["generic"] = verdict.generic;
  json sufficient = json::array();
  for (const Violation& v : verdict.sufficient_violations) sufficient.push_back(violation_json(v));
  out["sufficient_violations"] = std::move(sufficient);
  json necessary = json::array();
  for (const Violation& v : verdict.necessary_violations) necessary.push_back(violation_json(v));
  out["necessary_violations"] = std::move(necessary);
  return out;
}

nlohmann::json beta_node_json(const BetaNode& node) {
  json out;
  out["beta"] = rational_array_json(node.beta);
  out["alpha_path"] = node.alpha_path;
  out["gamma"] = rational_json(node.gamma);
  if (node.branch_index >= 0) out["branch_index"] = node.branch_index + 1;
  if (node.target_index >= 0) out["target_index"] = node.target_index + 1;
  if (!node.stage_permutation.empty()) {
    out["stage_permutation"] = members_json(node.stage_permutation);
  }
  json children = json::array();
  for (const BetaNode& child : node.children) children.push_back(beta_node_json(child));
  out["children"] = std::move(children);
  return out;
}

nlohmann::json beta_family_json(const BetaFamily& family) {
  json out;
  out["root_lambda"] = rational_array_json(family.root_lambda);
  out["permutation"] = members_json(family.permutation);
  out["root"] = beta_node_json(family.root);
  json leaves = json::array();
  for (const BetaLeaf& leaf : family.leaves) {
    json entry;
    entry["beta"] = rational_array_json(leaf.beta);
    entry["alpha_path"] = leaf.alpha_path;
    leaves.push_back(std::move(entry));
  }
  out["leaves"] = std::move(leaves);
  out["depth"] = family.depth;
  return out;
}

nlohmann::json constraint_system_json(const ConstraintSystem& system) {
  json out;
  out["n"] = system.n;
  out["m"] = system.m;
  out["dimension"] = system.dimension();
  json rows = json::array();
  for (const ConstraintRow& row : system.rows) {
    json entry;
    entry["id"] = row.id;
    entry["source"] = row.source;
    if (row.flat) entry["flat"] = members_json(*row.flat);
    if (row.index) entry["index"] = *row.index + 1;
    entry["coeffs"] = rational_array_json(row.coeffs);
    entry["rhs"] = rational_json(row.rhs);
    entry["trivial"] = row.trivial;
    entry["scaling_parallel"] = row.scaling_parallel;
    rows.push_back(std::move(entry));
  }
  out["rows"] = std::move(rows);
  out["row_count"] = system.rows.size();
  return out;
}

nlohmann::json vertex_json(const Vertex& vertex) {
  json out;
  out["coordinates"] = rational_array_json(vertex.coordinates);
  out["tight_rows"] = vertex.tight_rows;
  return out;
}

nlohmann::json growth_fit_json(const GrowthFit& fit) {
  json out;
  out["scales"] = fit.scales;
  out["estimates"] = fit.estimates;
  out["standard_errors"] = fit.standard_errors;
  out["log_estimates"] = fit.log_estimates;
  out["slope"] = fit.slope;
  out["slope_stderr"] = fit.slope_stderr;
  return out;
}

nlohmann::json integrability_json(const IntegrabilityReport& report) {
  json out;
  out["epsilon"] = report.epsilon;
  out["terms"] = report.terms;
  out["p_inv_sum"] = report.p_inv_sum;
  out["series_exponent"] = report.series_exponent;
  out["partial_sum"] = report.partial_sum;
  out["decade_growth"] = report.decade_growth;
  out["diverging"] = report.diverging;
  out["exponent_divergent"] = report.exponent_divergent;
  out["norm_bound"] = report.norm_bound;
  return out;
}

}  // namespace blform
