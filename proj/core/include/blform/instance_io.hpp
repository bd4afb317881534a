#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blform/decomposition.hpp"
#include "blform/estimator.hpp"
#include "blform/feasibility.hpp"
#include "blform/polytope.hpp"

namespace blform {

inline constexpr int kSchemaVersion = 1;

/// Parsed instance file: the vector set, optional exponent data, metadata,
/// and non-fatal warnings (currently only collinear pairs, which are legal
/// until a necessity check is requested).
struct ParsedInstance {
  VectorSet set;
  std::optional<IndexVector> indices;
  std::string name;
  std::string notes;
  std::vector<std::string> warnings;
};

/// Parses and validates an instance document. All rationals are strings
/// ("a" or "a/b") or JSON integers; anything else is rejected with the JSON
/// path in the message. Throws InputError.
ParsedInstance parse_instance(const std::string& text);

ParsedInstance load_instance_file(const std::string& path);

/// Canonical instance document (sorted keys, reduced rationals).
std::string write_instance(const VectorSet& set, const std::optional<IndexVector>& indices,
                           const std::string& name, const std::string& notes);

/// Canonical report serialization: key-sorted JSON, rationals as reduced
/// strings, schema_version stamped. parse(write(x)) == x for every reachable
/// report document.
std::string write_report(nlohmann::json body);

// JSON builders shared by the CLI and the report writer. Index data is
// serialized 1-based to match the notation in the documentation.
nlohmann::json rational_json(const Rational& value);
nlohmann::json rational_array_json(const std::vector<Rational>& values);
nlohmann::json members_json(const std::vector<int>& members);  // 0-based in, 1-based out
nlohmann::json flat_json(const Flat& flat);
nlohmann::json violation_json(const Violation& violation);
nlohmann::json verdict_json(const Verdict& verdict);
nlohmann::json beta_node_json(const BetaNode& node);
nlohmann::json beta_family_json(const BetaFamily& family);
nlohmann::json constraint_system_json(const ConstraintSystem& system);
nlohmann::json vertex_json(const Vertex& vertex);
nlohmann::json growth_fit_json(const GrowthFit& fit);
nlohmann::json integrability_json(const IntegrabilityReport& report);

}  // namespace blform
