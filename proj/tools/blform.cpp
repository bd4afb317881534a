// Command-line front end: one subcommand per capability, instance files in,
// canonical JSON reports (or CSV for growth fits) out.
//
// Exit codes: 0 verdict computed (feasibility outcome is data, not failure),
// 1 precondition or internal failure, 2 input or usage error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "blform/decomposition.hpp"
#include "blform/estimator.hpp"
#include "blform/exceptions.hpp"
#include "blform/feasibility.hpp"
#include "blform/flats.hpp"
#include "blform/instance_io.hpp"
#include "blform/polytope.hpp"
#include "blform/rational.hpp"

namespace {

using nlohmann::json;

void emit(const std::string& output_path, const std::string& text) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) {
    throw blform::InputError("cannot write '" + output_path + "'");
  }
  out << text;
}

const blform::IndexVector& require_indices(const blform::ParsedInstance& instance) {
  if (!instance.indices) {
    throw blform::InputError("the instance has no p_inv/lambda block; this subcommand needs one");
  }
  return *instance.indices;
}

// 1-based user-facing indices to sorted unique 0-based members.
std::vector<int> parse_members(const std::vector<int>& one_based, int n) {
  std::vector<int> members;
  for (int index : one_based) {
    if (index < 1 || index > n) {
      throw blform::InputError("flat member " + std::to_string(index) +
                               " is out of range 1.." + std::to_string(n));
    }
    members.push_back(index - 1);
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

blform::Flat make_flat(const blform::VectorSet& set, const std::vector<int>& members) {
  std::vector<blform::RationalVector> picked;
  for (int index : members) picked.push_back(set.vector(index));
  return blform::Flat{members, blform::rank_of(picked)};
}

// Sufficiency-side verdict always; necessity side merged in when the set has
// no collinear pair (the necessity conditions assume none). Returns the note
// explaining a skipped necessity side through `necessity_note`.
blform::Verdict combined_verdict(const blform::VectorSet& set, const blform::IndexVector& ix,
                                 std::string& necessity_note) {
  blform::Verdict verdict = blform::check_sufficient(set, ix);
  if (set.has_collinear_pair()) {
    auto [i, j] = set.first_collinear_pair();
    necessity_note = "vectors " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                     " are collinear; the necessity-side conditions were not evaluated";
    return verdict;
  }
  blform::Verdict necessary = blform::check_necessary(set, ix);
  verdict.necessary_violations = necessary.necessary_violations;
  if (verdict.status == blform::FeasibilityStatus::Infeasible &&
      necessary.status == blform::FeasibilityStatus::NecessaryOnly) {
    verdict.status = blform::FeasibilityStatus::NecessaryOnly;
  }
  return verdict;
}

bool any_constraint(const std::vector<blform::Violation>& violations, const std::string& name) {
  for (const auto& violation : violations) {
    if (violation.constraint == name) return true;
  }
  return false;
}

json run_generic(const blform::ParsedInstance& instance, bool extend) {
  const bool generic = blform::is_generic(instance.set);
  json body{{"subcommand", "generic"}, {"name", instance.name}, {"generic", generic}};
  if (extend) {
    if (generic && instance.set.ambient_dim() >= 2) {
      body["extension"] = blform::rational_array_json(blform::extend_generic(instance.set));
    } else {
      body["extension"] = nullptr;
      body["note"] = generic ? "extension needs ambient dimension at least 2"
                             : "the set is not generic; no extension exists";
    }
  }
  return body;
}

json run_check(const blform::ParsedInstance& instance, const std::string& mode) {
  const blform::IndexVector& ix = require_indices(instance);
  json body{{"subcommand", "check"}, {"name", instance.name}, {"mode", mode}};
  std::string note;
  blform::Verdict verdict;
  if (mode == "sufficient") {
    verdict = blform::check_sufficient(instance.set, ix);
  } else if (mode == "necessary") {
    verdict = blform::check_necessary(instance.set, ix);
  } else {
    verdict = combined_verdict(instance.set, ix, note);
  }
  body["verdict"] = blform::verdict_json(verdict);
  if (!note.empty()) body["necessity_note"] = note;
  return body;
}

json run_classify(const blform::ParsedInstance& instance) {
  const blform::IndexVector& ix = require_indices(instance);
  std::string note;
  const blform::Verdict verdict = combined_verdict(instance.set, ix, note);
  const auto& sufficient = verdict.sufficient_violations;
  json body{{"subcommand", "classify"},
            {"name", instance.name},
            {"status", blform::status_string(verdict.status)},
            {"generic", verdict.generic},
            {"conditions",
             json{{"exponent_open_range", !any_constraint(sufficient, "exponent_open_range")},
                  {"scaling", !any_constraint(sufficient, "scaling")},
                  {"subspace_strict", !any_constraint(sufficient, "subspace_strict")},
                  {"lambda_nonneg", !any_constraint(sufficient, "lambda_nonneg")},
                  {"integrability", !any_constraint(sufficient, "integrability")}}},
            {"sufficient_violation_count", sufficient.size()},
            {"necessary_violation_count", verdict.necessary_violations.size()}};
  if (!note.empty()) body["necessity_note"] = note;
  return body;
}

json run_flats(const blform::ParsedInstance& instance, int flat_cap) {
  const auto flats = blform::enumerate_flats(instance.set, flat_cap);
  json listing = json::array();
  for (const auto& flat : flats) listing.push_back(blform::flat_json(flat));
  return json{{"subcommand", "flats"},
              {"name", instance.name},
              {"count", flats.size()},
              {"flats", listing}};
}

json run_decompose(const blform::ParsedInstance& instance) {
  const blform::IndexVector& ix = require_indices(instance);
  const blform::BetaFamily family = blform::decompose(instance.set, ix);
  json shifts = json::array();
  for (const auto& shift : blform::weight_shift_report(family)) {
    shifts.push_back(json{{"alpha_path", shift.alpha_path},
                          {"shift", blform::rational_array_json(shift.shift)}});
  }
  return json{{"subcommand", "decompose"},
              {"name", instance.name},
              {"family", blform::beta_family_json(family)},
              {"weight_shifts", shifts}};
}

json run_vertices(const blform::ParsedInstance& instance, int flat_cap, int vertex_cap,
                  bool slice_lambda_zero) {
  blform::ConstraintSystem system = blform::build_system(instance.set, flat_cap);
  if (slice_lambda_zero) blform::append_lambda_zero_slice(system);
  const auto vertices = blform::enumerate_vertices(system, vertex_cap);
  json listing = json::array();
  for (const auto& vertex : vertices) listing.push_back(blform::vertex_json(vertex));
  json body{{"subcommand", "vertices"},
            {"name", instance.name},
            {"system", blform::constraint_system_json(system)},
            {"count", vertices.size()},
            {"vertices", listing}};
  if (instance.indices) {
    const auto point = blform::index_point(instance.set, *instance.indices);
    const auto check = blform::feasible(system, point);
    body["index_point"] = json{{"coordinates", blform::rational_array_json(point)},
                               {"satisfies_all", check.satisfies_all},
                               {"violated_rows", check.violated_rows}};
  }
  return body;
}

json run_interior_point(const blform::ParsedInstance& instance, int flat_cap) {
  const blform::ConstraintSystem system = blform::build_system(instance.set, flat_cap);
  const blform::InteriorPoint interior = blform::chebyshev_like_interior_point(system);
  return json{{"subcommand", "interior-point"},
              {"name", instance.name},
              {"found", interior.found},
              {"point", blform::rational_array_json(interior.point)},
              {"min_slack", blform::rational_json(interior.min_slack)}};
}

std::string growth_csv(const blform::GrowthFit& fit, const std::string& trailer) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "scale,estimate,standard_error,log_estimate\n";
  for (std::size_t i = 0; i < fit.scales.size(); ++i) {
    out << fit.scales[i] << ',' << fit.estimates[i] << ',' << fit.standard_errors[i] << ','
        << fit.log_estimates[i] << '\n';
  }
  out << "# slope=" << fit.slope << " slope_stderr=" << fit.slope_stderr;
  if (!trailer.empty()) out << ' ' << trailer;
  out << '\n';
  return out.str();
}

struct EstimateOptions {
  std::string test;
  std::vector<int> flat_one_based;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  int scale_count = 5;
  double scale_base = 2.0;
  double epsilon = 0.05;
  long terms = 4096;
  int threads = 1;
  bool csv = false;
};

// Returns either a JSON body or, in CSV mode, the finished CSV text.
std::pair<json, std::string> run_estimate(const blform::ParsedInstance& instance,
                                          const EstimateOptions& options) {
  const blform::IndexVector& ix = require_indices(instance);
  blform::SlopeConfig config;
  config.samples_per_scale = options.samples;
  config.seed = options.seed;
  config.scale_count = options.scale_count;
  config.scale_base = options.scale_base;
  config.threads = options.threads;

  json body{{"subcommand", "estimate"}, {"name", instance.name}, {"test", options.test}};
  if (options.test == "integrability") {
    if (options.csv) {
      throw blform::InputError("--csv applies to the growth tests, not integrability");
    }
    body["report"] = blform::integrability_json(
        blform::integrability_test(instance.set, ix, options.epsilon, options.terms));
    return {body, ""};
  }

  if (options.test == "scaling") {
    const auto result = blform::scaling_slope_test(instance.set, ix, config);
    if (options.csv) {
      std::ostringstream trailer;
      trailer << std::setprecision(12) << "expected=" << result.expected_slope;
      return {json{}, growth_csv(result.fit, trailer.str())};
    }
    body["fit"] = blform::growth_fit_json(result.fit);
    body["expected_slope"] = result.expected_slope;
    body["norm_product_slope"] = result.norm_product_slope;
    body["witness_dots"] = result.dots;
    return {body, ""};
  }

  if (options.flat_one_based.empty()) {
    throw blform::InputError("--flat is required for the " + options.test + " test");
  }
  const auto members = parse_members(options.flat_one_based, instance.set.count());
  const blform::Flat flat = make_flat(instance.set, members);

  if (options.test == "subspace") {
    const auto result = blform::subspace_slope_test(instance.set, ix, flat, config);
    if (options.csv) {
      std::ostringstream trailer;
      trailer << std::setprecision(12) << "expected=" << result.expected_slope
              << " gap=" << blform::rational_string(result.gap);
      return {json{}, growth_csv(result.fit, trailer.str())};
    }
    body["fit"] = blform::growth_fit_json(result.fit);
    body["flat"] = blform::flat_json(flat);
    body["expected_slope"] = result.expected_slope;
    body["norm_exponent"] = blform::rational_json(result.norm_exponent);
    body["expected_exponent"] = blform::rational_json(result.expected_exponent);
    body["gap"] = blform::rational_json(result.gap);
    return {body, ""};
  }

  const auto result = blform::translation_test(instance.set, ix, flat, config);
  if (options.csv) {
    std::ostringstream trailer;
    trailer << "lambda_sum_outside=" << blform::rational_string(result.lambda_sum_outside);
    return {json{}, growth_csv(result.fit, trailer.str())};
  }
  body["fit"] = blform::growth_fit_json(result.fit);
  body["flat"] = blform::flat_json(flat);
  body["lambda_sum_outside"] = blform::rational_json(result.lambda_sum_outside);
  return {body, ""};
}

// Bundled five-vector demonstration: the exponents pass every index
// condition, the set is not generic, and the one-round naive spread of the
// negative weight lands both branches outside the admissible region. The
// witness is the flat {1,3,5}, where each branch's outside sum drops to
// exactly 14/15 against the bound 1.
json run_demo() {
  using blform::frac;
  const auto set = blform::VectorSet::create(
      3, 1,
      {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, -1, 0}, {1, 0, -1}});
  blform::IndexVector ix;
  ix.p_inv = {frac(11, 15), frac(2, 5), frac(2, 3), frac(2, 5), frac(2, 3)};
  ix.lambda = {frac(-2, 15), frac(2, 15), frac(0), frac(2, 15), frac(0)};
  ix.k = 1;

  std::string note;
  const blform::Verdict verdict = combined_verdict(set, ix, note);
  if (!verdict.sufficient_violations.empty() || !verdict.necessary_violations.empty()) {
    throw blform::InternalError("the demo exponents must pass every index condition");
  }
  if (verdict.generic) {
    throw blform::InternalError("the demo vector set must not be generic");
  }

  const int target = 0;                 // the single negative weight
  const std::vector<int> basis{1, 3};   // 2 v_1 = v_2 + v_4
  const auto coefficients = blform::spread_coefficients(set, target, basis);
  const auto branches = blform::naive_spread(set, ix, target, basis);

  const std::vector<int> witness_members{0, 2, 4};
  json branch_reports = json::array();
  for (std::size_t b = 0; b < branches.size(); ++b) {
    blform::IndexVector branch_ix{ix.p_inv, branches[b], ix.k};
    const blform::Verdict branch_verdict = blform::check_necessary(set, branch_ix);
    const blform::Violation* witness = nullptr;
    for (const auto& violation : branch_verdict.necessary_violations) {
      if (violation.constraint == "subspace" && violation.subset == witness_members) {
        witness = &violation;
      }
    }
    if (witness == nullptr) {
      throw blform::InternalError("the spread branch must fail at the witness flat");
    }
    json violations = json::array();
    for (const auto& violation : branch_verdict.necessary_violations) {
      violations.push_back(blform::violation_json(violation));
    }
    branch_reports.push_back(json{{"donor", basis[b] + 1},
                                  {"beta", blform::rational_array_json(branches[b])},
                                  {"outside_sum", blform::rational_json(*witness->lhs)},
                                  {"bound", blform::rational_json(*witness->rhs)},
                                  {"violations", violations}});
  }

  return json{
      {"subcommand", "demo-counterexample"},
      {"name", "naive-spread-counterexample"},
      {"instance",
       json{{"m", 3},
            {"k", 1},
            {"vectors", json::array({json::array({"1", "0", "0"}), json::array({"1", "1", "0"}),
                                     json::array({"1", "0", "1"}), json::array({"1", "-1", "0"}),
                                     json::array({"1", "0", "-1"})})},
            {"p_inv", blform::rational_array_json(ix.p_inv)},
            {"lambda", blform::rational_array_json(ix.lambda)}}},
      {"index_conditions", blform::verdict_json(verdict)},
      {"spread", json{{"target", target + 1},
                      {"basis", blform::members_json(basis)},
                      {"coefficients", blform::rational_array_json(coefficients)}}},
      {"branches", branch_reports},
      {"conclusion",
       "every index condition holds for the original weights, yet both one-round "
       "spread branches push the sum outside the flat {1,3,5} down to exactly 14/15, "
       "below the required 1; redistribution must follow the staged pool order "
       "instead of an arbitrary spanning choice"}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact feasibility checks, weight redistribution, and Monte-Carlo growth "
               "probes for multilinear form exponents"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "1.0.0");

  std::string instance_path;
  std::string output_path;
  int flat_cap = 16;
  int vertex_cap = 12;
  app.add_option("--output", output_path, "write the report to this path instead of stdout");

  auto add_instance_arg = [&](CLI::App* sub) {
    // Lets app-level flags like --output appear after the subcommand name.
    sub->fallthrough();
    sub->add_option("instance", instance_path, "instance JSON file")->required();
  };
  auto add_flat_cap = [&](CLI::App* sub) {
    sub->add_option("--flat-cap", flat_cap, "largest N accepted by flat enumeration")
        ->envname("BLFORM_FLAT_CAP");
  };

  CLI::App* generic_cmd = app.add_subcommand("generic", "genericity verdict for the vector set");
  add_instance_arg(generic_cmd);
  bool extend = false;
  generic_cmd->add_flag("--extend", extend, "also print a vector that keeps the set generic");

  CLI::App* check_cmd =
      app.add_subcommand("check", "full per-constraint feasibility verdict");
  add_instance_arg(check_cmd);
  std::string mode = "both";
  check_cmd->add_option("--mode", mode, "strictness side to evaluate")
      ->check(CLI::IsMember({"both", "sufficient", "necessary"}));

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "one-line status: sufficient_interior, necessary_only, "
                                     "or infeasible");
  add_instance_arg(classify_cmd);

  CLI::App* flats_cmd = app.add_subcommand("flats", "list every flat of the vector set");
  add_instance_arg(flats_cmd);
  add_flat_cap(flats_cmd);

  CLI::App* decompose_cmd =
      app.add_subcommand("decompose", "redistribute negative weights into a nonnegative family");
  add_instance_arg(decompose_cmd);

  CLI::App* vertices_cmd =
      app.add_subcommand("vertices", "H-representation and exact vertex enumeration");
  add_instance_arg(vertices_cmd);
  add_flat_cap(vertices_cmd);
  bool slice_lambda_zero = false;
  vertices_cmd->add_flag("--slice-lambda-zero", slice_lambda_zero,
                         "restrict to the weightless slice mu = 0");
  vertices_cmd->add_option("--vertex-cap", vertex_cap, "largest dimension 2N accepted by "
                                                       "vertex enumeration")
      ->envname("BLFORM_VERTEX_CAP");

  CLI::App* interior_cmd =
      app.add_subcommand("interior-point", "exact LP maximizing the minimum constraint slack");
  add_instance_arg(interior_cmd);
  add_flat_cap(interior_cmd);

  CLI::App* estimate_cmd =
      app.add_subcommand("estimate", "Monte-Carlo growth fits and the divergence probe");
  add_instance_arg(estimate_cmd);
  EstimateOptions estimate;
  estimate_cmd->add_option("--test", estimate.test, "which probe to run")
      ->required()
      ->check(CLI::IsMember({"scaling", "subspace", "translation", "integrability"}));
  estimate_cmd->add_option("--flat", estimate.flat_one_based,
                           "flat members (1-based, comma separated) for the subspace and "
                           "translation tests")
      ->delimiter(',');
  estimate_cmd->add_option("--samples", estimate.samples, "samples per scale");
  estimate_cmd->add_option("--seed", estimate.seed, "master RNG seed");
  estimate_cmd->add_option("--scale-count", estimate.scale_count, "number of scales in the grid");
  estimate_cmd->add_option("--scale-base", estimate.scale_base, "geometric ratio of the grid");
  estimate_cmd->add_option("--epsilon", estimate.epsilon, "series exponent margin "
                                                          "(integrability test)");
  estimate_cmd->add_option("--terms", estimate.terms, "partial sum length (integrability test)");
  estimate_cmd->add_option("--threads", estimate.threads, "worker threads for sampling");
  estimate_cmd->add_flag("--csv", estimate.csv, "emit the growth fit as CSV rows");

  CLI::App* demo_cmd = app.add_subcommand(
      "demo-counterexample", "bundled naive-spread failure with exact witness value 14/15");
  demo_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 2;
  }

  try {
    json body;
    std::string csv_text;
    if (app.got_subcommand(demo_cmd)) {
      body = run_demo();
    } else {
      const blform::ParsedInstance instance = blform::load_instance_file(instance_path);
      for (const auto& warning : instance.warnings) {
        std::cerr << "warning: " << warning << "\n";
      }
      if (app.got_subcommand(generic_cmd)) {
        body = run_generic(instance, extend);
      } else if (app.got_subcommand(check_cmd)) {
        body = run_check(instance, mode);
      } else if (app.got_subcommand(classify_cmd)) {
        body = run_classify(instance);
      } else if (app.got_subcommand(flats_cmd)) {
        body = run_flats(instance, flat_cap);
      } else if (app.got_subcommand(decompose_cmd)) {
        body = run_decompose(instance);
      } else if (app.got_subcommand(vertices_cmd)) {
        body = run_vertices(instance, flat_cap, vertex_cap, slice_lambda_zero);
      } else if (app.got_subcommand(interior_cmd)) {
        body = run_interior_point(instance, flat_cap);
      } else {
        std::tie(body, csv_text) = run_estimate(instance, estimate);
      }
    }
    emit(output_path, csv_text.empty() ? blform::write_report(std::move(body)) : csv_text);
    return 0;
  } catch (const blform::InputError& error) {
    std::cerr << "input error: " << error.what() << "\n";
    return 2;
  } catch (const blform::PreconditionError& error) {
    std::cerr << "precondition failed: " << error.what() << "\n";
    return 1;
  } catch (const blform::InternalError& error) {
    std::cerr << "internal error: " << error.what() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
}
