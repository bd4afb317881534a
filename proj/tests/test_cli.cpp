#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include <sys/wait.h>

using nlohmann::json;

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

// Runs the installed binary with stderr dropped so JSON output stays clean.
CliResult run_cli(const std::string& args) {
  const std::string command = std::string(BLFORM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
  const int status = pclose(pipe);
  const int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return {code, output};
}

std::string fixture(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

json parse_output(const CliResult& result) {
  REQUIRE(result.exit_code == 0);
  return json::parse(result.output);
}

}  // namespace

TEST_CASE("classify reports the counterexample instance as feasible") {
  const json body = parse_output(run_cli("classify " + fixture("example3_counterexample.json")));
  CHECK(body.at("subcommand") == "classify");
  CHECK(body.at("status") == "sufficient_interior");
  CHECK(body.at("generic") == false);
  const json& conditions = body.at("conditions");
  CHECK(conditions.at("exponent_open_range") == true);
  CHECK(conditions.at("scaling") == true);
  CHECK(conditions.at("subspace_strict") == true);
  CHECK(conditions.at("lambda_nonneg") == true);
  CHECK(conditions.at("integrability") == true);
  CHECK(body.at("sufficient_violation_count") == 0);
  CHECK(body.at("necessary_violation_count") == 0);
  CHECK(body.at("schema_version") == 1);
}

TEST_CASE("demo subcommand prints the exact failure margin") {
  const CliResult result = run_cli("demo-counterexample");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("14/15") != std::string::npos);
  const json body = json::parse(result.output);
  CHECK(body.at("subcommand") == "demo-counterexample");
  REQUIRE(body.at("branches").is_array());
  CHECK(body.at("branches").size() == 2);
}

TEST_CASE("check distinguishes modes") {
  const std::string path = fixture("example3_counterexample.json");
  const json both = parse_output(run_cli("check " + path));
  CHECK(both.at("mode") == "both");
  CHECK(both.at("verdict").at("status") == "sufficient_interior");
  const json sufficient = parse_output(run_cli("check --mode sufficient " + path));
  CHECK(sufficient.at("mode") == "sufficient");
  const json necessary = parse_output(run_cli("check --mode necessary " + path));
  CHECK(necessary.at("mode") == "necessary");
}

TEST_CASE("flats lists the full lattice") {
  const json body = parse_output(run_cli("flats " + fixture("example3_counterexample.json")));
  CHECK(body.at("count") == 13);
  REQUIRE(body.at("flats").is_array());
  CHECK(body.at("flats").size() == 13);
  CHECK(body.at("flats").front().at("members") == json::array());
}

TEST_CASE("decompose emits trivial and branching families") {
  const json trivial = parse_output(run_cli("decompose " + fixture("example1_generic.json")));
  CHECK(trivial.at("family").at("depth") == 0);
  CHECK(trivial.at("family").at("leaves").size() == 1);
  CHECK(trivial.at("weight_shifts").size() == 1);

  const json branching =
      parse_output(run_cli("decompose " + fixture("example2_generated_family.json")));
  CHECK(branching.at("family").at("depth") == 2);
  CHECK(branching.at("family").at("leaves").size() == 4);
}

TEST_CASE("generic extension is emitted on demand") {
  const json body =
      parse_output(run_cli("generic --extend " + fixture("example1_generic.json")));
  CHECK(body.at("generic") == true);
  REQUIRE(body.at("extension").is_array());
  CHECK(body.at("extension").size() == 3);

  const json demo =
      parse_output(run_cli("generic --extend " + fixture("example3_counterexample.json")));
  CHECK(demo.at("generic") == false);
  CHECK(demo.at("extension").is_null());
}

TEST_CASE("vertex listing on the weight-zero slice") {
  const json body = parse_output(run_cli("vertices --slice-lambda-zero " +
                                         fixture("integrability_convergent.json")));
  CHECK(body.at("count") == 3);
  CHECK(body.at("system").at("n") == 3);
  CHECK(body.at("system").at("dimension") == 6);
  REQUIRE(body.at("index_point").is_object());
  CHECK(body.at("index_point").at("satisfies_all") == true);
}

TEST_CASE("interior point subcommand") {
  const json body =
      parse_output(run_cli("interior-point " + fixture("integrability_convergent.json")));
  CHECK(body.at("found") == true);
}

TEST_CASE("integrability estimates on the boundary fixtures") {
  const json divergent = parse_output(run_cli(
      "estimate --test integrability " + fixture("integrability_divergent.json")));
  CHECK(divergent.at("report").at("diverging") == true);
  CHECK(divergent.at("report").at("exponent_divergent") == true);

  const json convergent = parse_output(run_cli(
      "estimate --test integrability " + fixture("integrability_convergent.json")));
  CHECK(convergent.at("report").at("diverging") == false);
  CHECK(convergent.at("report").at("exponent_divergent") == false);
}

TEST_CASE("growth estimates can stream csv") {
  const CliResult result = run_cli(
      "estimate --test scaling --csv --samples 2000 --scale-count 3 " +
      fixture("integrability_convergent.json"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.rfind("scale,estimate,standard_error,log_estimate\n", 0) == 0);
  CHECK(result.output.find("# slope=") != std::string::npos);
}

TEST_CASE("reports can be written to a file") {
  const auto path = std::filesystem::temp_directory_path() / "blform_cli_report.json";
  std::filesystem::remove(path);
  const CliResult result = run_cli("flats --output " + path.string() + " " +
                                   fixture("example1_generic.json"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.empty());
  std::ifstream stream(path);
  REQUIRE(stream.good());
  json body;
  stream >> body;
  CHECK(body.at("subcommand") == "flats");
  std::filesystem::remove(path);
}

TEST_CASE("identical invocations produce identical bytes") {
  const std::string args = "vertices --slice-lambda-zero " +
                           fixture("integrability_convergent.json");
  const CliResult first = run_cli(args);
  const CliResult second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);
}

TEST_CASE("input failures exit with code 2") {
  CHECK(run_cli("classify /nonexistent/instance.json").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("classify").exit_code == 2);  // missing file argument
  CHECK(run_cli("flats --bogus-flag " + fixture("example1_generic.json")).exit_code == 2);

  const auto path = std::filesystem::temp_directory_path() / "blform_zero_vector.json";
  {
    std::ofstream stream(path);
    stream << R"({"m": 1, "k": 1, "vectors": [[0]]})";
  }
  CHECK(run_cli("check " + path.string()).exit_code == 2);
  std::filesystem::remove(path);

  // A flats listing without exponents is fine, but check needs them.
  const auto bare = std::filesystem::temp_directory_path() / "blform_bare.json";
  {
    std::ofstream stream(bare);
    stream << R"({"m": 2, "k": 1, "vectors": [[1, 0], [0, 1]]})";
  }
  CHECK(run_cli("flats " + bare.string()).exit_code == 0);
  CHECK(run_cli("check " + bare.string()).exit_code == 2);
  std::filesystem::remove(bare);
}

TEST_CASE("help exits cleanly") {
  const CliResult result = run_cli("--help");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("Usage") != std::string::npos);
}
