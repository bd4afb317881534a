#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <string>

#include "blform/exceptions.hpp"
#include "blform/instance_io.hpp"
#include "blform/rational.hpp"
#include "blform/vector_set.hpp"

using blform::frac;
using blform::IndexVector;
using blform::parse_instance;
using blform::Rational;
using blform::VectorSet;
using nlohmann::json;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "m": 2,
  "k": 1,
  "vectors": [[1, 0], [0, 1], ["1/2", "1/2"]]
})";

}  // namespace

TEST_CASE("parses integers and rational strings") {
  const auto instance = parse_instance(kMinimal);
  CHECK(instance.set.ambient_dim() == 2);
  CHECK(instance.set.block_dim() == 1);
  CHECK(instance.set.count() == 3);
  CHECK(instance.set.vector(2) == blform::RationalVector{frac(1, 2), frac(1, 2)});
  CHECK_FALSE(instance.indices.has_value());
  CHECK(instance.name.empty());
  CHECK(instance.notes.empty());
  // (1/2, 1/2) is collinear with no listed vector, so no warning.
  CHECK(instance.warnings.empty());

  const auto full = parse_instance(R"({
    "schema_version": 1,
    "name": "tiny",
    "notes": "hand built",
    "m": 1,
    "k": 2,
    "vectors": [[3]],
    "p_inv": ["2/4"],
    "lambda": [-1]
  })");
  CHECK(full.name == "tiny");
  CHECK(full.notes == "hand built");
  REQUIRE(full.indices.has_value());
  CHECK(full.indices->p_inv == std::vector<Rational>{frac(1, 2)});
  CHECK(full.indices->lambda == std::vector<Rational>{Rational(-1)});
  CHECK(full.indices->k == 2);
}

TEST_CASE("schema_version is optional but pinned") {
  const auto instance = parse_instance(R"({"m": 1, "k": 1, "vectors": [[1]]})");
  CHECK(instance.set.count() == 1);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"schema_version": 2, "m": 1, "k": 1,
                                          "vectors": [[1]]})"),
                       doctest::Contains("schema_version"), blform::InputError);
}

TEST_CASE("malformed documents are rejected with a reason") {
  CHECK_THROWS_WITH_AS(parse_instance("{"), doctest::Contains("invalid JSON"),
                       blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance("[1, 2]"), doctest::Contains("JSON object"),
                       blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m": 1, "k": 1, "vectors": [[1]], "extra": 0})"),
                       doctest::Contains("unknown key 'extra'"), blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"k": 1, "vectors": [[1]]})"),
                       doctest::Contains("missing required key 'm'"), blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m": 0, "k": 1, "vectors": [[1]]})"),
                       doctest::Contains("positive integer"), blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m": "2", "k": 1, "vectors": [[1]]})"),
                       doctest::Contains("expected an integer"), blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m": 1, "k": 1, "vectors": []})"),
                       doctest::Contains("non-empty array"), blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m": 2, "k": 1, "vectors": [[1]]})"),
                       doctest::Contains("vectors[0]"), blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m": 1, "k": 1, "vectors": [[1.5]]})"),
                       doctest::Contains("expected a rational"), blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m": 1, "k": 1, "vectors": [["1/0"]]})"),
                       doctest::Contains("vectors[0]"), blform::InputError);
  CHECK_THROWS_AS(parse_instance(R"({"m": 1, "k": 1, "vectors": [[0]]})"),
                  blform::InputError);  // zero vector rejected by the set itself
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m": 1, "k": 1, "vectors": [[1]], "p_inv": [1]})"),
                       doctest::Contains("must be given together"), blform::InputError);
  CHECK_THROWS_WITH_AS(parse_instance(R"({"m": 1, "k": 1, "vectors": [[1], [2]],
                                          "p_inv": [1], "lambda": [0, 0]})"),
                       doctest::Contains("p_inv"), blform::InputError);
}

TEST_CASE("collinear pairs warn but still parse") {
  const auto instance = parse_instance(R"({
    "m": 2, "k": 1,
    "vectors": [[1, 1], [0, 1], ["3/2", "3/2"]]
  })");
  REQUIRE(instance.warnings.size() == 1);
  CHECK(instance.warnings[0] ==
        "vectors 1 and 3 are collinear; necessity checks will refuse this set");
}

TEST_CASE("write and parse round-trip") {
  const VectorSet set = VectorSet::create(2, 1, {{1, 0}, {frac(-2, 3), 1}});
  IndexVector ix;
  ix.p_inv = {frac(1, 2), frac(5, 7)};
  ix.lambda = {frac(-1, 9), Rational(0)};
  ix.k = 1;
  const std::string text = blform::write_instance(set, ix, "roundtrip", "two vectors");
  const auto back = parse_instance(text);
  CHECK(back.set.vectors() == set.vectors());
  CHECK(back.set.ambient_dim() == 2);
  CHECK(back.set.block_dim() == 1);
  REQUIRE(back.indices.has_value());
  CHECK(back.indices->p_inv == ix.p_inv);
  CHECK(back.indices->lambda == ix.lambda);
  CHECK(back.name == "roundtrip");
  CHECK(back.notes == "two vectors");

  // Without indices the exponent keys are absent, not null.
  const std::string bare = blform::write_instance(set, std::nullopt, "", "");
  const json doc = json::parse(bare);
  CHECK_FALSE(doc.contains("p_inv"));
  CHECK_FALSE(doc.contains("lambda"));
  CHECK(doc.at("schema_version") == blform::kSchemaVersion);
}

TEST_CASE("reports are stamped and stable") {
  json body;
  body["answer"] = 42;
  const std::string text = blform::write_report(body);
  const json doc = json::parse(text);
  CHECK(doc.at("schema_version") == blform::kSchemaVersion);
  CHECK(doc.at("answer") == 42);
  CHECK(text.back() == '\n');
  CHECK(blform::write_report(doc) == text);  // already-stamped bodies are fixed points
}

TEST_CASE("json builders normalize and shift to one-based") {
  CHECK(blform::rational_json(frac(2, 4)) == json("1/2"));
  CHECK(blform::rational_json(frac(-4, 2)) == json("-2"));
  CHECK(blform::rational_json(Rational(0)) == json("0"));
  CHECK(blform::rational_array_json({frac(1, 3), frac(6, 4)}) == json({"1/3", "3/2"}));
  CHECK(blform::members_json({0, 2, 4}) == json({1, 3, 5}));

  blform::Violation violation;
  violation.constraint = "subspace";
  violation.subset = std::vector<int>{0, 2};
  violation.lhs = frac(14, 15);
  violation.relation = blform::Relation::GreaterEqual;
  violation.rhs = Rational(1);
  violation.message = "demo";
  const json v = blform::violation_json(violation);
  CHECK(v.at("constraint") == "subspace");
  CHECK(v.at("subset") == json({1, 3}));
  CHECK(v.at("lhs") == "14/15");
  CHECK(v.at("relation") == ">=");
  CHECK(v.at("rhs") == "1");
  CHECK(v.at("message") == "demo");
  CHECK_FALSE(v.contains("index"));

  blform::Flat flat{{1, 2}, 1};
  const json f = blform::flat_json(flat);
  CHECK(f.at("members") == json({2, 3}));
  CHECK(f.at("rank") == 1);
}

TEST_CASE("file loading errors name the file") {
  CHECK_THROWS_WITH_AS(blform::load_instance_file("/nonexistent/path.json"),
                       doctest::Contains("cannot read"), blform::InputError);
}
