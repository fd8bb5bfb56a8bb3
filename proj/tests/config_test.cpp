#include <string>

#include "doctest.h"
#include "quakebend/config.hpp"
#include "quakebend/errors.hpp"
#include "quakebend/toml_min.hpp"

using namespace qb;

namespace {

std::string message_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    return e.what();
  }
  FAIL("expected the configuration to be rejected");
  return {};
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("raw parser handles the supported subset") {
    TomlTable t = toml_parse(R"(
# top comment
title = "abc \"quoted\""
count = 42
ratio = -1.5e-3
flag = true
items = [1, 2.5, 3]
nested = [[1, 0], [0, 1]]

[table]
key = "v"     # trailing comment

[[arr]]
x = 1
[[arr]]
x = 2
)");
    CHECK(t.values.at("title").str == "abc \"quoted\"");
    CHECK(t.values.at("count").num == 42);
    CHECK(t.values.at("count").is_integer);
    CHECK(t.values.at("ratio").num == doctest::Approx(-1.5e-3));
    CHECK(t.values.at("flag").boolean);
    REQUIRE(t.values.at("items").items.size() == 3);
    CHECK(t.values.at("items").items[1].num == 2.5);
    CHECK(t.values.at("nested").items[0].items.size() == 2);
    CHECK(t.tables.at("table").values.at("key").str == "v");
    REQUIRE(t.table_arrays.at("arr").size() == 2);
    CHECK(t.table_arrays.at("arr")[1].values.at("x").num == 2);
    // line numbers are tracked for diagnostics
    CHECK(t.values.at("count").line == 4);
  }

  TEST_CASE("raw parser rejects malformed input") {
    CHECK_THROWS_AS((void)toml_parse("key"), Error);                  // missing value
    CHECK_THROWS_AS((void)toml_parse("a = 1\na = 2\n"), Error);       // duplicate
    CHECK_THROWS_AS((void)toml_parse("a = [1, \n"), Error);           // unterminated array
    CHECK_THROWS_AS((void)toml_parse("a = \"unterminated\n"), Error); // unterminated string
    CHECK_THROWS_AS((void)toml_parse("[tab\nx = 1\n"), Error);        // bad header
    try {
      (void)toml_parse("ok = 1\nbad = \n");
    } catch (const Error& e) {
      CHECK(contains(e.what(), "line 2"));
    }
  }

  TEST_CASE("defaults of an empty configuration") {
    RunConfig cfg = parse_config("");
    CHECK(cfg.genus == 2);
    CHECK(cfg.dimension == 2);
    CHECK(cfg.seed == 1);
    CHECK(cfg.t == 1.0);
    CHECK(cfg.multicurve.empty());
    CHECK(cfg.representation.source == RepresentationSpec::Source::reference);
    CHECK(cfg.earthquake.kind == LaminationApproximation::Kind::dehn_twist_recipe);
    CHECK(cfg.earthquake.count == 8);
    CHECK(cfg.crossings.word == "b1");
    CHECK(cfg.limitset.depth == 6);
    CHECK(cfg.verify.trials == 20);
    CHECK(cfg.covering.max_cosets == 4'000'000);
  }

  TEST_CASE("a full configuration round-trips into typed fields") {
    RunConfig cfg = parse_config(R"(
genus = 2
dimension = 3
seed = 99

[representation]
source = "bent"
bend_angle = 0.4
bend_curve = "a2"
conjugate = false

[[multicurve]]
word = "a1"
weight = 0.5
translation = 1.25
angle = 0.3

[[multicurve]]
word = "a2"
weight = 1.5
translation = -0.5

[deform]
t = 0.75

[earthquake]
kind = "explicit"
tol = 1e-5
[[earthquake.step]]
[[earthquake.step.component]]
word = "a1"
weight = 0.25
translation = 1.0

[crossings]
word = "b1 b1"
curve = "a1"
oracle_radius = 5

[limitset]
depth = 4

[verify]
checks = ["homomorphism", "flow"]
trials = 3
dimension = 4

[covering]
margin = 6.5
max_cosets = 100000
)");
    CHECK(cfg.dimension == 3);
    CHECK(cfg.seed == 99);
    CHECK(cfg.representation.source == RepresentationSpec::Source::bent);
    CHECK(cfg.representation.bend_curve == "a2");
    CHECK(!cfg.representation.conjugate);
    REQUIRE(cfg.multicurve.size() == 2);
    CHECK(cfg.multicurve[0].angle == 0.3);
    CHECK(cfg.multicurve[1].translation == -0.5);
    CHECK(cfg.t == 0.75);
    CHECK(cfg.earthquake.kind == LaminationApproximation::Kind::explicit_list);
    REQUIRE(cfg.earthquake.steps.size() == 1);
    CHECK(cfg.earthquake.steps[0][0].weight == 0.25);
    CHECK(cfg.crossings.oracle_radius == 5);
    CHECK(cfg.limitset.depth == 4);
    CHECK(cfg.verify.checks.size() == 2);
    CHECK(cfg.verify.dimension == 4);
    CHECK(cfg.covering.margin_override == 6.5);
    CHECK(cfg.covering.max_cosets == 100000);
    CHECK(cfg.source_text.find("genus = 2") != std::string::npos);
  }

  TEST_CASE("semantic rejections name the offending field") {
    CHECK(contains(message_of("genus = 1\n"), "genus"));
    CHECK(contains(message_of("dimension = 5\n"), "dimension"));
    CHECK(contains(message_of("[[multicurve]]\nword = \"a1\"\nweight = -1\n"), "weight"));
    CHECK(contains(message_of("[[multicurve]]\nword = \"a9\"\n"), "word"));
    CHECK(contains(message_of("[[multicurve]]\nword = \"a1\"\nangle = 0.2\n"), "angle"));
    CHECK(contains(message_of("[[multicurve]]\nword = \"a1\"\nplane = [1, 2]\n"), "plane"));
    CHECK(contains(message_of("[representation]\nsource = \"other\"\n"), "source"));
    CHECK(contains(message_of("[earthquake]\nkind = \"other\"\n"), "kind"));
    CHECK(contains(message_of("[earthquake]\ntol = 0\n"), "tol"));
    CHECK(contains(message_of("[earthquake]\nkind = \"explicit\"\n"), "step"));
    CHECK(contains(message_of("[crossings]\ncurve = \"\"\n"), "crossings"));
    CHECK(contains(message_of("[verify]\ntrials = 0\n"), "trials"));
    CHECK(contains(message_of("[covering]\nmax_cosets = 0\n"), "max_cosets"));
    // rotation needs room: bending a plane is refused up front
    CHECK(contains(message_of("[representation]\nsource = \"bent\"\n"), "bend_angle"));
  }

  TEST_CASE("unknown keys are rejected with their location") {
    std::string msg = message_of("genus = 2\nmystery = 3\n");
    CHECK(contains(msg, "mystery"));
    CHECK(contains(msg, "line 2"));
    CHECK(contains(message_of("[deform]\nt = 1\nextra = 2\n"), "extra"));
    CHECK(contains(message_of("[[multicurve]]\nword = \"a1\"\ntypo = 1\n"), "typo"));
    CHECK(contains(message_of("[mystery_table]\nx = 1\n"), "mystery_table"));
  }

  TEST_CASE("materialization against the reference") {
    ReferenceStructure ref = reference_structure(2);

    RunConfig cfg = parse_config(R"(
dimension = 3
[[multicurve]]
word = "a1"
weight = 0.5
translation = 1.0
angle = 0.25
)");
    Representation rho = build_representation(cfg, ref);
    CHECK(rho.n == 3);
    WeightedMulticurve mc = build_multicurve(cfg.multicurve, ref, cfg.dimension);
    REQUIRE(mc.components.size() == 1);
    CHECK(mc.components[0].curve.weight == 0.5);
    CHECK(mc.components[0].param.angle == 0.25);
    CHECK(mc.components[0].curve.core == ref.pres.parse("a1"));

    RunConfig recipe = parse_config("[earthquake]\nkind = \"recipe\"\ncount = 3\n");
    LaminationApproximation la = build_lamination(recipe, ref);
    CHECK(la.kind == LaminationApproximation::Kind::dehn_twist_recipe);
    CHECK(la.count == 3);

    // explicit matrices: identity blocks are not a surface group
    RunConfig bad = parse_config("[representation]\nsource = \"explicit\"\n");
    CHECK_THROWS_AS((void)build_representation(bad, ref), Error);
  }
}
