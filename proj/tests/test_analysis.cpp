#include "doctest.h"

#include <set>

#include "cts/io.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace cts;
using cts::testing::load_fixture;
using cts::testing::Rng;

namespace {

TypeStructure split_example() {
  return io::parse_structure(R"json({
    "format_version": "cts/1",
    "kind": "structure",
    "space": ["a", "b"],
    "players": [
      {
        "name": "1",
        "conditioning": [["a", "b"]],
        "types": ["t1", "t1'"],
        "beliefs": {
          "t1": {"{a,b}": {"(a,t2)": "1/3", "(b,t2)": "2/3"}},
          "t1'": {"{a,b}": {"(a,t2)": "1/2", "(b,t2)": "1/2"}}
        }
      },
      {
        "name": "2",
        "conditioning": [["a", "b"]],
        "types": ["t2"],
        "beliefs": {
          "t2": {"{a,b}": {"(a,t1)": "1/1"}}
        }
      }
    ]
  })json");
}

// Same (S, families) as split_example but player 1 only holds the uniform
// first-order belief.
TypeStructure uniform_only_base() {
  return io::parse_structure(R"json({
    "format_version": "cts/1",
    "kind": "structure",
    "space": ["a", "b"],
    "players": [
      {
        "name": "1",
        "conditioning": [["a", "b"]],
        "types": ["u1"],
        "beliefs": {
          "u1": {"{a,b}": {"(a,u2)": "1/2", "(b,u2)": "1/2"}}
        }
      },
      {
        "name": "2",
        "conditioning": [["a", "b"]],
        "types": ["u2"],
        "beliefs": {
          "u2": {"{a,b}": {"(a,u1)": "1/1"}}
        }
      }
    ]
  })json");
}

TypeMap identity_map(const TypeStructure& ts) {
  TypeMap map;
  for (Player i = 0; i < 2; ++i) {
    map[i].resize(ts.side[i].types.size());
    for (int t = 0; t < ts.side[i].types.size(); ++t) map[i][t] = t;
  }
  return map;
}

// Order-n image sets {unfold(ts,n)[t] : t}, canonically serialized for set
// comparison.
std::set<std::string> image_set(const TypeStructure& ts, Player i, int n) {
  auto prefixes = unfold(ts, n);
  io::PrefixDocument doc;
  doc.ctx = context_of(ts);
  doc.player_names = {ts.side[0].name, ts.side[1].name};
  doc.player = i;
  std::set<std::string> out;
  for (const PrefixPtr& p : prefixes[i]) {
    doc.prefix = p;
    out.insert(io::serialize_prefix(doc));
  }
  return out;
}

}  // namespace

TEST_CASE("validate_structure accepts the Friedenberg fixture") {
  CHECK(validate_structure(load_fixture("friedenberg.json")).ok());
}

TEST_CASE("validate_structure locates a normalization break") {
  TypeStructure ts = load_fixture("friedenberg.json");
  ts.side[1].beliefs[0].conditionals[0].mass[0] = Rational(9, 10);
  ValidationReport report = validate_structure(ts);
  REQUIRE_FALSE(report.ok());
  bool located = false;
  for (const Violation& v : report.violations)
    located = located || (v.code == "measure-sum" &&
                          v.message.find("t_b") != std::string::npos);
  CHECK(located);
}

TEST_CASE("validate_structure reports a chain-rule break on nested cylinders") {
  TypeStructure ts = io::parse_structure(R"json({
    "format_version": "cts/1",
    "kind": "structure",
    "space": ["a", "b", "c"],
    "players": [
      {
        "name": "1",
        "conditioning": [["a", "b", "c"], ["a", "b"]],
        "types": ["t"],
        "beliefs": {
          "t": {
            "{a,b,c}": {"(a,u)": "1/2", "(b,u)": "1/4", "(c,u)": "1/4"},
            "{a,b}": {"(a,u)": "1/2", "(b,u)": "1/2"}
          }
        }
      },
      {
        "name": "2",
        "conditioning": [["a", "b", "c"]],
        "types": ["u"],
        "beliefs": {
          "u": {"{a,b,c}": {"(a,t)": "1/1"}}
        }
      }
    ]
  })json");
  ValidationReport report = validate_structure(ts);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().code == "chain-rule");
}

TEST_CASE("refine reaches the expected fixpoints") {
  SUBCASE("Friedenberg: the two a-types stay in one block") {
    RefineResult r = refine(load_fixture("friedenberg.json"));
    CHECK(r.fixpoint_index == 0);
    CHECK(r.rounds.back()[0].block_of == std::vector<int>{0, 0});
    CHECK(r.rounds.back()[1].block_of == std::vector<int>{0});
  }
  SUBCASE("single type per player: trivial, fixpoint 0") {
    RefineResult r = refine(load_fixture("one_type.json"));
    CHECK(r.fixpoint_index == 0);
    CHECK(r.rounds.size() == 1);
  }
  SUBCASE("distinct marginals split at round 1") {
    RefineResult r = refine(split_example());
    CHECK(r.fixpoint_index == 1);
    REQUIRE(r.rounds.size() == 2);
    CHECK(r.rounds[1][0].block_of == std::vector<int>{0, 1});
  }
}

TEST_CASE("refinement blocks coincide with exact prefix equality") {
  Rng rng(43);
  for (int i = 0; i < 10; ++i) {
    TypeStructure ts = cts::testing::random_structure(rng, 3, 4, 3);
    RefineResult r = refine(ts);
    CHECK(r.fixpoint_index <=
          ts.side[0].types.size() + ts.side[1].types.size());
    auto rounds = refine_rounds(ts, r.fixpoint_index + 2);
    // Stability past the fixpoint.
    CHECK(rounds[r.fixpoint_index] == rounds[r.fixpoint_index + 1]);
    CHECK(rounds[r.fixpoint_index] == rounds[r.fixpoint_index + 2]);
    for (int n = 1; n <= r.fixpoint_index + 2; ++n) {
      auto prefixes = unfold(ts, n);
      for (Player pl = 0; pl < 2; ++pl)
        for (int t = 0; t < ts.side[pl].types.size(); ++t)
          for (int u = 0; u < ts.side[pl].types.size(); ++u)
            CHECK((rounds[n][pl].block_of[t] == rounds[n][pl].block_of[u]) ==
                  prefix_equal(prefixes[pl][t], prefixes[pl][u]));
    }
  }
}

TEST_CASE("redundancy detection") {
  SUBCASE("Friedenberg is redundant with the stated witness") {
    TypeStructure ts = load_fixture("friedenberg.json");
    RedundancyReport report = is_non_redundant(ts);
    CHECK_FALSE(report.non_redundant);
    REQUIRE(report.witness);
    CHECK((*report.witness)[0] == 0);  // player a
    CHECK(ts.side[0].types.label((*report.witness)[1]) == "t'_a");
    CHECK(ts.side[0].types.label((*report.witness)[2]) == "t''_a");
  }
  SUBCASE("distinct first-order marginals make a structure non-redundant") {
    CHECK(is_non_redundant(split_example()).non_redundant);
  }
  SUBCASE("one type per player is non-redundant") {
    CHECK(is_non_redundant(load_fixture("one_type.json")).non_redundant);
  }
}

TEST_CASE("hierarchy inclusion") {
  SUBCASE("Friedenberg and the one-type structure include each other") {
    TypeStructure fried = load_fixture("friedenberg.json");
    TypeStructure tiny = load_fixture("one_type.json");
    for (std::optional<int> depth :
         {std::optional<int>{}, std::optional<int>{1}, std::optional<int>{3}}) {
      InclusionReport ab = hierarchies_included(fried, tiny, depth);
      InclusionReport ba = hierarchies_included(tiny, fried, depth);
      CHECK(ab.included);
      CHECK(ba.included);
    }
    CHECK(hierarchies_included(fried, tiny, std::nullopt)
              .unique_hierarchy_class);
  }
  SUBCASE("every structure includes itself") {
    TypeStructure ts = split_example();
    CHECK(hierarchies_included(ts, ts, std::nullopt).included);
    CHECK(hierarchies_included(ts, ts, 1).included);
  }
  SUBCASE("a base missing the (1/3,2/3) marginal fails at depth 1") {
    TypeStructure star = split_example();
    TypeStructure base = uniform_only_base();
    InclusionReport report = hierarchies_included(star, base, 1);
    CHECK_FALSE(report.included);
    REQUIRE(report.witness);
    CHECK(report.witness->first == 0);
    CHECK(star.side[0].types.label(report.witness->second) == "t1");
  }
  SUBCASE("mismatched families are rejected") {
    TypeStructure star = split_example();
    TypeStructure other = load_fixture("friedenberg.json");
    CHECK_THROWS_AS(hierarchies_included(star, other, std::nullopt),
                    std::invalid_argument);
  }
}

TEST_CASE("inclusion both ways at order n means equal order-n image sets") {
  Rng rng(47);
  for (int i = 0; i < 12; ++i) {
    FiniteSpace space = cts::testing::letter_space(rng, "s", 2);
    PerPlayer<ConditioningFamily> fams = {
        cts::testing::random_family(rng, space.size(), 2),
        cts::testing::random_family(rng, space.size(), 2)};
    TypeStructure a = cts::testing::random_structure_over(rng, space, fams, 3);
    TypeStructure b = cts::testing::random_structure_over(rng, space, fams, 3);
    for (int n = 1; n <= 3; ++n) {
      bool mutual = hierarchies_included(a, b, n).included &&
                    hierarchies_included(b, a, n).included;
      bool equal_images = image_set(a, 0, n) == image_set(b, 0, n) &&
                          image_set(a, 1, n) == image_set(b, 1, n);
      CHECK(mutual == equal_images);
    }
  }
}

TEST_CASE("type morphisms") {
  SUBCASE("the identity is a type morphism") {
    TypeStructure ts = split_example();
    CHECK(check_type_morphism(ts, ts, identity_map(ts)).ok);
  }
  SUBCASE("merging the two Friedenberg a-types is a type morphism") {
    TypeStructure ts = load_fixture("friedenberg.json");
    TypeMap phi = identity_map(ts);
    phi[0][1] = 0;  // t''_a -> t'_a
    CHECK(check_type_morphism(ts, ts, phi).ok);
  }
  SUBCASE("merging types with distinct beliefs fails with a witness") {
    TypeStructure ts = split_example();
    TypeMap phi = identity_map(ts);
    phi[0][1] = 0;  // t1' -> t1, but their beliefs differ
    TypeMorphismReport report = check_type_morphism(ts, ts, phi);
    CHECK_FALSE(report.ok);
    REQUIRE(report.witness);
    CHECK(report.witness->player == 0);
    CHECK(ts.side[0].types.label(report.witness->type) == "t1'");
  }
  SUBCASE("partial maps are rejected") {
    TypeStructure ts = split_example();
    TypeMap phi = identity_map(ts);
    phi[0].pop_back();
    CHECK_THROWS_AS(check_type_morphism(ts, ts, phi), std::invalid_argument);
  }
}

TEST_CASE("hierarchy morphisms") {
  SUBCASE("every verified type morphism preserves hierarchies at fixpoint") {
    TypeStructure ts = load_fixture("friedenberg.json");
    TypeMap phi = identity_map(ts);
    phi[0][1] = 0;
    REQUIRE(check_type_morphism(ts, ts, phi).ok);
    CHECK(check_hierarchy_morphism(ts, ts, phi, std::nullopt).ok);
  }
  SUBCASE("identity maps preserve hierarchies") {
    TypeStructure ts = split_example();
    CHECK(check_hierarchy_morphism(ts, ts, identity_map(ts), std::nullopt).ok);
    CHECK(check_hierarchy_morphism(ts, ts, identity_map(ts), 2).ok);
  }
  SUBCASE("mapping onto a different first-order marginal fails at depth 1") {
    TypeStructure ts = split_example();
    TypeMap phi = identity_map(ts);
    phi[0][0] = 1;  // t1 -> t1' changes the marginal
    HierarchyMorphismReport report = check_hierarchy_morphism(ts, ts, phi, 1);
    CHECK_FALSE(report.ok);
    REQUIRE(report.witness);
    CHECK(ts.side[0].types.label(report.witness->second) == "t1");
  }
}

TEST_CASE("quotient maps are morphisms in both senses") {
  Rng rng(53);
  for (int i = 0; i < 10; ++i) {
    TypeStructure ts = cts::testing::random_structure(rng, 3, 4, 2);
    cts::testing::Quotient q = cts::testing::quotient_structure(ts);
    CHECK(check_type_morphism(ts, q.ts, q.map).ok);
    CHECK(check_hierarchy_morphism(ts, q.ts, q.map, std::nullopt).ok);
  }
}

TEST_CASE("completeness") {
  SUBCASE("Friedenberg: incomplete, witnessed by the even mixture") {
    TypeStructure ts = load_fixture("friedenberg.json");
    CompletenessReport report = completeness_report(ts);
    CHECK_FALSE(report.complete());
    // Player a's codomain is forced to one element by the singleton cylinder.
    CHECK(report.side[0].complete);
    CHECK(report.side[0].forced_singleton);
    // Player b misses the (1/2,1/2) mixture over the two a-types.
    REQUIRE(report.side[1].witness);
    const Cps& witness = *report.side[1].witness;
    CHECK(witness.conditionals[0].mass ==
          std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    CHECK(validate_cps(witness).ok());
    for (const Cps& belief : ts.side[1].beliefs) CHECK(belief != witness);
  }
  SUBCASE("singleton space with singleton types is complete") {
    CHECK(completeness_report(load_fixture("one_type.json")).complete());
  }
  SUBCASE("|S| = 2 with three types is incomplete with a fresh witness") {
    Rng rng(59);
    TypeStructure ts;
    ts.space = make_space({"a", "b"});
    for (Player i = 0; i < 2; ++i) {
      ts.side[i].name = i == 0 ? "1" : "2";
      ts.side[i].family =
          make_family({make_event({0, 1}, 2)}, 2);
      ts.side[i].types = make_space(i == 0 ? std::vector<std::string>{"x1", "x2", "x3"}
                                           : std::vector<std::string>{"y1", "y2", "y3"});
    }
    for (Player i = 0; i < 2; ++i) {
      FiniteSpace domain = ts.belief_space(i);
      ConditioningFamily cylinders = ts.belief_family(i);
      for (int t = 0; t < 3; ++t)
        ts.side[i].beliefs.push_back(
            cts::testing::random_valid_cps(rng, domain, cylinders));
    }
    CompletenessReport report = completeness_report(ts);
    CHECK_FALSE(report.complete());
    for (Player i = 0; i < 2; ++i) {
      CHECK_FALSE(report.side[i].complete);
      REQUIRE(report.side[i].witness);
      CHECK(validate_cps(*report.side[i].witness).ok());
      CHECK(cts::testing::oracle_is_valid_cps(*report.side[i].witness));
      for (const Cps& belief : ts.side[i].beliefs)
        CHECK(belief != *report.side[i].witness);
    }
  }
}
