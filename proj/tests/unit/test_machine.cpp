#include "qcfa/machine.hpp"
#include "qcfa/machine_format.hpp"
#include "walk_machine.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace qcfa;

TEST_CASE("tape symbols include both end-markers") {
  CHECK(tape_symbol("ab", 0) == '<');
  CHECK(tape_symbol("ab", 1) == 'a');
  CHECK(tape_symbol("ab", 2) == 'b');
  CHECK(tape_symbol("ab", 3) == '>');
}

TEST_CASE("one step of the walk splits into two equal branches") {
  MachineSpec m = walk_machine(false);
  Configuration c = initial_configuration(m);
  auto s0 = step(m, c, "aa");
  REQUIRE(s0.size() == 1);
  CHECK(s0[0].config.head == 1);
  auto s1 = step(m, s0[0].config, "aa");
  REQUIRE(s1.size() == 2);
  CHECK(abs(s1[0].probability - Scalar(Rational(1, 2))) < Scalar::pow2(-150));
  CHECK(s1[0].config.head == 2);
  CHECK(s1[1].config.head == 0);
  CHECK(step(m, s1[1].config, "aa").at(0).config.state == m.find_state("rej"));
}

TEST_CASE("builder rejects incomplete machines and bad outcome counts") {
  MachineBuilder b("bad", MachineKind::two_way, "a", {Rational(1), Rational(0)});
  StateId s = b.state("s");
  b.state("y", StateRole::accept);
  b.move(s, '<', s, +1);
  CHECK_THROWS_AS(b.build(), StructuralError);
  std::size_t coin = b.op(fair_coin(2));
  b.rule(s, 'a', coin, {{s, 1}});
  b.complete_with(s);
  CHECK_THROWS_AS(b.build(), StructuralError);
}

TEST_CASE("definition files round-trip") {
  MachineSpec m = walk_machine(true);
  std::string text = dump_machine(m);
  MachineSpec back = load_machine(text);
  CHECK(dump_machine(back) == text);
  CHECK(back.states().size() == m.states().size());
  CHECK(back.restart_entry() == m.restart_entry());
  CHECK(back.operators().size() == m.operators().size());
}

TEST_CASE("surd matrices load in exact form") {
  const char* text = R"json({
    "schema_version": 1, "name": "coin", "kind": "two-way", "alphabet": "a",
    "register_dim": 1, "initial_register": ["1"],
    "states": [{"name": "s"}, {"name": "y", "role": "accept"}, {"name": "n", "role": "reject"}],
    "initial": "s", "restart_entry": "s",
    "superoperators": [{"name": "c", "elements": [
      {"label": "h", "matrix": [["sqrt(2)/2"]]},
      {"label": "t", "matrix": [["1/sqrt(2)"]], "inexact": true}]}],
    "transitions": [{"state": "s", "superoperator": "c",
                     "outcomes": [{"next": "y", "move": 0}, {"next": "n", "move": 0}]}]
  })json";
  MachineSpec m = load_machine(text);
  const auto& els = m.operators().at(0).elements();
  REQUIRE(els[0].exact_form());
  const auto& f = *els[0].exact_form();
  CHECK(f.scale_squared * f.matrix(0, 0) * f.matrix(0, 0) == Rational(1, 2));
  CHECK_FALSE(els[1].exact_form());
  CHECK(load_machine(dump_machine(m)).operators().at(0).elements()[1].exact_form() == std::nullopt);
}

TEST_CASE("malformed definitions are reported") {
  CHECK_THROWS_AS(load_machine("{ not json"), ParseError);
  CHECK_THROWS_AS(load_machine(R"({"schema_version": 1, "name": "x"})"), std::exception);
  auto doc = nlohmann::json::parse(dump_machine(walk_machine(false)));
  // Transitions keep pointing at the old name.
  doc["states"][1]["name"] = "gone";
  CHECK_THROWS(load_machine(doc.dump()));
  doc = nlohmann::json::parse(dump_machine(walk_machine(false)));
  doc["schema_version"] = 99;
  CHECK_THROWS(load_machine(doc.dump()));
}
