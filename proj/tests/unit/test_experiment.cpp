#include "qcfa/errors.hpp"
#include "qcfa/experiment.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>

using namespace qcfa;

TEST_CASE("input shorthand") {
  CHECK(expand_input("aba^7") == "ab" + std::string(7, 'a'));
  CHECK(expand_input("eps").empty());
  CHECK(expand_input("a b a^2") == "abaa");
  std::string w = "ab" + std::string(7, 'a') + "b" + std::string(56, 'a');
  CHECK(compact_input(w) == "aba^7ba^56");
  CHECK(expand_input(compact_input(w)) == w);
  CHECK(compact_input("aaab") == "aaab");
}

TEST_CASE("machine choice") {
  MachineChoice c = parse_machine_choice("binary-verifier:c=1,gamma=1/9");
  CHECK(c.builtin == "binary-verifier");
  CHECK(c.c == Rational(1));
  REQUIRE(c.gamma);
  CHECK(*c.gamma == Rational(1, 9));
  CHECK(parse_machine_choice("machines/x.json").file == "machines/x.json");
}

TEST_CASE("growth fits recover known exponents") {
  std::vector<double> x{2, 4, 8, 16}, cube, expo;
  for (double v : x) {
    cube.push_back(5 * v * v * v);
    expo.push_back(3 * std::pow(2.0, v));
  }
  FitResult f = fit_growth(x, cube, "loglog");
  CHECK(f.slope == doctest::Approx(3.0));
  CHECK(std::exp(f.intercept) == doctest::Approx(5.0));
  CHECK(fit_growth(x, expo, "loglinear").slope == doctest::Approx(std::log(2.0)));
  CHECK_THROWS(fit_growth({1, 2}, {1, 2}, "loglog"));
}

TEST_CASE("experiment documents and runs") {
  ExperimentConfig cfg = parse_experiment(R"({
    "machine": "power-eq",
    "inputs": ["ab", {"generator": "power-eq-members", "max_n": 0}],
    "precision": 128
  })");
  REQUIRE(cfg.inputs.size() == 2);
  CHECK(cfg.precision == 128);
  auto rows = cmd_run(cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].reference_membership == false);
  CHECK(rows[1].reference_membership == true);
  CHECK(rows[1].accept_prob == "1");
  for (const auto& r : rows) CHECK(r.pass == true);
  std::string csv = rows_to_csv(rows);
  CHECK(csv.rfind("schema_version,", 0) == 0);
  auto js = nlohmann::json::parse(rows_to_json(rows));
  CHECK_FALSE(js.is_null());
  CHECK_THROWS(cmd_run(parse_experiment(R"({"machine": "nope", "inputs": ["a"]})")));
}

TEST_CASE("validate reports a negative residual") {
  ValidationResult ok = cmd_validate("binary-verifier");
  CHECK(ok.pass);
  ValidationResult bad = cmd_validate("binary-verifier:c=1");
  CHECK_FALSE(bad.pass);
  CHECK(validation_to_text(bad).find("-3") != std::string::npos);
}

TEST_CASE("every builtin dumps and validates") {
  for (const auto& name : builtin_machine_names()) {
    CAPTURE(name);
    CHECK(cmd_validate(name).pass);
    CHECK_FALSE(cmd_dump(name).empty());
  }
}
