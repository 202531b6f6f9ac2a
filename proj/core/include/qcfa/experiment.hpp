#pragma once

// Experiment configurations, report rows and the operations behind the
// command-line subcommands.

#include "qcfa/constructions.hpp"
#include "qcfa/engine.hpp"
#include "qcfa/proofsystems.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcfa {

inline constexpr int kReportSchemaVersion = 1;

/// "aba^7ba^56" -> "ab" + 7 a's + "b" + 56 a's. Spaces are ignored; "eps"
/// and the empty string denote the empty input.
std::string expand_input(std::string_view shorthand);
/// Inverse of expand_input using runs of length > 3.
std::string compact_input(std::string_view input);

/// Names accepted as builtin machines.
const std::vector<std::string>& builtin_machine_names();

struct OracleChoice {
  std::string alphabet;  // empty: chosen by the machine
  std::size_t depth = 12;
  std::uint64_t seed = 1;
  std::string preset = "random";  // random | empty | full | bits
  std::vector<bool> bits;         // preset "bits"
};

struct MachineChoice {
  std::string builtin;  // one of builtin_machine_names(), or empty when `file` is set
  std::string file;
  std::optional<Rational> gamma;  // verifiers: overrides the oracle's encoding
  Rational c{1, 5};               // binary verifier coefficient
};

/// "power-eq-L", "binary-verifier:c=1", "unary-verifier:gamma=1/3" or a file path.
MachineChoice parse_machine_choice(std::string_view text);

struct ExperimentConfig {
  MachineChoice machine;
  OracleChoice oracle;
  std::vector<std::string> inputs;  // expanded
  EngineKind engine = EngineKind::exact;
  long precision = 192;
  std::uint64_t seed = 1;
  std::uint64_t trials = 10000;
  std::int64_t max_steps = 1'000'000;
  std::size_t node_budget = 10'000'000;
  std::string prover = "honest";  // honest | final-bit
  std::string fit = "auto";       // auto | loglog | loglinear
  std::string stage_prefix;       // sweep over the steps spent in one stage
  std::size_t symbol_budget = 0;  // search; 0 = length of the honest transmission
};

/// Parses an experiment document (JSON). Inputs may be shorthand strings or
/// generators: {"generator": "power-eq-members", "max_n": 2},
/// {"generator": "unary", "lengths": [0, 1]}, {"generator": "binary-upto",
/// "max_length": 2}, {"generator": "powers-of-8", "max_exponent": 3}.
ExperimentConfig parse_experiment(std::string_view json_text);
ExperimentConfig load_experiment_file(const std::string& path);

LanguageOracle make_oracle(const ExperimentConfig& config);

struct ReportRow {
  std::string input;  // compact form
  std::size_t input_length = 0;
  std::string engine;
  long precision = 0;
  std::string accept_prob;
  std::string reject_prob;
  std::string nonhalt_prob;
  std::string expected;       // steps or rounds
  std::string expected_kind;  // "steps" | "rounds"
  std::optional<bool> reference_membership;
  std::string claim;  // e.g. "accept>=13/20"
  std::optional<bool> pass;
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 0;
  std::string error;
};

std::vector<ReportRow> cmd_run(const ExperimentConfig& config);

struct FitResult {
  std::string model;  // "loglog" | "loglinear"
  double slope = 0;
  double intercept = 0;
  std::vector<double> residuals;
};
/// Least squares of log y against log x (loglog) or x (loglinear). Needs
/// at least three points.
FitResult fit_growth(const std::vector<double>& x, const std::vector<double>& y, const std::string& model);

struct SweepReport {
  std::vector<ReportRow> rows;
  std::optional<FitResult> fit;
  std::string error;
};
SweepReport cmd_sweep(const ExperimentConfig& config);

struct SearchRow {
  std::string input;
  std::optional<bool> reference_membership;
  std::string max_acceptance;  // exact rational
  std::string max_acceptance_decimal;
  std::string witness;
  std::size_t evaluated = 0;
  std::size_t pruned = 0;
  std::string error;
};
std::vector<SearchRow> cmd_search(const ExperimentConfig& config);

struct ValidationLine {
  std::string superoperator;
  bool pass = false;
  std::string residual;
};
struct ValidationResult {
  bool pass = false;
  std::vector<ValidationLine> lines;
  std::string error;
};
/// `target` as in parse_machine_choice.
ValidationResult cmd_validate(const std::string& target, long precision = 192);
std::string cmd_dump(const std::string& target, long precision = 192);

std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::string rows_to_json(const std::vector<ReportRow>& rows);
std::string sweep_to_json(const SweepReport& report);
std::string search_to_csv(const std::vector<SearchRow>& rows);
std::string search_to_json(const std::vector<SearchRow>& rows);
std::string validation_to_text(const ValidationResult& result);

}  // namespace qcfa
