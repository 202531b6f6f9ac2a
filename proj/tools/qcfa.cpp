// qcfa: validate, run, sweep, search and dump machines from the command line.

#include "qcfa/errors.hpp"
#include "qcfa/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct Overrides {
  std::string config;
  std::string machine;
  std::vector<std::string> inputs;
  std::optional<long> precision;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> engine;
  std::optional<std::uint64_t> trials;
  std::optional<std::int64_t> max_steps;
  std::optional<std::size_t> node_budget;
  std::optional<std::string> prover;
  std::optional<std::string> stage;
  std::optional<std::size_t> symbol_budget;
  std::string out;
  std::string format = "csv";
};

void add_experiment_options(CLI::App* app, Overrides& o) {
  app->add_option("config", o.config, "Experiment file (JSON)");
  app->add_option("-m,--machine", o.machine, "Builtin name (name:key=value,...) or definition file");
  app->add_option("-i,--input", o.inputs, "Input word; shorthand such as aba^7 is expanded, eps is empty");
  app->add_option("--precision", o.precision, "Working precision in bits");
  app->add_option("--seed", o.seed, "Monte Carlo seed");
  app->add_option("--engine", o.engine, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  app->add_option("--trials", o.trials, "Monte Carlo trials");
  app->add_option("--max-steps", o.max_steps, "Step budget");
  app->add_option("--node-budget", o.node_budget, "Configurations per round (exact engine)");
  app->add_option("--prover", o.prover, "honest or final-bit")->check(CLI::IsMember({"honest", "final-bit"}));
  app->add_option("--stage", o.stage, "Only count steps in states with this name prefix");
  app->add_option("--symbol-budget", o.symbol_budget, "Transcript length for search");
  app->add_option("-o,--out", o.out, "Write the report here instead of stdout");
  app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

qcfa::ExperimentConfig resolve(const Overrides& o) {
  qcfa::ExperimentConfig cfg;
  if (!o.config.empty()) cfg = qcfa::load_experiment_file(o.config);
  if (!o.machine.empty()) cfg.machine = qcfa::parse_machine_choice(o.machine);
  if (cfg.machine.builtin.empty() && cfg.machine.file.empty()) {
    throw qcfa::ContractError("no machine given (use a config file or --machine)");
  }
  for (const auto& in : o.inputs) cfg.inputs.push_back(qcfa::expand_input(in));
  if (o.precision) cfg.precision = *o.precision;
  if (o.seed) cfg.seed = *o.seed;
  if (o.engine) cfg.engine = *o.engine == "mc" ? qcfa::EngineKind::monte_carlo : qcfa::EngineKind::exact;
  if (o.trials) cfg.trials = *o.trials;
  if (o.max_steps) cfg.max_steps = *o.max_steps;
  if (o.node_budget) cfg.node_budget = *o.node_budget;
  if (o.prover) cfg.prover = *o.prover;
  if (o.stage) cfg.stage_prefix = *o.stage;
  if (o.symbol_budget) cfg.symbol_budget = *o.symbol_budget;
  return cfg;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw qcfa::ContractError("cannot write '" + out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for two-way finite automata with quantum and classical states"};
  app.require_subcommand(1);

  std::string target;
  long precision = 192;
  std::string out;

  auto* validate = app.add_subcommand("validate", "Check the completeness condition of every superoperator");
  validate->add_option("machine", target, "Builtin name or definition file")->required();
  validate->add_option("--precision", precision, "Working precision in bits");

  auto* dump = app.add_subcommand("dump", "Write a machine as a definition file");
  dump->add_option("machine", target, "Builtin name or definition file")->required();
  dump->add_option("--precision", precision, "Working precision in bits");
  dump->add_option("-o,--out", out, "Output path");

  Overrides run_o, sweep_o, search_o;
  auto* run = app.add_subcommand("run", "Evaluate a machine on each input");
  add_experiment_options(run, run_o);
  auto* sweep = app.add_subcommand("sweep", "Fit the growth of expected steps or rounds against input length");
  add_experiment_options(sweep, sweep_o);
  sweep_o.format = "json";
  auto* search = app.add_subcommand("search", "Exhaustive search over prover transcripts");
  add_experiment_options(search, search_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      qcfa::ValidationResult r = qcfa::cmd_validate(target, precision);
      std::cout << qcfa::validation_to_text(r);
      return r.pass ? 0 : 1;
    }
    if (*dump) {
      emit(qcfa::cmd_dump(target, precision), out);
      return 0;
    }
    if (*run) {
      auto rows = qcfa::cmd_run(resolve(run_o));
      emit(run_o.format == "json" ? qcfa::rows_to_json(rows) : qcfa::rows_to_csv(rows), run_o.out);
      return 0;
    }
    if (*sweep) {
      qcfa::SweepReport r = qcfa::cmd_sweep(resolve(sweep_o));
      if (sweep_o.format == "json") {
        emit(qcfa::sweep_to_json(r), sweep_o.out);
      } else {
        emit(qcfa::rows_to_csv(r.rows), sweep_o.out);
        if (r.fit) {
          std::cerr << "fit " << r.fit->model << " slope " << r.fit->slope << " intercept " << r.fit->intercept << "\n";
        }
      }
      if (!r.error.empty()) std::cerr << "fit: " << r.error << "\n";
      return r.fit ? 0 : 1;
    }
    if (*search) {
      auto rows = qcfa::cmd_search(resolve(search_o));
      emit(search_o.format == "json" ? qcfa::search_to_json(rows) : qcfa::search_to_csv(rows), search_o.out);
      return 0;
    }
  } catch (const qcfa::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
