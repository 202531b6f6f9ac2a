#include "qcfa/experiment.hpp"

#include "qcfa/errors.hpp"
#include "qcfa/machine_format.hpp"
#include "qcfa/montecarlo.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qcfa {
namespace {

using nlohmann::json;

constexpr std::size_t kReportDigits = 40;

std::string decimal(const Scalar& x) { return x.to_string(kReportDigits); }
std::string decimal(const Rational& q) { return decimal(Scalar(q)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Target {
  MachineSpec spec;
  std::optional<RecognizerBundle> bundle;
  std::optional<VerifierSpec> verifier;
  std::optional<LanguageOracle> oracle;
};

std::string default_alphabet(const std::string& builtin) {
  return builtin == "unary-verifier" ? kUnaryAlphabet : kBinaryAlphabet;
}

LanguageOracle oracle_for(const OracleChoice& o, const std::string& alphabet) {
  if (o.preset == "empty") return LanguageOracle::empty(alphabet, o.depth);
  if (o.preset == "full") return LanguageOracle::full(alphabet, o.depth);
  if (o.preset == "bits") return LanguageOracle(alphabet, o.bits);
  if (o.preset == "random") return LanguageOracle::random(alphabet, o.depth, o.seed);
  throw ContractError("unknown oracle preset '" + o.preset + "'");
}

Target build_target(const MachineChoice& m, const OracleChoice& o) {
  if (!m.file.empty()) return {load_machine_file(m.file), std::nullopt, std::nullopt, std::nullopt};
  const std::string& name = m.builtin;
  LanguageOracle oracle = oracle_for(o, o.alphabet.empty() ? default_alphabet(name) : o.alphabet);
  auto recognizer = [&](RecognizerBundle b) {
    MachineSpec spec = b.spec;
    return Target{std::move(spec), std::move(b), std::nullopt, oracle};
  };
  auto verifier = [&](VerifierSpec v) {
    MachineSpec spec = v.machine;
    return Target{std::move(spec), std::nullopt, std::move(v), oracle};
  };
  if (name == "power-eq") return recognizer(build_power_eq());
  if (name == "power-eq-L-phase") return recognizer(build_power_eq_L_phase(theta_of(oracle), oracle));
  if (name == "power-eq-L") return recognizer(build_power_eq_L(theta_of(oracle), oracle));
  if (name == "stochastic-1qcfa") return recognizer(build_stochastic_1qcfa(theta_of(oracle), oracle));
  if (name == "upower-counter") return recognizer(build_2qcca_upower(theta_of(oracle), oracle));
  if (name == "power-eq-L-counter") return recognizer(build_2qcca_power_eq_L(theta_of(oracle), oracle));
  Rational gamma = m.gamma ? *m.gamma : gamma_of(oracle).value;
  if (name == "unary-verifier") return verifier(build_unary_verifier(gamma));
  if (name == "binary-verifier") return verifier(build_binary_verifier(gamma, m.c));
  throw ContractError("unknown builtin machine '" + name + "'");
}

std::optional<bool> verifier_membership(const Target& t, std::string_view input) {
  if (!t.oracle) return std::nullopt;
  if (!t.verifier->binary) return t.oracle->member_at(input.size() + 1);
  return t.oracle->contains(input);
}

std::optional<bool> reference_of(const Target& t, std::string_view input) {
  try {
    if (t.bundle) return t.bundle->reference_membership(input);
    if (t.verifier) return verifier_membership(t, input);
  } catch (const OutOfRangeError&) {
  }
  return std::nullopt;
}

std::string claim_text(const ClaimedBounds& c, bool member) {
  if (member) return std::string("accept") + (c.member_strict ? ">" : ">=") + to_string(c.member_accept);
  return std::string("reject") + (c.nonmember_strict ? ">" : ">=") + to_string(c.nonmember_reject);
}

ProverStrategy prover_for(const ExperimentConfig& cfg, const Target& t) {
  if (!t.oracle) throw ContractError("proof-system runs need a builtin verifier");
  if (cfg.prover == "honest") return honest_prover(*t.oracle);
  if (cfg.prover == "final-bit") return final_bit_adversary(*t.oracle);
  throw ContractError("unknown prover '" + cfg.prover + "'");
}

// Expected steps spent in states with the given prefix over a whole run.
Scalar expected_stage_steps(const MachineSpec& spec, std::string_view input, const EngineOptions& options) {
  RoundStatistics first = evaluate_round(spec, input, nullptr, RoundStart::initial, options);
  Scalar total = *first.stage_steps;
  if (first.p_restart.is_zero()) return total;
  RoundStatistics steady = evaluate_round(spec, input, nullptr, RoundStart::restart_entry, options);
  Scalar settled = steady.p_accept + steady.p_reject + steady.p_nonhalt;
  if (settled.is_zero()) throw ContractError("the machine restarts forever");
  return total + first.p_restart * *steady.stage_steps / settled;
}

ReportRow run_one(const ExperimentConfig& cfg, const Target& t, const std::string& input) {
  ReportRow row;
  row.input = compact_input(input);
  row.input_length = input.size();
  row.engine = to_string(cfg.engine);
  row.precision = cfg.precision;
  row.reference_membership = reference_of(t, input);
  try {
    Scalar accept, reject, nonhalt(0L);
    std::optional<Scalar> tolerance;
    std::optional<Scalar> expected;
    std::optional<ProverStrategy> prover;
    if (t.verifier) prover = prover_for(cfg, t);
    if (cfg.engine == EngineKind::exact) {
      EngineOptions opt;
      opt.max_steps = cfg.max_steps;
      opt.node_budget = cfg.node_budget;
      opt.stage_prefix = cfg.stage_prefix;
      if (t.verifier) {
        ProtocolResult r = run_protocol(*t.verifier, *prover, input);
        accept = Scalar(r.overall_acceptance);
        reject = Scalar(1L) - accept;
        expected = Scalar(r.expected_rounds);
        row.expected_kind = "rounds";
      } else {
        RunResult r = run_exact(t.spec, input, opt);
        accept = r.accept_prob;
        reject = r.reject_prob;
        nonhalt = r.nonhalt_mass;
        expected = cfg.stage_prefix.empty() ? r.expected_steps : expected_stage_steps(t.spec, input, opt);
        row.expected_kind = cfg.stage_prefix.empty() ? "steps" : "stage-steps";
      }
    } else {
      MonteCarloOptions opt;
      opt.trials = cfg.trials;
      opt.seed = cfg.seed;
      opt.max_steps = cfg.max_steps;
      RunResult r = run_monte_carlo(t.spec, input, opt, prover ? &*prover : nullptr);
      accept = r.accept_prob;
      reject = r.reject_prob;
      nonhalt = r.nonhalt_mass;
      expected = r.expected_steps;
      row.expected_kind = "steps";
      row.seed = cfg.seed;
      row.trials = cfg.trials;
      // Monte Carlo rows are judged within three standard errors.
      tolerance = Scalar(3L) * (r.accept_stderr > r.reject_stderr ? r.accept_stderr : r.reject_stderr);
    }
    row.accept_prob = decimal(accept);
    row.reject_prob = decimal(reject);
    row.nonhalt_prob = decimal(nonhalt);
    row.expected = expected ? decimal(*expected) : "unbounded";
    if (row.reference_membership) {
      const bool member = *row.reference_membership;
      if (t.bundle) {
        row.claim = claim_text(t.bundle->claimed, member);
        row.pass = t.bundle->meets_claim(member, accept, reject, tolerance);
      } else if (t.verifier) {
        ClaimedBounds c;
        c.member_accept = Rational(3, 4);
        c.nonmember_reject = Rational(4, 7);
        row.claim = claim_text(c, member);
        const Scalar tol = tolerance ? *tolerance : Scalar::pow2(-cfg.precision / 2);
        row.pass = member ? accept >= Scalar(c.member_accept) - tol : reject >= Scalar(c.nonmember_reject) - tol;
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_bool(const std::optional<bool>& b) { return b ? (*b ? "true" : "false") : ""; }

json opt_json(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

json row_json(const ReportRow& r) {
  return {{"input", r.input},
          {"input_length", r.input_length},
          {"engine", r.engine},
          {"precision", r.precision},
          {"accept_prob", r.accept_prob},
          {"reject_prob", r.reject_prob},
          {"nonhalt_prob", r.nonhalt_prob},
          {"expected", r.expected},
          {"expected_kind", r.expected_kind},
          {"reference_membership", opt_json(r.reference_membership)},
          {"claim", r.claim},
          {"pass", opt_json(r.pass)},
          {"seed", r.seed ? json(*r.seed) : json(nullptr)},
          {"trials", r.trials},
          {"error", r.error}};
}

std::vector<std::string> generate(const json& g) {
  const std::string kind = g.at("generator").get<std::string>();
  std::vector<std::string> out;
  if (kind == "power-eq-members") {
    for (std::size_t n = 0; n <= g.at("max_n").get<std::size_t>(); ++n) out.push_back(power_eq_member(n));
  } else if (kind == "unary") {
    for (const auto& n : g.at("lengths")) out.emplace_back(n.get<std::size_t>(), 'a');
  } else if (kind == "binary-upto") {
    const std::size_t max_len = g.at("max_length").get<std::size_t>();
    for (std::uint64_t i = 1;; ++i) {
      std::string s = lex_string(kBinaryAlphabet, i);
      if (s.size() > max_len) break;
      out.push_back(std::move(s));
    }
  } else if (kind == "powers-of-8") {
    std::uint64_t m = 1;
    for (std::size_t k = 0; k <= g.at("max_exponent").get<std::size_t>(); ++k, m *= 8) out.emplace_back(m, 'a');
  } else {
    throw ParseError("unknown input generator '" + kind + "'", 1, 1);
  }
  return out;
}

}  // namespace

std::string expand_input(std::string_view s) {
  std::string out;
  if (s == "eps") return out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) continue;
    if (s[i] == '^') {
      if (out.empty()) throw ParseError("'^' without a preceding symbol", 1, i + 1);
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i + 1) throw ParseError("'^' must be followed by a count", 1, i + 1);
      const std::size_t k = std::stoull(std::string(s.substr(i + 1, j - i - 1)));
      const char c = out.back();
      out.pop_back();
      out.append(k, c);
      i = j - 1;
      continue;
    }
    out += s[i];
  }
  return out;
}

std::string compact_input(std::string_view input) {
  if (input.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < input.size();) {
    std::size_t j = i;
    while (j < input.size() && input[j] == input[i]) ++j;
    if (j - i > 3) {
      out += input[i];
      out += '^' + std::to_string(j - i);
    } else {
      out.append(j - i, input[i]);
    }
    i = j;
  }
  return out;
}

const std::vector<std::string>& builtin_machine_names() {
  static const std::vector<std::string> names{"power-eq",         "power-eq-L-phase", "power-eq-L",
                                              "stochastic-1qcfa", "upower-counter",   "power-eq-L-counter",
                                              "unary-verifier",   "binary-verifier"};
  return names;
}

MachineChoice parse_machine_choice(std::string_view text) {
  MachineChoice m;
  const std::string t(text);
  const auto colon = t.find(':');
  const std::string head = t.substr(0, colon);
  const auto& names = builtin_machine_names();
  if (std::find(names.begin(), names.end(), head) == names.end()) {
    m.file = t;
    return m;
  }
  m.builtin = head;
  if (colon == std::string::npos) return m;
  std::stringstream params(t.substr(colon + 1));
  std::string kv;
  while (std::getline(params, kv, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value in '" + kv + "'", 1, colon + 2);
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (key == "gamma") {
      m.gamma = parse_rational(value);
    } else if (key == "c") {
      m.c = parse_rational(value);
    } else {
      throw ParseError("unknown machine parameter '" + key + "'", 1, colon + 2);
    }
  }
  return m;
}

ExperimentConfig parse_experiment(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed experiment: ") + e.what(), 1, e.byte);
  }
  ExperimentConfig cfg;
  try {
    const json& m = doc.at("machine");
    if (m.is_string()) {
      cfg.machine = parse_machine_choice(m.get<std::string>());
    } else if (m.contains("file")) {
      cfg.machine.file = m.at("file").get<std::string>();
    } else {
      cfg.machine = parse_machine_choice(m.at("builtin").get<std::string>());
      if (m.contains("c")) cfg.machine.c = parse_rational(m.at("c").get<std::string>());
      if (m.contains("gamma")) cfg.machine.gamma = parse_rational(m.at("gamma").get<std::string>());
    }
    if (doc.contains("oracle")) {
      const json& o = doc.at("oracle");
      if (o.contains("file")) {
        json f = json::parse(read_file(o.at("file").get<std::string>()));
        cfg.oracle.alphabet = f.value("alphabet", "");
        cfg.oracle.preset = "bits";
        cfg.oracle.bits = f.at("bits").get<std::vector<bool>>();
        cfg.oracle.depth = cfg.oracle.bits.size();
      } else {
        cfg.oracle.alphabet = o.value("alphabet", "");
        cfg.oracle.depth = o.value("depth", cfg.oracle.depth);
        cfg.oracle.seed = o.value("seed", cfg.oracle.seed);
        cfg.oracle.preset = o.value("preset", std::string("random"));
        if (o.contains("bits")) {
          cfg.oracle.preset = "bits";
          cfg.oracle.bits = o.at("bits").get<std::vector<bool>>();
          cfg.oracle.depth = cfg.oracle.bits.size();
        }
      }
    }
    if (doc.contains("inputs")) {
      for (const auto& in : doc.at("inputs")) {
        if (in.is_string()) {
          cfg.inputs.push_back(expand_input(in.get<std::string>()));
        } else {
          for (auto& s : generate(in)) cfg.inputs.push_back(std::move(s));
        }
      }
    }
    const std::string engine = doc.value("engine", std::string("exact"));
    if (engine == "exact") {
      cfg.engine = EngineKind::exact;
    } else if (engine == "mc" || engine == "monte-carlo") {
      cfg.engine = EngineKind::monte_carlo;
    } else {
      throw ParseError("unknown engine '" + engine + "'", 1, 1);
    }
    cfg.precision = doc.value("precision", cfg.precision);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.trials = doc.value("trials", cfg.trials);
    cfg.max_steps = doc.value("max_steps", cfg.max_steps);
    cfg.node_budget = doc.value("node_budget", cfg.node_budget);
    cfg.prover = doc.value("prover", cfg.prover);
    cfg.fit = doc.value("fit", cfg.fit);
    cfg.stage_prefix = doc.value("stage_prefix", cfg.stage_prefix);
    cfg.symbol_budget = doc.value("symbol_budget", cfg.symbol_budget);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid experiment: ") + e.what(), 1, 1);
  }
  return cfg;
}

ExperimentConfig load_experiment_file(const std::string& path) { return parse_experiment(read_file(path)); }

LanguageOracle make_oracle(const ExperimentConfig& config) {
  return oracle_for(config.oracle,
                    config.oracle.alphabet.empty() ? default_alphabet(config.machine.builtin) : config.oracle.alphabet);
}

std::vector<ReportRow> cmd_run(const ExperimentConfig& config) {
  PrecisionScope scope(config.precision);
  Target t = build_target(config.machine, config.oracle);
  std::vector<ReportRow> rows;
  for (const auto& input : config.inputs) rows.push_back(run_one(config, t, input));
  return rows;
}

FitResult fit_growth(const std::vector<double>& x, const std::vector<double>& y, const std::string& model) {
  if (x.size() != y.size()) throw ContractError("fit needs matching x and y");
  if (x.size() < 3) throw ContractError("a growth fit needs at least three points, got " + std::to_string(x.size()));
  if (model != "loglog" && model != "loglinear") throw ContractError("unknown fit model '" + model + "'");
  FitResult f;
  f.model = model;
  std::vector<double> u, v;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] <= 0 || (model == "loglog" && x[i] <= 0)) throw ContractError("log fit needs positive values");
    u.push_back(model == "loglog" ? std::log(x[i]) : x[i]);
    v.push_back(std::log(y[i]));
  }
  const double n = static_cast<double>(u.size());
  double su = 0, sv = 0, suu = 0, suv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    su += u[i];
    sv += v[i];
    suu += u[i] * u[i];
    suv += u[i] * v[i];
  }
  const double den = n * suu - su * su;
  if (den == 0) throw ContractError("fit needs at least two distinct x values");
  f.slope = (n * suv - su * sv) / den;
  f.intercept = (sv - f.slope * su) / n;
  for (std::size_t i = 0; i < u.size(); ++i) f.residuals.push_back(v[i] - (f.intercept + f.slope * u[i]));
  return f;
}

SweepReport cmd_sweep(const ExperimentConfig& config) {
  SweepReport report;
  report.rows = cmd_run(config);
  std::string model = config.fit;
  if (model == "auto") model = report.rows.empty() || report.rows.front().expected_kind != "rounds" ? "loglog" : "loglinear";
  std::vector<double> x, y;
  for (const auto& r : report.rows) {
    if (!r.error.empty() || r.expected == "unbounded") continue;
    x.push_back(static_cast<double>(r.input_length));
    y.push_back(std::stod(r.expected));
  }
  try {
    report.fit = fit_growth(x, y, model);
  } catch (const ContractError& e) {
    report.error = e.what();
  }
  return report;
}

std::vector<SearchRow> cmd_search(const ExperimentConfig& config) {
  PrecisionScope scope(config.precision);
  Target t = build_target(config.machine, config.oracle);
  if (!t.verifier) throw ContractError("search needs a builtin verifier");
  std::vector<SearchRow> rows;
  for (const auto& input : config.inputs) {
    SearchRow row;
    row.input = compact_input(input);
    row.reference_membership = reference_of(t, input);
    try {
      std::size_t budget = config.symbol_budget;
      if (budget == 0) {
        budget = t.verifier->binary ? honest_binary_transmission(*t.oracle, input).size() : input.size() + 1;
      }
      AdversarySearchResult r = exhaustive_adversary_search(*t.verifier, input, budget);
      row.max_acceptance = to_string(r.max_acceptance);
      row.max_acceptance_decimal = decimal(r.max_acceptance);
      row.witness = render_transmission(r.witness);
      row.evaluated = r.evaluated;
      row.pruned = r.pruned;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ValidationResult cmd_validate(const std::string& target, long precision) {
  PrecisionScope scope(precision);
  ValidationResult out;
  try {
    Target t = build_target(parse_machine_choice(target), OracleChoice{});
    out.pass = true;
    for (const auto& op : t.spec.operators()) {
      ValidationReport rep = validate_superoperator(op);
      out.lines.push_back({op.name(), rep.pass, rep.residual_norm.to_string(6)});
      out.pass = out.pass && rep.pass;
    }
  } catch (const CoefficientError& e) {
    out.pass = false;
    out.error = e.what();
  } catch (const StructuralError& e) {
    out.pass = false;
    out.error = e.what();
  }
  return out;
}

std::string cmd_dump(const std::string& target, long precision) {
  PrecisionScope scope(precision);
  return dump_machine(build_target(parse_machine_choice(target), OracleChoice{}).spec);
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::string out =
      "schema_version,input,input_length,engine,precision,accept_prob,reject_prob,nonhalt_prob,expected,expected_kind,"
      "reference_membership,claim,pass,seed,trials,error\n";
  for (const auto& r : rows) {
    std::vector<std::string> f{std::to_string(kReportSchemaVersion),
                               r.input,
                               std::to_string(r.input_length),
                               r.engine,
                               std::to_string(r.precision),
                               r.accept_prob,
                               r.reject_prob,
                               r.nonhalt_prob,
                               r.expected,
                               r.expected_kind,
                               opt_bool(r.reference_membership),
                               r.claim,
                               opt_bool(r.pass),
                               r.seed ? std::to_string(*r.seed) : "",
                               std::to_string(r.trials),
                               r.error};
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + csv_field(f[i]);
    out += '\n';
  }
  return out;
}

std::string rows_to_json(const std::vector<ReportRow>& rows) {
  json doc{{"schema_version", kReportSchemaVersion}, {"rows", json::array()}};
  for (const auto& r : rows) doc["rows"].push_back(row_json(r));
  return doc.dump(2) + "\n";
}

std::string sweep_to_json(const SweepReport& report) {
  json doc{{"schema_version", kReportSchemaVersion}, {"rows", json::array()}};
  for (const auto& r : report.rows) doc["rows"].push_back(row_json(r));
  if (report.fit) {
    doc["fit"] = {{"model", report.fit->model},
                  {"slope", report.fit->slope},
                  {"intercept", report.fit->intercept},
                  {"residuals", report.fit->residuals}};
  } else {
    doc["fit"] = nullptr;
  }
  doc["error"] = report.error;
  return doc.dump(2) + "\n";
}

std::string search_to_csv(const std::vector<SearchRow>& rows) {
  std::string out = "schema_version,input,reference_membership,max_acceptance,max_acceptance_decimal,witness,evaluated,pruned,error\n";
  for (const auto& r : rows) {
    std::vector<std::string> f{std::to_string(kReportSchemaVersion), r.input, opt_bool(r.reference_membership),
                               r.max_acceptance, r.max_acceptance_decimal, r.witness,
                               std::to_string(r.evaluated), std::to_string(r.pruned), r.error};
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + csv_field(f[i]);
    out += '\n';
  }
  return out;
}

std::string search_to_json(const std::vector<SearchRow>& rows) {
  json doc{{"schema_version", kReportSchemaVersion}, {"rows", json::array()}};
  for (const auto& r : rows) {
    doc["rows"].push_back({{"input", r.input},
                           {"reference_membership", opt_json(r.reference_membership)},
                           {"max_acceptance", r.max_acceptance},
                           {"max_acceptance_decimal", r.max_acceptance_decimal},
                           {"witness", r.witness},
                           {"evaluated", r.evaluated},
                           {"pruned", r.pruned},
                           {"error", r.error}});
  }
  return doc.dump(2) + "\n";
}

std::string validation_to_text(const ValidationResult& result) {
  std::ostringstream out;
  for (const auto& l : result.lines)
    out << (l.pass ? "pass " : "FAIL ") << l.superoperator << " residual " << l.residual << "\n";
  if (!result.error.empty()) out << "error: " << result.error << "\n";
  out << (result.pass ? "all superoperators pass" : "validation failed") << "\n";
  return out.str();
}

}  // namespace qcfa
