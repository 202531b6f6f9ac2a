#include "qcfa/machine_format.hpp"

#include "qcfa/errors.hpp"
#include "qcfa/expression.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace qcfa {
namespace {

using nlohmann::json;

std::string entry_text(const Scalar& x) { return x.to_string(); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(entry_text(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json rational_matrix_json(const RationalMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

[[noreturn]] void bad(const std::string& what) { throw ParseError(what, 1, 1); }

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) bad(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::string text(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

char single_char(const json& v, const char* key) {
  if (!v.is_string() || v.get<std::string>().size() != 1) bad(std::string("field '") + key + "' must be one character");
  return v.get<std::string>()[0];
}

template <typename T>
std::vector<std::vector<T>> grid(const json& v, std::size_t dim, const std::string& where,
                                 T (*convert)(const std::string&)) {
  if (!v.is_array() || v.size() != dim) bad(where + ": expected " + std::to_string(dim) + " rows");
  std::vector<std::vector<T>> out;
  for (const auto& row : v) {
    if (!row.is_array() || row.size() != dim) bad(where + ": expected " + std::to_string(dim) + " columns");
    std::vector<T> r;
    for (const auto& e : row) {
      if (!e.is_string()) bad(where + ": matrix entries are strings");
      r.push_back(convert(e.get<std::string>()));
    }
    out.push_back(std::move(r));
  }
  return out;
}

Rational rational_of(const std::string& s) { return parse_rational(s); }
ExpressionValue expression_of(const std::string& s) { return evaluate_expression(s); }

OperationElement load_element(const json& e, std::size_t dim) {
  const std::string label = text(e, "label");
  if (e.contains("rotation")) {
    const json& r = e.at("rotation");
    SymbolicAngle a{parse_rational(text(r, "turns")), Integer(text(r, "sqrt2_halfturns"), 10)};
    return OperationElement::rotation(label, a);
  }
  if (e.contains("exact")) {
    const json& x = e.at("exact");
    auto rows = grid<Rational>(field(x, "matrix"), dim, "element '" + label + "'", rational_of);
    RationalMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = rows[i][j];
    return OperationElement::exact(label, parse_rational(text(x, "scale_squared")), std::move(m));
  }
  auto rows = grid<ExpressionValue>(field(e, "matrix"), dim, "element '" + label + "'", expression_of);
  // Exact when every nonzero entry is a rational multiple of one sqrt(s).
  std::optional<Rational> radicand;
  bool exact = !e.value("inexact", false);
  for (const auto& row : rows)
    for (const auto& v : row) {
      if (!v.exact) {
        exact = false;
      } else if (v.exact->coefficient != 0) {
        if (radicand && *radicand != v.exact->radicand) exact = false;
        radicand = v.exact->radicand;
      }
    }
  if (exact) {
    RationalMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = rows[i][j].exact->coefficient;
    return OperationElement::exact(label, radicand.value_or(Rational(1)), std::move(m));
  }
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = rows[i][j].numeric;
  return OperationElement(label, std::move(m));
}

}  // namespace

std::string dump_machine(const MachineSpec& spec) {
  json doc;
  doc["schema_version"] = kMachineSchemaVersion;
  doc["name"] = spec.name();
  doc["kind"] = to_string(spec.kind());
  doc["alphabet"] = spec.alphabet();
  doc["prover_alphabet"] = spec.prover_alphabet();
  doc["register_dim"] = spec.register_dim();
  json reg = json::array();
  for (const auto& q : spec.initial_register_exact()) reg.push_back(to_string(q));
  doc["initial_register"] = reg;

  json states = json::array();
  for (const auto& s : spec.states())
    states.push_back({{"name", s.name}, {"role", to_string(s.role)}, {"reads_prover", s.reads_prover}});
  doc["states"] = states;
  doc["initial"] = spec.state(spec.initial()).name;
  doc["restart_entry"] = spec.state(spec.restart_entry()).name;

  json ops = json::array();
  for (const auto& op : spec.operators()) {
    json elements = json::array();
    for (const auto& e : op.elements()) {
      json el{{"label", e.label()}, {"matrix", matrix_json(e.matrix())}};
      if (e.rotation_angle()) {
        el["rotation"] = {{"turns", to_string(e.rotation_angle()->turns)},
                          {"sqrt2_halfturns", e.rotation_angle()->sqrt2_halfturns.get_str()}};
      } else if (e.exact_form()) {
        el["exact"] = {{"scale_squared", to_string(e.exact_form()->scale_squared)},
                       {"matrix", rational_matrix_json(e.exact_form()->matrix)}};
      } else {
        el["inexact"] = true;
      }
      elements.push_back(std::move(el));
    }
    ops.push_back({{"name", op.name()}, {"elements", std::move(elements)}});
  }
  doc["superoperators"] = ops;

  json rules = json::array();
  for (const auto& r : spec.rules()) {
    json jr{{"state", spec.state(r.state).name}, {"superoperator", spec.operators()[r.op].name()}};
    if (r.symbol) jr["symbol"] = std::string(1, *r.symbol);
    if (r.counter_zero) jr["counter_zero"] = *r.counter_zero;
    if (r.prover) jr["prover"] = std::string(1, *r.prover);
    json outs = json::array();
    for (const auto& t : r.on_outcome) {
      json jt{{"next", spec.state(t.next).name}, {"move", t.move}};
      if (t.counter_delta != 0) jt["counter_delta"] = t.counter_delta;
      outs.push_back(std::move(jt));
    }
    jr["outcomes"] = std::move(outs);
    rules.push_back(std::move(jr));
  }
  doc["transitions"] = rules;
  return doc.dump(1) + "\n";
}

MachineSpec load_machine(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < json_text.size(); ++i) {
      if (json_text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed machine definition: " + std::string(e.what()), line, col);
  }
  try {
    if (!doc.is_object()) bad("machine definition must be a JSON object");
    if (doc.contains("schema_version") && doc.at("schema_version") != kMachineSchemaVersion) {
      bad("unsupported schema_version " + doc.at("schema_version").dump());
    }
    const MachineKind kind = machine_kind_from_string(text(doc, "kind"));
    const std::size_t dim = field(doc, "register_dim").get<std::size_t>();

    std::vector<Rational> reg;
    for (const auto& q : field(doc, "initial_register")) reg.push_back(parse_rational(q.get<std::string>()));
    if (reg.size() != dim) bad("initial_register has " + std::to_string(reg.size()) + " entries, expected " + std::to_string(dim));

    std::vector<StateInfo> states;
    std::map<std::string, StateId> state_ids;
    for (const auto& s : field(doc, "states")) {
      StateInfo info{text(s, "name"), state_role_from_string(s.value("role", "normal")), s.value("reads_prover", false)};
      if (!state_ids.emplace(info.name, static_cast<StateId>(states.size())).second) bad("duplicate state '" + info.name + "'");
      states.push_back(std::move(info));
    }
    auto state_of = [&](const std::string& name) {
      auto it = state_ids.find(name);
      if (it == state_ids.end()) bad("unknown state '" + name + "'");
      return it->second;
    };

    std::vector<Superoperator> ops;
    std::map<std::string, std::size_t> op_ids;
    for (const auto& o : field(doc, "superoperators")) {
      std::vector<OperationElement> elements;
      for (const auto& e : field(o, "elements")) elements.push_back(load_element(e, dim));
      std::string name = text(o, "name");
      if (!op_ids.emplace(name, ops.size()).second) bad("duplicate superoperator '" + name + "'");
      ops.emplace_back(std::move(name), std::move(elements));
    }

    std::vector<Rule> rules;
    for (const auto& jr : field(doc, "transitions")) {
      Rule r;
      r.state = state_of(text(jr, "state"));
      auto it = op_ids.find(text(jr, "superoperator"));
      if (it == op_ids.end()) bad("unknown superoperator '" + text(jr, "superoperator") + "'");
      r.op = it->second;
      if (jr.contains("symbol")) r.symbol = single_char(jr.at("symbol"), "symbol");
      if (jr.contains("prover")) r.prover = single_char(jr.at("prover"), "prover");
      if (jr.contains("counter_zero")) r.counter_zero = jr.at("counter_zero").get<bool>();
      for (const auto& jt : field(jr, "outcomes"))
        r.on_outcome.push_back({state_of(text(jt, "next")), jt.value("move", 0), jt.value("counter_delta", 0)});
      rules.push_back(std::move(r));
    }
    const StateId initial = state_of(text(doc, "initial"));
    const StateId restart = doc.contains("restart_entry") ? state_of(text(doc, "restart_entry")) : initial;
    return MachineSpec(doc.value("name", "machine"), kind, text(doc, "alphabet"), doc.value("prover_alphabet", ""),
                       std::move(states), initial, restart, std::move(reg), std::move(ops), std::move(rules));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid machine definition: ") + e.what(), 1, 1);
  }
}

MachineSpec load_machine_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open machine file '" + path + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_machine(ss.str());
}

}  // namespace qcfa
