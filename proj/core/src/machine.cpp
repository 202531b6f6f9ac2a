#include "qcfa/machine.hpp"

#include <cstring>
#include <sstream>

namespace qcfa {
namespace {

void append_bytes(std::string& out, const void* data, std::size_t n) {
  out.append(static_cast<const char*>(data), n);
}

template <typename T>
void append_pod(std::string& out, const T& value) {
  append_bytes(out, &value, sizeof(T));
}

void append_scalar(std::string& out, const Scalar& x) {
  mpfr_srcptr p = x.get();
  int kind = mpfr_regular_p(p) ? 1 : (mpfr_zero_p(p) ? 0 : 2);
  append_pod(out, kind);
  if (kind == 0) return;  // +0 and -0 merge
  append_pod(out, mpfr_signbit(p));
  if (kind == 2) return;
  mpfr_exp_t e = mpfr_get_exp(p);
  append_pod(out, e);
  mpfr_prec_t prec = mpfr_get_prec(p);
  append_pod(out, prec);
  std::size_t limbs = (static_cast<std::size_t>(prec) + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS;
  append_bytes(out, p->_mpfr_d, limbs * sizeof(mp_limb_t));
}

void append_string(std::string& out, const std::string& s) {
  append_pod(out, s.size());
  out += s;
}

std::string describe_triple(const MachineSpec& spec, StateId s, char symbol, bool cz, char prover) {
  std::ostringstream msg;
  msg << "(state '" << spec.state(s).name << "', symbol '" << symbol << "'";
  if (spec.has_counter()) msg << ", counter " << (cz ? "zero" : "nonzero");
  if (spec.state(s).reads_prover) msg << ", prover '" << prover << "'";
  msg << ")";
  return msg.str();
}

}  // namespace

std::string to_string(MachineKind kind) {
  switch (kind) {
    case MachineKind::two_way: return "two-way";
    case MachineKind::one_way: return "one-way";
    case MachineKind::one_way_multiqubit: return "one-way-multiqubit";
    case MachineKind::two_way_with_counter: return "two-way-with-counter";
  }
  return "unknown";
}

MachineKind machine_kind_from_string(std::string_view text) {
  if (text == "two-way") return MachineKind::two_way;
  if (text == "one-way") return MachineKind::one_way;
  if (text == "one-way-multiqubit") return MachineKind::one_way_multiqubit;
  if (text == "two-way-with-counter") return MachineKind::two_way_with_counter;
  throw StructuralError("unknown machine kind '" + std::string(text) + "'");
}

std::string to_string(StateRole role) {
  switch (role) {
    case StateRole::normal: return "normal";
    case StateRole::accept: return "accept";
    case StateRole::reject: return "reject";
    case StateRole::restart: return "restart";
  }
  return "unknown";
}

StateRole state_role_from_string(std::string_view text) {
  if (text == "normal") return StateRole::normal;
  if (text == "accept") return StateRole::accept;
  if (text == "reject") return StateRole::reject;
  if (text == "restart") return StateRole::restart;
  throw StructuralError("unknown state role '" + std::string(text) + "'");
}

MachineSpec::MachineSpec(std::string name, MachineKind kind, std::string alphabet, std::string prover_alphabet,
                         std::vector<StateInfo> states, StateId initial, StateId restart_entry,
                         std::vector<Rational> initial_register, std::vector<Superoperator> operators,
                         std::vector<Rule> rules)
    : name_(std::move(name)),
      kind_(kind),
      alphabet_(std::move(alphabet)),
      prover_alphabet_(std::move(prover_alphabet)),
      states_(std::move(states)),
      initial_(initial),
      restart_entry_(restart_entry),
      initial_register_(std::move(initial_register)),
      operators_(std::move(operators)),
      rules_(std::move(rules)) {
  compile();
}

StateId MachineSpec::find_state(std::string_view name) const {
  for (StateId i = 0; i < states_.size(); ++i)
    if (states_[i].name == name) return i;
  throw StructuralError("machine '" + name_ + "' has no state '" + std::string(name) + "'");
}

AmplitudeVector MachineSpec::initial_register() const {
  AmplitudeVector v;
  for (const auto& q : initial_register_) v.entries.emplace_back(q);
  v.normalized = true;
  return v;
}

int MachineSpec::symbol_index(char c) const { return symbol_map_[static_cast<unsigned char>(c)]; }
int MachineSpec::prover_index(char c) const { return prover_map_[static_cast<unsigned char>(c)]; }

std::size_t MachineSpec::table_index(StateId s, int sym, bool cz, int prov) const {
  return ((static_cast<std::size_t>(s) * num_symbols_ + static_cast<std::size_t>(sym)) * 2 + (cz ? 1 : 0)) * num_prover_ +
         static_cast<std::size_t>(prov);
}

void MachineSpec::compile() {
  auto fail = [&](const std::string& what) { throw StructuralError("machine '" + name_ + "': " + what); };

  if (states_.empty()) fail("no classical states");
  if (initial_ >= states_.size() || restart_entry_ >= states_.size()) fail("initial or restart-entry state out of range");
  if (initial_register_.empty()) fail("empty quantum register");
  Rational norm2 = 0;
  for (const auto& q : initial_register_) norm2 += q * q;
  if (norm2 != 1) fail("initial register is not a unit vector");

  symbol_map_.fill(-1);
  prover_map_.fill(-1);
  symbol_map_[static_cast<unsigned char>(kLeftEndMarker)] = 0;
  symbol_map_[static_cast<unsigned char>(kRightEndMarker)] = 1;
  int next = 2;
  for (char c : alphabet_) {
    if (c == kLeftEndMarker || c == kRightEndMarker) fail("alphabet uses an end-marker character");
    if (symbol_map_[static_cast<unsigned char>(c)] >= 0) fail(std::string("duplicate alphabet symbol '") + c + "'");
    symbol_map_[static_cast<unsigned char>(c)] = next++;
  }
  num_symbols_ = static_cast<std::size_t>(next);
  prover_map_[static_cast<unsigned char>(kEndOfTransmission)] = 0;
  int pnext = 1;
  for (char c : prover_alphabet_) {
    if (c == kEndOfTransmission) fail("prover alphabet uses the end-of-transmission character");
    if (prover_map_[static_cast<unsigned char>(c)] >= 0) fail(std::string("duplicate prover symbol '") + c + "'");
    prover_map_[static_cast<unsigned char>(c)] = pnext++;
  }
  num_prover_ = static_cast<std::size_t>(pnext);

  for (const auto& op : operators_) {
    if (op.dimension() != register_dim()) {
      fail("superoperator '" + op.name() + "' has dimension " + std::to_string(op.dimension()) + ", register has " +
           std::to_string(register_dim()));
    }
  }
  for (const auto& st : states_) {
    if (st.reads_prover && !has_prover()) fail("state '" + st.name + "' reads a prover but the machine has none");
  }

  for (const auto& r : rules_) {
    if (r.state >= states_.size()) fail("rule for an unknown state");
    const auto& st = states_[r.state];
    if (st.role != StateRole::normal) fail("halting state '" + st.name + "' must be absorbing");
    if (r.op >= operators_.size()) fail("rule in state '" + st.name + "' names an unknown operator");
    if (r.on_outcome.size() != operators_[r.op].size()) {
      fail("rule in state '" + st.name + "' gives " + std::to_string(r.on_outcome.size()) + " transitions for " +
           std::to_string(operators_[r.op].size()) + " outcomes of '" + operators_[r.op].name() + "'");
    }
    if (r.symbol && symbol_index(*r.symbol) < 0) fail(std::string("rule uses unknown tape symbol '") + *r.symbol + "'");
    if (r.prover) {
      if (!st.reads_prover) fail("rule in state '" + st.name + "' matches a prover symbol but the state does not read one");
      if (prover_index(*r.prover) < 0) fail(std::string("rule uses unknown prover symbol '") + *r.prover + "'");
    }
    if (r.counter_zero && !has_counter()) fail("counter condition on a machine without a counter");
    for (const auto& t : r.on_outcome) {
      if (t.next >= states_.size()) fail("transition to an unknown state");
      if (t.move < -1 || t.move > 1) fail("head move must be -1, 0 or +1");
      if (one_way() && t.move < 0) fail("one-way machine moves its head left in state '" + st.name + "'");
      if (t.counter_delta < -1 || t.counter_delta > 1) fail("counter update must be -1, 0 or +1");
      if (t.counter_delta != 0 && !has_counter()) fail("counter update on a machine without a counter");
    }
  }

  // Dense lookup table; doubles as the totality check.
  table_.assign(states_.size() * num_symbols_ * 2 * num_prover_, -1);
  std::string symbols = std::string(1, kLeftEndMarker) + std::string(1, kRightEndMarker) + alphabet_;
  std::string provers = std::string(1, kEndOfTransmission) + prover_alphabet_;
  for (StateId s = 0; s < states_.size(); ++s) {
    if (states_[s].role != StateRole::normal) continue;
    for (char sym : symbols) {
      for (int czi = 0; czi < 2; ++czi) {
        bool cz = czi == 1;
        if (!has_counter() && !cz) continue;
        std::size_t nprov = states_[s].reads_prover ? provers.size() : 1;
        for (std::size_t pi = 0; pi < nprov; ++pi) {
          char prov = provers[pi];
          std::int32_t found = -1;
          for (std::size_t ri = 0; ri < rules_.size(); ++ri) {
            const Rule& r = rules_[ri];
            if (r.state != s) continue;
            if (r.symbol && *r.symbol != sym) continue;
            if (r.counter_zero && *r.counter_zero != cz) continue;
            if (r.prover && *r.prover != prov) continue;
            found = static_cast<std::int32_t>(ri);
            break;
          }
          if (found < 0) fail("no transition for " + describe_triple(*this, s, sym, cz, prov));
          for (const auto& t : rules_[static_cast<std::size_t>(found)].on_outcome) {
            if ((sym == kLeftEndMarker && t.move < 0) || (sym == kRightEndMarker && t.move > 0)) {
              fail("head leaves the tape at " + describe_triple(*this, s, sym, cz, prov));
            }
            if (cz && t.counter_delta < 0) fail("counter decremented below zero at " + describe_triple(*this, s, sym, cz, prov));
          }
          int prov_slot = states_[s].reads_prover ? prover_index(prov) : 0;
          table_[table_index(s, symbol_index(sym), cz, prov_slot)] = found;
        }
      }
    }
  }
}

const Rule* MachineSpec::lookup(StateId state, char symbol, bool counter_zero, char prover) const {
  if (state >= states_.size() || states_[state].role != StateRole::normal) return nullptr;
  int sym = symbol_index(symbol);
  if (sym < 0) return nullptr;
  if (!has_counter()) counter_zero = true;
  int prov = 0;
  if (states_[state].reads_prover) {
    prov = prover_index(prover);
    if (prov < 0) return nullptr;
  }
  std::int32_t idx = table_[table_index(state, sym, counter_zero, prov)];
  return idx < 0 ? nullptr : &rules_[static_cast<std::size_t>(idx)];
}

MachineBuilder::MachineBuilder(std::string name, MachineKind kind, std::string alphabet,
                               std::vector<Rational> initial_register)
    : name_(std::move(name)), kind_(kind), alphabet_(std::move(alphabet)), initial_register_(std::move(initial_register)) {}

StateId MachineBuilder::state(const std::string& name, StateRole role, bool reads_prover) {
  for (const auto& s : states_)
    if (s.name == name) throw StructuralError("duplicate state name '" + name + "'");
  states_.push_back(StateInfo{name, role, reads_prover});
  return static_cast<StateId>(states_.size() - 1);
}

StateId MachineBuilder::get(const std::string& name) const {
  for (StateId i = 0; i < states_.size(); ++i)
    if (states_[i].name == name) return i;
  throw StructuralError("no state named '" + name + "'");
}

std::size_t MachineBuilder::op(Superoperator op) {
  for (std::size_t i = 0; i < operators_.size(); ++i)
    if (operators_[i].name() == op.name()) throw StructuralError("duplicate operator name '" + op.name() + "'");
  operators_.push_back(std::move(op));
  return operators_.size() - 1;
}

std::size_t MachineBuilder::identity() {
  if (!identity_) identity_ = op(identity_operator(initial_register_.size(), "id"));
  return *identity_;
}

void MachineBuilder::rule(StateId state, std::optional<char> symbol, std::size_t op, std::vector<Transition> on_outcome,
                          std::optional<bool> counter_zero, std::optional<char> prover) {
  rules_.push_back(Rule{state, symbol, counter_zero, prover, op, std::move(on_outcome)});
}

void MachineBuilder::move(StateId state, std::optional<char> symbol, StateId next, int move, int counter_delta,
                          std::optional<bool> counter_zero, std::optional<char> prover) {
  rule(state, symbol, identity(), {Transition{next, move, counter_delta}}, counter_zero, prover);
}

void MachineBuilder::all_outcomes(StateId state, std::optional<char> symbol, std::size_t op, Transition t,
                                  std::optional<bool> counter_zero, std::optional<char> prover) {
  rule(state, symbol, op, std::vector<Transition>(operators_.at(op).size(), t), counter_zero, prover);
}

void MachineBuilder::complete_with(StateId target) {
  for (StateId s = 0; s < states_.size(); ++s)
    if (states_[s].role == StateRole::normal) move(s, std::nullopt, target, 0);
}

MachineSpec MachineBuilder::build() const {
  return MachineSpec(name_, kind_, alphabet_, prover_alphabet_, states_, initial_, restart_entry_.value_or(initial_),
                     initial_register_, operators_, rules_);
}

ProverStrategy ProverStrategy::from_transcript(std::string label, std::string transmission) {
  return ProverStrategy{std::move(label),
                        [t = std::move(transmission)](const ProverView& view) {
                          return view.symbols_sent < t.size() ? t[view.symbols_sent] : kEndOfTransmission;
                        },
                        false};
}

std::string Configuration::key() const {
  std::string out;
  out.reserve(64 + reg.state.size() * 40);
  append_pod(out, state);
  append_pod(out, head);
  append_pod(out, counter);
  append_pod(out, cursor);
  append_string(out, reg.pending.turns.get_str(16));
  append_string(out, reg.pending.sqrt2_halfturns.get_str(16));
  for (const auto& x : reg.state.entries) append_scalar(out, x);
  append_pod(out, history.size());
  for (const auto& h : history) append_string(out, h);
  return out;
}

Configuration initial_configuration(const MachineSpec& spec) {
  Configuration c;
  c.state = spec.initial();
  c.reg.state = spec.initial_register();
  return c;
}

Configuration restart_configuration(const MachineSpec& spec) {
  Configuration c = initial_configuration(spec);
  c.state = spec.restart_entry();
  return c;
}

char tape_symbol(std::string_view input, std::int64_t head) {
  if (head <= 0) return kLeftEndMarker;
  if (head > static_cast<std::int64_t>(input.size())) return kRightEndMarker;
  return input[static_cast<std::size_t>(head - 1)];
}

std::vector<Successor> step(const MachineSpec& spec, const Configuration& config, std::string_view input,
                            const ProverStrategy* prover) {
  if (spec.halting(config.state)) return {};
  const StateInfo& info = spec.state(config.state);
  if (config.head < 0 || config.head > static_cast<std::int64_t>(input.size()) + 1) {
    throw StructuralError("head position " + std::to_string(config.head) + " is off the tape");
  }
  char symbol = tape_symbol(input, config.head);
  char prover_symbol = kEndOfTransmission;
  if (info.reads_prover) {
    if (prover == nullptr) throw ContractError("state '" + info.name + "' reads a prover symbol but no prover is attached");
    prover_symbol = prover->next_symbol(ProverView{input, config.history, config.cursor});
  }
  const Rule* rule = spec.lookup(config.state, symbol, config.counter == 0, prover_symbol);
  if (rule == nullptr) {
    throw StructuralError("undefined transition for " +
                          describe_triple(spec, config.state, symbol, config.counter == 0, prover_symbol));
  }
  const Superoperator& op = spec.operators()[rule->op];
  std::vector<Successor> out;
  for (auto& b : branch(op, config.reg)) {
    const Transition& t = rule->on_outcome[b.outcome];
    Configuration next;
    next.state = t.next;
    next.head = config.head + t.move;
    next.counter = config.counter + t.counter_delta;
    next.cursor = config.cursor + (info.reads_prover ? 1 : 0);
    next.reg = std::move(b.post);
    if (prover != nullptr && prover->uses_history) {
      next.history = config.history;
      next.history.push_back(op.elements()[b.outcome].label());
    }
    out.push_back(Successor{std::move(b.probability), b.outcome, std::move(next)});
  }
  return out;
}

}  // namespace qcfa
