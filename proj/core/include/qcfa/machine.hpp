#pragma once

// Two-way (and one-way) automata with quantum and classical states, an
// optional classical counter, and an optional prover channel.
//
// One step: the superoperator selected by (state, scanned symbol, counter is
// zero, prover symbol) is applied to the register; the observed outcome then
// selects the next classical state, head move and counter update.

#include "qcfa/quantum.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcfa {

enum class MachineKind { two_way, one_way, one_way_multiqubit, two_way_with_counter };

std::string to_string(MachineKind kind);
MachineKind machine_kind_from_string(std::string_view text);

enum class StateRole { normal, accept, reject, restart };

std::string to_string(StateRole role);
StateRole state_role_from_string(std::string_view text);

using StateId = std::uint32_t;

inline constexpr char kLeftEndMarker = '<';
inline constexpr char kRightEndMarker = '>';
/// Prover symbol seen by the verifier once a transmission is exhausted.
inline constexpr char kEndOfTransmission = '$';

struct StateInfo {
  std::string name;
  StateRole role = StateRole::normal;
  bool reads_prover = false;
};

struct Transition {
  StateId next = 0;
  int move = 0;           // -1, 0, +1
  int counter_delta = 0;  // -1, 0, +1 (counter machines only)
};

/// Transition rule. Empty optionals are wildcards; the first matching rule
/// in authoring order applies.
struct Rule {
  StateId state = 0;
  std::optional<char> symbol;
  std::optional<bool> counter_zero;
  std::optional<char> prover;
  std::size_t op = 0;
  std::vector<Transition> on_outcome;  // parallel to the operator's elements
};

class MachineSpec {
 public:
  MachineSpec() = default;

  /// Validates and indexes the machine. Throws StructuralError.
  MachineSpec(std::string name, MachineKind kind, std::string alphabet, std::string prover_alphabet,
              std::vector<StateInfo> states, StateId initial, StateId restart_entry,
              std::vector<Rational> initial_register, std::vector<Superoperator> operators,
              std::vector<Rule> rules);

  const std::string& name() const { return name_; }
  MachineKind kind() const { return kind_; }
  const std::string& alphabet() const { return alphabet_; }
  const std::string& prover_alphabet() const { return prover_alphabet_; }
  bool has_counter() const { return kind_ == MachineKind::two_way_with_counter; }
  bool has_prover() const { return !prover_alphabet_.empty(); }
  bool one_way() const { return kind_ == MachineKind::one_way || kind_ == MachineKind::one_way_multiqubit; }

  const std::vector<StateInfo>& states() const { return states_; }
  const StateInfo& state(StateId id) const { return states_.at(id); }
  StateId initial() const { return initial_; }
  /// State a new round begins in after a restart (head on the left end-marker).
  StateId restart_entry() const { return restart_entry_; }
  StateId find_state(std::string_view name) const;
  bool halting(StateId id) const { return states_.at(id).role != StateRole::normal; }

  std::size_t register_dim() const { return initial_register_.size(); }
  const std::vector<Rational>& initial_register_exact() const { return initial_register_; }
  AmplitudeVector initial_register() const;

  const std::vector<Superoperator>& operators() const { return operators_; }
  const std::vector<Rule>& rules() const { return rules_; }

  /// nullptr when no rule matches. `prover` is ignored for states that do
  /// not read the prover channel.
  const Rule* lookup(StateId state, char symbol, bool counter_zero, char prover) const;

 private:
  int symbol_index(char c) const;
  int prover_index(char c) const;
  std::size_t table_index(StateId s, int sym, bool cz, int prov) const;
  void compile();

  std::string name_;
  MachineKind kind_ = MachineKind::two_way;
  std::string alphabet_;
  std::string prover_alphabet_;
  std::vector<StateInfo> states_;
  StateId initial_ = 0;
  StateId restart_entry_ = 0;
  std::vector<Rational> initial_register_;
  std::vector<Superoperator> operators_;
  std::vector<Rule> rules_;

  std::array<int, 256> symbol_map_{};
  std::array<int, 256> prover_map_{};
  std::size_t num_symbols_ = 0;
  std::size_t num_prover_ = 1;
  std::vector<std::int32_t> table_;
};

/// Incremental construction of a MachineSpec.
class MachineBuilder {
 public:
  MachineBuilder(std::string name, MachineKind kind, std::string alphabet, std::vector<Rational> initial_register);

  void set_prover_alphabet(std::string symbols) { prover_alphabet_ = std::move(symbols); }

  StateId state(const std::string& name, StateRole role = StateRole::normal, bool reads_prover = false);
  /// Existing state by name; throws if absent.
  StateId get(const std::string& name) const;
  std::size_t op(Superoperator op);
  const Superoperator& operator_at(std::size_t index) const { return operators_.at(index); }
  /// Index of the trivial identity operator (created on first use).
  std::size_t identity();

  /// Adds a rule with one transition per outcome of `op`.
  void rule(StateId state, std::optional<char> symbol, std::size_t op, std::vector<Transition> on_outcome,
            std::optional<bool> counter_zero = std::nullopt, std::optional<char> prover = std::nullopt);
  /// Identity operator, single deterministic transition.
  void move(StateId state, std::optional<char> symbol, StateId next, int move, int counter_delta = 0,
            std::optional<bool> counter_zero = std::nullopt, std::optional<char> prover = std::nullopt);
  /// Same operator outcome -> same transition for every outcome.
  void all_outcomes(StateId state, std::optional<char> symbol, std::size_t op, Transition t,
                    std::optional<bool> counter_zero = std::nullopt, std::optional<char> prover = std::nullopt);

  /// Wildcard identity rule sending every normal state to `target`; added
  /// last, so it only covers combinations no earlier rule matched.
  void complete_with(StateId target);

  void set_initial(StateId s) { initial_ = s; }
  void set_restart_entry(StateId s) { restart_entry_ = s; }

  MachineSpec build() const;

 private:
  std::string name_;
  MachineKind kind_;
  std::string alphabet_;
  std::string prover_alphabet_;
  std::vector<Rational> initial_register_;
  std::vector<StateInfo> states_;
  std::vector<Superoperator> operators_;
  std::vector<Rule> rules_;
  std::optional<std::size_t> identity_;
  StateId initial_ = 0;
  std::optional<StateId> restart_entry_;
};

/// What a prover sees when asked for its next symbol.
struct ProverView {
  std::string_view input;
  std::span<const std::string> outcome_history;  // outcome labels since the round began
  std::size_t symbols_sent = 0;                  // symbols already consumed this round
};

/// Deterministic prover. Every round restarts from an empty view, which
/// realizes "restart the transmission from its first symbol".
struct ProverStrategy {
  std::string label;
  std::function<char(const ProverView&)> next_symbol;
  /// False when next_symbol ignores outcome_history; lets branches merge.
  bool uses_history = true;

  /// Streams `transmission` and then kEndOfTransmission.
  static ProverStrategy from_transcript(std::string label, std::string transmission);
};

struct Configuration {
  StateId state = 0;
  std::int64_t head = 0;
  std::int64_t counter = 0;
  std::size_t cursor = 0;  // prover symbols consumed this round
  QuantumRegister reg;
  std::vector<std::string> history;  // only tracked when a prover is attached

  /// Byte key identifying the configuration exactly (for merging branches).
  std::string key() const;
};

Configuration initial_configuration(const MachineSpec& spec);
/// Configuration at the start of a round that follows a restart.
Configuration restart_configuration(const MachineSpec& spec);

struct Successor {
  Scalar probability;
  std::size_t outcome = 0;
  Configuration config;
};

/// Tape symbol under the head: kLeftEndMarker, input[head-1] or kRightEndMarker.
char tape_symbol(std::string_view input, std::int64_t head);

/// One step. Halting and restart states have no successors. Throws
/// StructuralError for an undefined transition or a move off the tape.
std::vector<Successor> step(const MachineSpec& spec, const Configuration& config, std::string_view input,
                            const ProverStrategy* prover = nullptr);

}  // namespace qcfa
