#pragma once

// Exact evaluation of a machine on one input.
//
// A round is explored as a graph of configurations (identical configurations
// reached along different paths are merged) and solved as an absorbing
// Markov chain with classes accept / reject / restart / censored. A full run
// chains the first round (from the initial configuration) with the steady
// rounds that follow a restart.

#include "qcfa/chain.hpp"
#include "qcfa/errors.hpp"
#include "qcfa/machine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qcfa {

struct EngineOptions {
  /// Configurations first reached at this depth are not expanded; their mass
  /// is reported as non-halting.
  std::int64_t max_steps = 1'000'000;
  /// Maximum number of distinct configurations explored per round.
  std::size_t node_budget = 10'000'000;
  /// When nonempty, RoundStatistics::stage_steps counts the expected steps
  /// taken from states whose name starts with this prefix.
  std::string stage_prefix;
};

enum class EngineKind { exact, monte_carlo };
std::string to_string(EngineKind kind);

struct RunResult {
  Scalar accept_prob{0L};
  Scalar reject_prob{0L};
  Scalar nonhalt_mass{0L};
  /// Empty when the expected number of steps is unbounded (non-halting mass).
  std::optional<Scalar> expected_steps;
  std::size_t branch_count = 0;
  EngineKind engine = EngineKind::exact;
  long precision = 0;
  // Monte Carlo only.
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  Scalar accept_stderr{0L};
  Scalar reject_stderr{0L};
  Scalar steps_stderr{0L};
};

struct RoundStatistics {
  Scalar p_accept{0L};
  Scalar p_reject{0L};
  Scalar p_restart{0L};
  /// Censored by max_steps or trapped in a closed non-halting component.
  Scalar p_nonhalt{0L};
  /// Expected length of one round; empty when the round may not end.
  std::optional<Scalar> round_steps;
  std::optional<Scalar> stage_steps;
  std::size_t nodes = 0;
};

/// Node budget exhausted. Carries the statistics of the explored part; the
/// unexplored frontier is counted as non-halting.
class BudgetError : public ResourceError {
 public:
  BudgetError(const std::string& what, RoundStatistics partial)
      : ResourceError(what), partial_(std::move(partial)) {}
  const RoundStatistics& partial() const { return partial_; }

 private:
  RoundStatistics partial_;
};

enum class RoundStart { initial, restart_entry };

/// Exact masses of one round. With a prover attached, every round restarts
/// the transmission from its first symbol.
RoundStatistics evaluate_round(const MachineSpec& spec, std::string_view input, const ProverStrategy* prover = nullptr,
                               RoundStart start = RoundStart::initial, const EngineOptions& options = {});

/// p_accept / (p_accept + p_reject). Throws ContractError if both vanish.
Scalar restart_acceptance(const RoundStatistics& stats);
/// 1 / (p_accept + p_reject).
Scalar expected_rounds(const RoundStatistics& stats);

/// Overall probabilities with restarts, combining the first round with the
/// geometric series of steady rounds.
RunResult run_exact(const MachineSpec& spec, std::string_view input, const EngineOptions& options = {},
                    const ProverStrategy* prover = nullptr);

/// Per-round masses as exact rationals. Applies when every operation element
/// met along the way has an exact form; other elements are tolerated only
/// when all of their outcomes end the round in the same way. The round must
/// be acyclic. Throws StructuralError otherwise.
struct ExactRoundStatistics {
  Rational p_accept{0};
  Rational p_reject{0};
  Rational p_restart{0};
  /// Mass that asked an exhausted prover for a symbol (suspend mode only).
  Rational p_pending{0};
  std::size_t paths = 0;
};
ExactRoundStatistics evaluate_round_exact(const MachineSpec& spec, std::string_view input,
                                          const ProverStrategy* prover = nullptr,
                                          RoundStart start = RoundStart::initial,
                                          std::size_t path_budget = 10'000'000,
                                          bool suspend_on_exhausted = false);

/// Fair walk on 0..n+1 starting at 1, absorbed at both ends.
struct WalkAbsorption {
  Scalar p_right;
  Scalar expected_steps;
};
/// Closed form: p_right = 1/(n+1), expected steps = n.
WalkAbsorption walk_absorption(long n);
/// Same quantities from a linear solve of the absorbing chain.
WalkAbsorption walk_absorption_solve(long n);

struct ExactWalkAbsorption {
  Rational p_right;
  Rational expected_steps;
};
/// Linear solve in exact rational arithmetic.
ExactWalkAbsorption walk_absorption_exact(long n);

}  // namespace qcfa
