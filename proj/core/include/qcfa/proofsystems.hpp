#pragma once

// Verifiers for the unary and binary public-coin proof systems, prover
// strategies, exact protocol evaluation under restarts and an exhaustive
// search over prover transcripts.

#include "qcfa/engine.hpp"
#include "qcfa/languages.hpp"
#include "qcfa/machine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcfa {

/// A verifier machine. Every outcome label is visible to the prover. An
/// "agree" outcome accepts iff the last membership bit received was 1.
struct VerifierSpec {
  MachineSpec machine;
  bool binary = false;
  Rational gamma;
  Rational c{1};  // common coefficient (binary verifier only)
};

/// Prover symbols of the binary system.
inline constexpr const char* kBinaryProverAlphabet = "#01|";
inline constexpr const char* kUnaryProverAlphabet = "01";

/// Operator names, for looking them up in VerifierSpec::machine.
inline constexpr const char* kInitOp = "INIT";
inline constexpr const char* kProc0Op = "PROC-0";
inline constexpr const char* kProc1Op = "PROC-1";
inline constexpr const char* kRightOp = "RIGHT";
inline constexpr const char* kEncode0Op = "ENCODE-0";
inline constexpr const char* kEncode1Op = "ENCODE-1";
inline constexpr const char* kSuccOp = "SUCC";
inline constexpr const char* kDecideOp = "DECIDE";

/// Throws ContractError unless 0 <= gamma <= 1/3.
VerifierSpec build_unary_verifier(const Rational& gamma);
/// Throws CoefficientError when c is too large for some residual to be PSD.
VerifierSpec build_binary_verifier(const Rational& gamma, const Rational& c = Rational(1, 5));

/// The operator of `v` with the given name; throws if absent.
const Superoperator& verifier_operator(const VerifierSpec& v, const std::string& name);

/// Partial (uncompleted) element sets of the binary verifier, as drawn.
std::vector<OperationElement> binary_partial_elements(const std::string& op, const Rational& c);

ProverStrategy honest_prover(const LanguageOracle& oracle);
/// Honest transmission with the last membership bit flipped.
ProverStrategy final_bit_adversary(const LanguageOracle& oracle);
/// Binary systems: the honest blocks for the input, emitted in the order
/// given by `permutation` (a permutation of 0..blocks-1).
ProverStrategy out_of_order_adversary(const LanguageOracle& oracle, std::vector<std::size_t> permutation);

struct ProtocolResult {
  ExactRoundStatistics exact;
  RoundStatistics round;  // same probabilities at the working precision
  Rational overall_acceptance;
  Rational expected_rounds;
  std::size_t transcript_length = 0;  // symbols consumed by the longest path
  std::string prover;
};

/// Exact evaluation of one round plus the restart ratio rule.
ProtocolResult run_protocol(const VerifierSpec& v, const ProverStrategy& prover, std::string_view input);

/// Overall acceptance of a round: accept / (accept + reject).
Rational restart_acceptance_exact(const ExactRoundStatistics& s);

struct AdversarySearchResult {
  Rational max_acceptance{0};
  std::string witness;  // internal symbols; see render_transmission
  std::size_t evaluated = 0;
  std::size_t pruned = 0;
};

/// Evaluates every transcript over the verifier's prover alphabet of length
/// at most `symbol_budget` and returns the best acceptance. Subtrees whose
/// committed rejection already rules out beating the incumbent are skipped.
/// Throws ResourceError when more than `transcript_budget` transcripts would
/// be evaluated.
AdversarySearchResult exhaustive_adversary_search(const VerifierSpec& v, std::string_view input,
                                                  std::size_t symbol_budget,
                                                  std::size_t transcript_budget = 1'000'000);

/// delta_0 = gamma; bit 0: 4 delta, bit 1: 4 delta - 1.
std::vector<Rational> delta_trace(const Rational& gamma, const std::vector<bool>& bits);

}  // namespace qcfa
