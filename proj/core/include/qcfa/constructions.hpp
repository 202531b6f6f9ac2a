#pragma once

// Builders for the recognizers: the POWER-EQ machine with its comparison
// loop, the rotation-encoding phase, their combination, the stochastic
// one-way machine and the two counter machines.

#include "qcfa/languages.hpp"
#include "qcfa/machine.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace qcfa {

/// Probability thresholds a recognizer is expected to meet.
struct ClaimedBounds {
  Rational member_accept{1};  // members: accept >= (or > when strict) this
  bool member_strict = false;
  Rational nonmember_reject{1};  // nonmembers: reject >= (or >) this
  bool nonmember_strict = false;
};

struct RecognizerBundle {
  MachineSpec spec;
  std::function<bool(std::string_view)> reference_membership;
  ClaimedBounds claimed;

  /// Checks a result against `claimed` for an input with the given membership.
  /// Non-strict bounds allow `tolerance` of slack (default 2^(-p/2) at the
  /// working precision p); strict bounds only when a tolerance is given.
  bool meets_claim(bool member, const Scalar& accept, const Scalar& reject,
                   std::optional<Scalar> tolerance = std::nullopt) const;
};

/// Two-way machine for POWER-EQ (fast accept, form check, comparison loop,
/// random-walk gate).
RecognizerBundle build_power_eq();
/// Single pass rotating by theta per a, then pi/4 and a measurement. The
/// reference membership assumes the input is in POWER-EQ.
RecognizerBundle build_power_eq_L_phase(const EncodedAngle& theta, const LanguageOracle& oracle);
/// The POWER-EQ machine whose accepting exits run the rotation phase.
RecognizerBundle build_power_eq_L(const EncodedAngle& theta, const LanguageOracle& oracle);
/// One-way machine on four qubits (16-dimensional register).
RecognizerBundle build_stochastic_1qcfa(const EncodedAngle& theta, const LanguageOracle& oracle);
/// Counter machine for UPOWER(L); oracle bit n stands for the number n.
RecognizerBundle build_2qcca_upower(const EncodedAngle& theta, const LanguageOracle& oracle);
/// Linear-time counter machine for POWER-EQ(L).
RecognizerBundle build_2qcca_power_eq_L(const EncodedAngle& theta, const LanguageOracle& oracle);

/// Closed-form acceptance of the stochastic machine, composed from its
/// independent procedures.
struct StochasticEvaluation {
  bool well_formed = false;
  Scalar survive{0L};      // no comparator rejected
  Rational all_heads{0};   // 2^-(number of a's)
  Scalar rotation_accept{0L};  // fourth-qubit procedure accepts
  Scalar acceptance{0L};
};
StochasticEvaluation evaluate_stochastic(std::string_view w, const EncodedAngle& theta);

/// State name prefixes that mark the phases of the built machines; used to
/// measure the cost of individual stages.
inline constexpr const char* kWalkStatePrefix = "walk";
inline constexpr const char* kRotationPhasePrefix = "rot";

}  // namespace qcfa
