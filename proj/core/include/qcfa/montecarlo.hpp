#pragma once

// Seeded Monte Carlo sampling of machine runs.
//
// Trial i draws from its own std::mt19937_64 seeded with a splitmix64 mix of
// (seed, i), so results do not depend on how trials are scheduled.

#include "qcfa/engine.hpp"

#include <cstdint>
#include <random>

namespace qcfa {

inline constexpr const char* kGeneratorName = "mt19937_64+splitmix64/v1";

std::uint64_t splitmix64(std::uint64_t x);
std::mt19937_64 trial_generator(std::uint64_t seed, std::uint64_t trial);

struct MonteCarloOptions {
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 1;
  /// Steps per trial (all rounds together) before the trial is censored.
  std::int64_t max_steps = 10'000'000;
};

/// Full runs with restarts. accept/reject/nonhalt are empirical frequencies;
/// expected_steps is the mean length of halting trials.
RunResult run_monte_carlo(const MachineSpec& spec, std::string_view input, const MonteCarloOptions& options,
                          const ProverStrategy* prover = nullptr);

/// Empirical distribution of a single round.
struct RoundSample {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t restarted = 0;
  std::uint64_t censored = 0;
  Scalar mean_steps{0L};

  Scalar frequency(std::uint64_t count) const;
};

RoundSample sample_rounds(const MachineSpec& spec, std::string_view input, const MonteCarloOptions& options,
                          const ProverStrategy* prover = nullptr, RoundStart start = RoundStart::initial);

/// |observed - p| <= k * sqrt(p(1-p)/n), with exact equality required when
/// p is 0 or 1 (up to `slack`).
bool within_standard_errors(const Scalar& observed, const Scalar& p, std::uint64_t n, double k = 3.0,
                            const Scalar& slack = Scalar(0L));

}  // namespace qcfa
