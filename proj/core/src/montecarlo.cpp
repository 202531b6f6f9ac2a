#include "qcfa/montecarlo.hpp"

namespace qcfa {
namespace {

enum class RoundEnd { accept, reject, restart, censored };

// Samples one round starting from `config`; adds the steps taken to `steps`.
RoundEnd sample_round(const MachineSpec& spec, std::string_view input, const ProverStrategy* prover,
                      Configuration config, std::mt19937_64& rng, std::int64_t& steps, std::int64_t max_steps) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (;;) {
    switch (spec.state(config.state).role) {
      case StateRole::accept: return RoundEnd::accept;
      case StateRole::reject: return RoundEnd::reject;
      case StateRole::restart: return RoundEnd::restart;
      case StateRole::normal: break;
    }
    if (steps >= max_steps) return RoundEnd::censored;
    auto succ = step(spec, config, input, prover);
    ++steps;
    std::size_t pick = succ.size() - 1;
    if (succ.size() > 1) {
      double u = uniform(rng);
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < succ.size(); ++i) {
        acc += succ[i].probability.to_double();
        if (u < acc) {
          pick = i;
          break;
        }
      }
    }
    config = std::move(succ[pick].config);
  }
}

Scalar binomial_stderr(std::uint64_t hits, std::uint64_t n) {
  if (n == 0) return Scalar(0L);
  Scalar p = Scalar(static_cast<long>(hits)) / Scalar(static_cast<long>(n));
  return sqrt(p * (Scalar(1L) - p) / Scalar(static_cast<long>(n)));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_generator(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(trial)));
}

RunResult run_monte_carlo(const MachineSpec& spec, std::string_view input, const MonteCarloOptions& options,
                          const ProverStrategy* prover) {
  if (options.trials == 0) throw ContractError("run_monte_carlo needs at least one trial");
  RunResult r;
  r.engine = EngineKind::monte_carlo;
  r.precision = working_precision();
  r.trials = options.trials;
  r.seed = options.seed;
  std::uint64_t accepted = 0, rejected = 0, censored = 0;
  Scalar step_sum(0L), step_sq(0L);
  for (std::uint64_t t = 0; t < options.trials; ++t) {
    auto rng = trial_generator(options.seed, t);
    std::int64_t steps = 0;
    Configuration config = initial_configuration(spec);
    RoundEnd end;
    for (;;) {
      end = sample_round(spec, input, prover, std::move(config), rng, steps, options.max_steps);
      if (end != RoundEnd::restart) break;
      config = restart_configuration(spec);
    }
    if (end == RoundEnd::accept) ++accepted;
    if (end == RoundEnd::reject) ++rejected;
    if (end == RoundEnd::censored) {
      ++censored;
      continue;
    }
    Scalar s(static_cast<long>(steps));
    step_sum += s;
    step_sq += s * s;
  }
  const Scalar n(static_cast<long>(options.trials));
  r.accept_prob = Scalar(static_cast<long>(accepted)) / n;
  r.reject_prob = Scalar(static_cast<long>(rejected)) / n;
  r.nonhalt_mass = Scalar(static_cast<long>(censored)) / n;
  r.accept_stderr = binomial_stderr(accepted, options.trials);
  r.reject_stderr = binomial_stderr(rejected, options.trials);
  r.branch_count = 0;
  const std::uint64_t halted = accepted + rejected;
  if (halted > 0) {
    Scalar h(static_cast<long>(halted));
    Scalar mean = step_sum / h;
    r.expected_steps = mean;
    if (halted > 1) {
      Scalar var = (step_sq - h * mean * mean) / (h - Scalar(1L));
      r.steps_stderr = var.sign() > 0 ? sqrt(var / h) : Scalar(0L);
    }
  }
  return r;
}

Scalar RoundSample::frequency(std::uint64_t count) const {
  if (trials == 0) return Scalar(0L);
  return Scalar(static_cast<long>(count)) / Scalar(static_cast<long>(trials));
}

RoundSample sample_rounds(const MachineSpec& spec, std::string_view input, const MonteCarloOptions& options,
                          const ProverStrategy* prover, RoundStart start) {
  if (options.trials == 0) throw ContractError("sample_rounds needs at least one trial");
  RoundSample out;
  out.trials = options.trials;
  out.seed = options.seed;
  Scalar step_sum(0L);
  const Configuration c0 = start == RoundStart::initial ? initial_configuration(spec) : restart_configuration(spec);
  for (std::uint64_t t = 0; t < options.trials; ++t) {
    auto rng = trial_generator(options.seed, t);
    std::int64_t steps = 0;
    switch (sample_round(spec, input, prover, c0, rng, steps, options.max_steps)) {
      case RoundEnd::accept: ++out.accepted; break;
      case RoundEnd::reject: ++out.rejected; break;
      case RoundEnd::restart: ++out.restarted; break;
      case RoundEnd::censored: ++out.censored; break;
    }
    step_sum += Scalar(static_cast<long>(steps));
  }
  out.mean_steps = step_sum / Scalar(static_cast<long>(options.trials));
  return out;
}

bool within_standard_errors(const Scalar& observed, const Scalar& p, std::uint64_t n, double k, const Scalar& slack) {
  Scalar diff = abs(observed - p);
  Scalar var = p * (Scalar(1L) - p);
  if (var.sign() <= 0) return diff <= slack;
  return diff <= Scalar(k) * sqrt(var / Scalar(static_cast<long>(n))) + slack;
}

}  // namespace qcfa
