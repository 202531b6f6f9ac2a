#include "qcfa/chain.hpp"
#include "qcfa/engine.hpp"
#include "qcfa/montecarlo.hpp"
#include "reference.hpp"
#include "walk_machine.hpp"

#include <doctest.h>

using namespace qcfa;

namespace {

Scalar tol() { return Scalar::pow2(-140); }

}  // namespace

TEST_CASE("absorbing chain with a cycle") {
  // 0 -> 1 (1/2), 0 -> A (1/2); 1 -> 0 (1/2), 1 -> B (1/2).
  AbsorbingChain<Rational> ch;
  ch.out.resize(2);
  ch.num_classes = 2;
  ch.out[0] = {{1, Rational(1, 2)}, {ch.absorbing(0), Rational(1, 2)}};
  ch.out[1] = {{0, Rational(1, 2)}, {ch.absorbing(1), Rational(1, 2)}};
  auto sol = solve_chain(ch, 0);
  CHECK(sol.absorbed[0] == Rational(2, 3));
  CHECK(sol.absorbed[1] == Rational(1, 3));
  CHECK(sol.visits[0] == Rational(4, 3));
  CHECK(sol.expected_steps == Rational(2));
}

TEST_CASE("closed components are reported as trapped") {
  AbsorbingChain<Rational> ch;
  ch.out.resize(2);
  ch.num_classes = 1;
  ch.out[0] = {{1, Rational(1, 4)}, {ch.absorbing(0), Rational(3, 4)}};
  ch.out[1] = {{1, Rational(1)}};
  auto sol = solve_chain(ch, 0);
  CHECK(sol.trapped == Rational(1, 4));
  CHECK(sol.absorbed[0] == Rational(3, 4));
}

TEST_CASE("walk absorption agrees across closed form and solvers") {
  for (long n = 1; n <= 12; ++n) {
    auto exact = walk_absorption_exact(n);
    CHECK(exact.p_right == ref::ruin_right(n));
    CHECK(exact.expected_steps == Rational(n));
    CHECK(abs(walk_absorption_solve(n).p_right - Scalar(exact.p_right)) < tol());
    CHECK(abs(walk_absorption(n).expected_steps - Scalar(exact.expected_steps)) < tol());
  }
}

TEST_CASE("one round of the walk machine") {
  MachineSpec m = walk_machine(false);
  for (long n = 0; n <= 8; ++n) {
    std::string w(static_cast<std::size_t>(n), 'a');
    RoundStatistics r = evaluate_round(m, w);
    Scalar right(ref::ruin_right(n));
    CHECK(abs(r.p_accept - right) < tol());
    CHECK(abs(r.p_reject - (Scalar(1L) - right)) < tol());
    REQUIRE(r.round_steps);
    // Entry move, n walk steps, one step into the halting state.
    CHECK(abs(*r.round_steps - Scalar(n + 2)) < tol());
    if (n <= 1) {
      CHECK(evaluate_round_exact(m, w).p_accept == ref::ruin_right(n));
    } else {
      // The rational path enumeration only handles acyclic rounds.
      CHECK_THROWS_AS(evaluate_round_exact(m, w), StructuralError);
    }
  }
}

TEST_CASE("restarts turn the walk into certain acceptance") {
  MachineSpec m = walk_machine(true);
  for (long n : {0L, 1L, 5L}) {
    RunResult r = run_exact(m, std::string(static_cast<std::size_t>(n), 'a'));
    CHECK(abs(r.accept_prob - Scalar(1L)) < tol());
    CHECK(r.reject_prob < tol());
    REQUIRE(r.expected_steps);
    // Rounds are geometric with mean n+1, each of mean length n+2.
    CHECK(abs(*r.expected_steps - Scalar((n + 1) * (n + 2))) < Scalar::pow2(-120));
  }
}

TEST_CASE("step budget censors the remaining mass") {
  EngineOptions opt;
  opt.max_steps = 3;
  RoundStatistics r = evaluate_round(walk_machine(false), "aaaaaa", nullptr, RoundStart::initial, opt);
  CHECK(r.p_nonhalt > Scalar(0L));
  CHECK_FALSE(r.round_steps);
  CHECK(abs(r.p_accept + r.p_reject + r.p_nonhalt - Scalar(1L)) < tol());
}

TEST_CASE("splitmix64 matches the reference generator") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(trial_generator(3, 9)() == trial_generator(3, 9)());
}

TEST_CASE("Monte Carlo agrees with the exact engine") {
  MachineSpec m = walk_machine(false);
  MonteCarloOptions opt;
  opt.trials = 4000;
  opt.seed = 11;
  RunResult a = run_monte_carlo(m, "aaa", opt);
  RunResult b = run_monte_carlo(m, "aaa", opt);
  CHECK(a.accept_prob == b.accept_prob);
  CHECK(within_standard_errors(a.accept_prob, Scalar(Rational(1, 4)), opt.trials, 4.0));
  CHECK(a.trials == 4000);
  RoundSample s = sample_rounds(m, "aaa", opt);
  CHECK(s.accepted + s.rejected + s.restarted + s.censored == s.trials);
  CHECK(within_standard_errors(s.frequency(s.accepted), Scalar(Rational(1, 4)), s.trials, 4.0));
  CHECK_FALSE(within_standard_errors(Scalar(Rational(1, 2)), Scalar(1L), 100));
}
