// The one-way machine on four qubits. Qubits 1 and 2 compare adjacent
// blocks in alternation, qubit 3 is a coin tossed on every a, qubit 4 carries
// the theta rotation. Basis index = 8*b1 + 4*b2 + 2*b3 + b4.

#include "qcfa/constructions.hpp"

#include <array>

namespace qcfa {
namespace {

constexpr std::size_t kDim = 16;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

Matrix rot(const SymbolicAngle& angle) {
  Scalar r = angle.radians();
  Scalar c = cos(r), s = sin(r);
  Matrix m(2, 2);
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
  return m;
}

Matrix projector(int bit) {
  Matrix m(2, 2);
  m(bit, bit) = Scalar(1L);
  return m;
}

Matrix on_qubit(int qubit, const Matrix& u) {
  Matrix out = Matrix::identity(1);
  for (int q = 1; q <= 4; ++q) out = kron(out, q == qubit ? u : Matrix::identity(2));
  return out;
}

Superoperator measure_qubit(int qubit) {
  return Superoperator("measure-qubit" + std::to_string(qubit),
                       {OperationElement("q0", on_qubit(qubit, projector(0))),
                        OperationElement("q1", on_qubit(qubit, projector(1)))});
}

enum Action { none = 0, up = 1, down = 2 };

}  // namespace

RecognizerBundle build_stochastic_1qcfa(const EncodedAngle& theta, const LanguageOracle& oracle) {
  MachineBuilder b("stochastic-1qcfa", MachineKind::one_way_multiqubit, "ab",
                   [] {
                     std::vector<Rational> v(kDim, Rational(0));
                     v[0] = 1;
                     return v;
                   }());
  StateId accept = b.state("accept", StateRole::accept);
  StateId reject = b.state("reject", StateRole::reject);

  const std::array<Matrix, 3> turn{Matrix::identity(2), rot(SymbolicAngle::sqrt2_pi(1)), rot(SymbolicAngle::sqrt2_pi(-1))};
  Matrix hadamard(2, 2);
  Scalar h = Scalar(1L) / sqrt(Scalar(2L));
  hadamard(0, 0) = h;
  hadamard(0, 1) = h;
  hadamard(1, 0) = h;
  hadamard(1, 1) = -h;
  const Matrix heads = projector(0) * hadamard, tails = projector(1) * hadamard;
  const Matrix rtheta = rot(theta.angle());

  // step[q1][q2]: one a, with the given actions on the comparator qubits.
  std::array<std::array<std::size_t, 3>, 3> step{};
  for (int a1 = 0; a1 < 3; ++a1)
    for (int a2 = 0; a2 < 3; ++a2) {
      Matrix base = kron(turn[a1], turn[a2]);
      step[a1][a2] = b.op(Superoperator("a-step-" + std::to_string(a1) + std::to_string(a2),
                                        {OperationElement("heads", kron(kron(base, heads), rtheta)),
                                         OperationElement("tails", kron(kron(base, tails), rtheta))}));
    }
  const std::size_t meas1 = b.op(measure_qubit(1)), meas2 = b.op(measure_qubit(2)), meas4 = b.op(measure_qubit(4));
  const std::size_t quarter =
      b.op(Superoperator("rot-quarter-qubit4", {OperationElement(
                                                   "rotate", on_qubit(4, rot(SymbolicAngle::from_turns(Rational(1, 8)))))}));
  const std::size_t coin = b.op(fair_coin(kDim));

  // Classical state: position in the form check plus whether a tails has
  // been seen (t = 1).
  auto name = [](const std::string& s, int t) { return s + (t ? "-tails" : "-heads"); };
  std::array<StateId, 2> start{}, chk_b{}, end{}, decide{};
  std::array<std::array<StateId, 8>, 2> first{};
  // blk[t][odd][r][e]
  std::array<std::array<std::array<std::array<StateId, 2>, 56>, 2>, 2> blk{};
  for (int t = 0; t < 2; ++t) {
    if (t == 0) start[t] = b.state("start");
    chk_b[t] = b.state(name("check-b", t));
    end[t] = b.state(name("end", t));
    if (t == 0) decide[t] = b.state("rot-measure");
    for (int k = 0; k < 8; ++k) first[t][k] = b.state(name("first-" + std::to_string(k), t));
    for (int odd = 0; odd < 2; ++odd)
      for (int r = 0; r < 56; ++r)
        for (int e = 0; e < 2; ++e)
          blk[t][odd][r][e] = b.state(name(std::string(odd ? "odd-" : "even-") + std::to_string(r) + "-" + std::to_string(e), t));
  }
  b.set_initial(start[0]);
  b.move(start[0], kLeftEndMarker, start[0], +1);
  b.rule(start[0], 'a', step[none][none], {{chk_b[0], +1}, {chk_b[1], +1}});
  for (int t = 0; t < 2; ++t) {
    b.move(chk_b[t], 'b', first[t][0], +1);
    for (int k = 0; k < 7; ++k) b.rule(first[t][k], 'a', step[up][none], {{first[t][k + 1], +1}, {first[1][k + 1], +1}});
    b.move(first[t][7], 'b', blk[t][1][0][0], +1);
    b.move(first[t][7], kRightEndMarker, end[t], 0);
    for (int odd = 0; odd < 2; ++odd) {
      // Odd blocks: qubit 1 counts down, qubit 2 up; even blocks swap roles.
      const std::size_t down_meas = odd ? meas1 : meas2;
      for (int r = 0; r < 56; ++r)
        for (int e = 0; e < 2; ++e) {
          StateId s = blk[t][odd][r][e];
          int d = r % 8 == 0 ? down : none;
          std::size_t op = odd ? step[d][up] : step[up][d];
          b.rule(s, 'a', op, {{blk[t][odd][(r + 1) % 56][1], +1}, {blk[1][odd][(r + 1) % 56][1], +1}});
          if (r == 0 && e == 1) {
            b.rule(s, 'b', down_meas, {{blk[t][1 - odd][0][0], +1}, {reject, 0}});
            b.rule(s, kRightEndMarker, down_meas, {{end[t], 0}, {reject, 0}});
          }
        }
    }
  }
  b.rule(end[0], kRightEndMarker, quarter, {{decide[0], 0}});
  b.rule(decide[0], kRightEndMarker, meas4, {{reject, 0}, {accept, 0}});
  b.rule(end[1], kRightEndMarker, coin, {{accept, 0}, {reject, 0}});
  b.complete_with(reject);

  ClaimedBounds claim;
  claim.member_accept = Rational(1, 2);
  claim.member_strict = true;
  claim.nonmember_reject = Rational(1, 2);
  claim.nonmember_strict = true;
  return {b.build(), [oracle](std::string_view w) { return power_eq_L_member(w, oracle); }, claim};
}

StochasticEvaluation evaluate_stochastic(std::string_view w, const EncodedAngle& theta) {
  StochasticEvaluation ev;
  PowerEqParse p = power_eq_parse(w);
  const bool single = !p.malformed && p.blocks.size() == 1 && p.blocks[0] == 7;
  ev.well_formed = p.form_ok || single;
  if (!ev.well_formed) return ev;

  ev.survive = Scalar(1L);
  for (std::size_t i = 0; i + 1 < p.blocks.size(); ++i) {
    SymbolicAngle diff = SymbolicAngle::sqrt2_pi(static_cast<long>(p.blocks[i])) +
                         SymbolicAngle::sqrt2_pi(-static_cast<long>(p.blocks[i + 1] / 8));
    ev.survive *= square(cos(diff.radians()));
  }
  Integer two_pow;
  mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, p.a_count);
  ev.all_heads = Rational(Integer(1), two_pow);
  SymbolicAngle last = SymbolicAngle::from_turns(theta.multiple_turns(Integer(static_cast<unsigned long>(p.a_count))) +
                                                  Rational(1, 8));
  ev.rotation_accept = square(sin(last.radians()));
  Scalar h(ev.all_heads);
  ev.acceptance = ev.survive * (h * ev.rotation_accept + (Scalar(1L) - h) / Scalar(2L));
  return ev;
}

}  // namespace qcfa
