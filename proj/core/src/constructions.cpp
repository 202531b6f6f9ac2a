#include "qcfa/constructions.hpp"

#include "qcfa/errors.hpp"

namespace qcfa {

bool RecognizerBundle::meets_claim(bool member, const Scalar& accept, const Scalar& reject,
                                   std::optional<Scalar> tolerance) const {
  // An explicit tolerance (sampling error) relaxes strict bounds as well.
  const Scalar tol = tolerance ? *tolerance : Scalar::pow2(-working_precision() / 2);
  const Scalar strict_tol = tolerance ? *tolerance : Scalar(0L);
  const Scalar& x = member ? accept : reject;
  const Scalar bound(member ? claimed.member_accept : claimed.nonmember_reject);
  const bool strict = member ? claimed.member_strict : claimed.nonmember_strict;
  return strict ? x > bound - strict_tol : x >= bound - tol;
}

namespace {

std::string str(const char* prefix, long a) { return prefix + std::to_string(a); }
std::string str(const char* prefix, long a, long b) { return str(prefix, a) + "-" + std::to_string(b); }

// Operators on the one-qubit register shared by the two-way recognizers.
struct QubitOps {
  std::size_t id = 0, set0 = 0, up = 0, down = 0, measure = 0, coin = 0;
  std::optional<std::size_t> theta, quarter;

  QubitOps(MachineBuilder& b, const EncodedAngle* angle) {
    id = b.identity();
    set0 = b.op(preparation(Rational(1), {Rational(1), Rational(0)}, {"from0", "from1"}, "set0"));
    up = b.op(rotation_operator(SymbolicAngle::sqrt2_pi(1), "rot+sqrt2pi"));
    down = b.op(rotation_operator(SymbolicAngle::sqrt2_pi(-1), "rot-sqrt2pi"));
    measure = b.op(basis_measurement(2));
    coin = b.op(fair_coin(2));
    if (angle) {
      theta = b.op(rotation_operator(angle->angle(), "rot-theta"));
      quarter = b.op(rotation_operator(SymbolicAngle::from_turns(Rational(1, 8)), "rot-quarter"));
    }
  }
};

// Rotation phase: rewind to '<', reset the qubit, rotate by theta on every
// a, add pi/4 at '>' and measure. Returns the entry state.
StateId add_rotation_phase(MachineBuilder& b, const QubitOps& ops, bool has_b, StateId accept, StateId reject) {
  StateId seek = b.state("rot-seek");
  StateId scan = b.state("rot-scan");
  StateId decide = b.state("rot-measure");
  b.all_outcomes(seek, kLeftEndMarker, ops.set0, {scan, +1});
  b.move(seek, std::nullopt, seek, -1);
  b.rule(scan, 'a', *ops.theta, {{scan, +1}});
  if (has_b) b.move(scan, 'b', scan, +1);
  b.rule(scan, kRightEndMarker, *ops.quarter, {{decide, 0}});
  b.rule(decide, kRightEndMarker, ops.measure, {{reject, 0}, {accept, 0}});
  return seek;
}

// The POWER-EQ machine. `fast` receives aba^7, `exit` the inputs that pass
// the walks and coin flips.
void add_power_eq(MachineBuilder& b, const QubitOps& ops, StateId fast, StateId exit, StateId reject,
                  StateId restart) {
  StateId start = b.state("start");
  StateId chk_a = b.state("check-a");
  StateId chk_b = b.state("check-b");
  b.set_initial(start);
  b.move(start, kLeftEndMarker, chk_a, +1);
  b.move(chk_a, 'a', chk_b, +1);

  std::vector<StateId> first(8);
  for (long k = 0; k < 8; ++k) first[k] = b.state(str("first-", k));
  b.move(chk_b, 'b', first[0], +1);

  // Form check: blocks after the first are positive multiples of 56.
  std::vector<std::array<StateId, 2>> tail(56);
  for (long r = 0; r < 56; ++r)
    for (long e = 0; e < 2; ++e) tail[r][e] = b.state(str("form-", r, e));
  for (long k = 0; k < 7; ++k) b.move(first[k], 'a', first[k + 1], +1);
  b.move(first[7], 'b', tail[0][0], +1);
  b.move(first[7], kRightEndMarker, fast, 0);

  StateId rewind = b.state("rewind");
  StateId find_b = b.state("find-b");
  for (long r = 0; r < 56; ++r)
    for (long e = 0; e < 2; ++e) {
      b.move(tail[r][e], 'a', tail[(r + 1) % 56][1], +1);
      if (r == 0 && e == 1) {
        b.move(tail[r][e], 'b', tail[0][0], +1);
        b.move(tail[r][e], kRightEndMarker, rewind, -1);
      }
    }
  b.move(rewind, kLeftEndMarker, find_b, +1);
  b.move(rewind, std::nullopt, rewind, -1);

  // Comparison loop. A round after a restart begins at find-b on '<'.
  StateId loop = b.state("loop");
  StateId cmp_up = b.state("compare-up");
  std::vector<StateId> cmp_down(8);
  for (long k = 0; k < 8; ++k) cmp_down[k] = b.state(str("compare-down-", k));
  StateId back = b.state("back");
  StateId walk1_seek = b.state("walk1-seek");
  b.move(find_b, kLeftEndMarker, find_b, +1);
  b.move(find_b, 'a', find_b, +1);
  b.move(find_b, 'b', loop, 0);
  b.set_restart_entry(find_b);

  b.all_outcomes(loop, 'b', ops.set0, {cmp_up, +1});
  b.rule(cmp_up, 'a', ops.up, {{cmp_up, +1}});
  b.move(cmp_up, 'b', cmp_down[0], +1);
  b.rule(cmp_down[0], 'a', ops.down, {{cmp_down[1], +1}});
  for (long k = 1; k < 8; ++k) b.move(cmp_down[k], 'a', cmp_down[(k + 1) % 8], +1);
  b.rule(cmp_down[0], 'b', ops.measure, {{back, -1}, {reject, 0}});
  b.rule(cmp_down[0], kRightEndMarker, ops.measure, {{walk1_seek, -1}, {reject, 0}});
  b.move(back, 'a', back, -1);
  b.move(back, 'b', loop, 0);

  // Two random walks from the first input symbol and two coin flips.
  StateId walk1 = b.state("walk1");
  StateId walk2_left = b.state("walk2-after-left");
  StateId walk2_seek = b.state("walk2-seek");
  StateId walk2_right = b.state("walk2-after-right");
  StateId flip1 = b.state("walk-flip1");
  StateId flip2 = b.state("walk-flip2");
  b.move(walk1_seek, kLeftEndMarker, walk1, +1);
  b.move(walk1_seek, std::nullopt, walk1_seek, -1);
  b.move(walk1, kLeftEndMarker, walk2_left, +1);
  b.move(walk1, kRightEndMarker, walk2_seek, -1);
  b.move(walk2_seek, kLeftEndMarker, walk2_right, +1);
  b.move(walk2_seek, std::nullopt, walk2_seek, -1);
  for (StateId w : {walk1, walk2_left, walk2_right}) {
    b.rule(w, 'a', ops.coin, {{w, +1}, {w, -1}});
    b.rule(w, 'b', ops.coin, {{w, +1}, {w, -1}});
  }
  b.move(walk2_left, std::nullopt, restart, 0);
  b.move(walk2_right, kRightEndMarker, flip1, 0);
  b.move(walk2_right, kLeftEndMarker, restart, 0);
  b.rule(flip1, kRightEndMarker, ops.coin, {{flip2, 0}, {restart, 0}});
  b.rule(flip2, kRightEndMarker, ops.coin, {{exit, 0}, {restart, 0}});
}

const std::vector<Rational> kQubitZero{Rational(1), Rational(0)};

bool a_count_member(std::string_view w, const LanguageOracle& oracle) {
  std::uint64_t m = 0;
  for (char c : w) m += c == 'a';
  if (!upower_member(std::string(m, 'a')) || m < 8) return false;
  std::uint64_t k = 0;
  for (; m > 1; m /= 8) ++k;
  return oracle.member_at(k);
}

ClaimedBounds symmetric_bounds(const Rational& p) {
  ClaimedBounds c;
  c.member_accept = p;
  c.nonmember_reject = p;
  return c;
}

}  // namespace

RecognizerBundle build_power_eq() {
  MachineBuilder b("power-eq", MachineKind::two_way, "ab", kQubitZero);
  StateId accept = b.state("accept", StateRole::accept);
  StateId reject = b.state("reject", StateRole::reject);
  StateId restart = b.state("restart", StateRole::restart);
  QubitOps ops(b, nullptr);
  add_power_eq(b, ops, accept, accept, reject, restart);
  b.complete_with(reject);
  ClaimedBounds claim;
  claim.member_accept = 1;
  claim.nonmember_reject = Rational(2, 3);
  claim.nonmember_strict = true;
  return {b.build(), [](std::string_view w) { return power_eq_parse(w).member; }, claim};
}

RecognizerBundle build_power_eq_L_phase(const EncodedAngle& theta, const LanguageOracle& oracle) {
  MachineBuilder b("power-eq-L-phase", MachineKind::two_way, "ab", kQubitZero);
  StateId accept = b.state("accept", StateRole::accept);
  StateId reject = b.state("reject", StateRole::reject);
  QubitOps ops(b, &theta);
  StateId entry = add_rotation_phase(b, ops, true, accept, reject);
  b.set_initial(entry);
  b.complete_with(reject);
  return {b.build(), [oracle](std::string_view w) { return a_count_member(w, oracle); },
          symmetric_bounds(Rational(49, 50))};
}

RecognizerBundle build_power_eq_L(const EncodedAngle& theta, const LanguageOracle& oracle) {
  MachineBuilder b("power-eq-L", MachineKind::two_way, "ab", kQubitZero);
  StateId accept = b.state("accept", StateRole::accept);
  StateId reject = b.state("reject", StateRole::reject);
  StateId restart = b.state("restart", StateRole::restart);
  QubitOps ops(b, &theta);
  StateId phase = add_rotation_phase(b, ops, true, accept, reject);
  add_power_eq(b, ops, phase, phase, reject, restart);
  b.complete_with(reject);
  return {b.build(), [oracle](std::string_view w) { return power_eq_L_member(w, oracle); },
          symmetric_bounds(Rational(13, 20))};
}

RecognizerBundle build_2qcca_upower(const EncodedAngle& theta, const LanguageOracle& oracle) {
  MachineBuilder b("upower-counter", MachineKind::two_way_with_counter, "a", kQubitZero);
  StateId accept = b.state("accept", StateRole::accept);
  StateId reject = b.state("reject", StateRole::reject);
  QubitOps ops(b, &theta);
  StateId phase = add_rotation_phase(b, ops, false, accept, reject);

  StateId start = b.state("start");
  std::vector<StateId> pass(8), right(8);
  for (long r = 0; r < 8; ++r) {
    pass[r] = b.state(str("pass-", r));
    right[r] = b.state(str("zig-right-", r));
  }
  StateId check = b.state("check-one");
  StateId check2 = b.state("check-one-restore");
  StateId left = b.state("zig-left");
  b.set_initial(start);
  b.move(start, kLeftEndMarker, pass[0], +1);
  // First pass: counter = m/8, rejecting m not divisible by 8.
  for (long r = 0; r < 8; ++r) {
    b.move(pass[r], 'a', pass[(r + 1) % 8], +1, r == 0 ? 1 : 0);
    b.move(right[r], 'a', right[(r + 1) % 8], +1, r == 0 ? 1 : 0);
  }
  b.move(pass[0], kRightEndMarker, check, 0);
  b.move(right[0], kRightEndMarker, check, 0);
  // Counter value 1 ends the classical phase.
  b.move(check, kRightEndMarker, reject, 0, 0, true);
  b.move(check, kRightEndMarker, check2, 0, -1, false);
  b.move(check2, kRightEndMarker, phase, 0, 0, true);
  b.move(check2, kRightEndMarker, left, 0, +1, false);
  // Zigzag: walk left c squares emptying the counter, then back right
  // counting those squares in eighths.
  b.move(left, kLeftEndMarker, reject, 0);
  b.move(left, std::nullopt, left, -1, -1, false);
  b.move(left, 'a', right[0], 0, 0, true);
  b.complete_with(reject);
  return {b.build(), [oracle](std::string_view w) { return upower_L_member(w, oracle); },
          symmetric_bounds(Rational(49, 50))};
}

RecognizerBundle build_2qcca_power_eq_L(const EncodedAngle& theta, const LanguageOracle& oracle) {
  MachineBuilder b("power-eq-L-counter", MachineKind::two_way_with_counter, "ab", kQubitZero);
  StateId accept = b.state("accept", StateRole::accept);
  StateId reject = b.state("reject", StateRole::reject);
  QubitOps ops(b, &theta);
  StateId phase = add_rotation_phase(b, ops, true, accept, reject);

  StateId start = b.state("start");
  StateId chk_a = b.state("check-a");
  StateId chk_b = b.state("check-b");
  b.set_initial(start);
  b.move(start, kLeftEndMarker, chk_a, +1);
  b.move(chk_a, 'a', chk_b, +1);
  std::vector<StateId> first(8);
  for (long k = 0; k < 8; ++k) first[k] = b.state(str("first-", k));
  b.move(chk_b, 'b', first[0], +1);
  for (long k = 0; k < 7; ++k) b.move(first[k], 'a', first[k + 1], +1, 1);

  // Left to right: pairs (B0,B1), (B2,B3), ... Even blocks count up once per
  // a, odd blocks count down once per eight a's. Block lengths mod 56 are
  // checked on the way.
  std::array<std::vector<std::array<StateId, 2>>, 2> blk;
  for (long par = 0; par < 2; ++par) {
    blk[par].resize(56);
    for (long r = 0; r < 56; ++r)
      for (long e = 0; e < 2; ++e) blk[par][r][e] = b.state(str(par ? "odd-" : "even-", r, e));
  }
  StateId zero = b.state("drain");
  StateId skip = b.state("skip-last");
  std::vector<StateId> large(8);
  for (long r = 0; r < 8; ++r) large[r] = b.state(str("large-", r));
  StateId small = b.state("small");

  b.move(first[7], 'b', blk[1][0][0], +1);
  b.move(first[7], kRightEndMarker, phase, 0);
  for (long r = 0; r < 56; ++r)
    for (long e = 0; e < 2; ++e) {
      StateId odd = blk[1][r][e], even = blk[0][r][e];
      StateId odd_next = blk[1][(r + 1) % 56][1], even_next = blk[0][(r + 1) % 56][1];
      if (r % 8 == 0) {
        b.move(odd, 'a', reject, 0, 0, true);
        b.move(odd, 'a', odd_next, +1, -1, false);
      } else {
        b.move(odd, 'a', odd_next, +1);
      }
      b.move(even, 'a', even_next, +1, 1);
      if (r == 0 && e == 1) {
        b.move(odd, 'b', blk[0][0][0], +1, 0, true);
        b.move(odd, kRightEndMarker, skip, -1, 0, true);
        b.move(even, 'b', blk[1][0][0], +1);
        b.move(even, kRightEndMarker, zero, 0);
      }
    }
  b.move(zero, kRightEndMarker, large[0], -1, 0, true);
  b.move(zero, kRightEndMarker, zero, 0, -1, false);
  b.move(skip, 'a', skip, -1);
  b.move(skip, 'b', large[0], -1);

  // Right to left: pairs (B_{2j+1}, B_{2j+2}), larger block first. B0 is the
  // only block whose length is 7 mod 8.
  for (long r = 0; r < 8; ++r) b.move(large[r], 'a', large[(r + 1) % 8], -1, r == 0 ? 1 : 0);
  b.move(large[0], 'b', small, -1);
  b.move(large[7], 'b', phase, 0);
  b.move(small, 'a', reject, 0, 0, true);
  b.move(small, 'a', small, -1, -1, false);
  b.move(small, 'b', large[0], -1, 0, true);
  b.complete_with(reject);
  return {b.build(), [oracle](std::string_view w) { return power_eq_L_member(w, oracle); },
          symmetric_bounds(Rational(49, 50))};
}

}  // namespace qcfa
