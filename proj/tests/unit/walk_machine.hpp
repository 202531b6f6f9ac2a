#pragma once

// A fair random walk between the end-markers: right end accepts, left end
// rejects (or restarts).

#include "qcfa/machine.hpp"

inline qcfa::MachineSpec walk_machine(bool restart_on_left) {
  using namespace qcfa;
  MachineBuilder b("walk", MachineKind::two_way, "a", {Rational(1), Rational(0)});
  StateId start = b.state("start");
  StateId walk = b.state("walk");
  StateId acc = b.state("acc", StateRole::accept);
  StateId left = restart_on_left ? b.state("again", StateRole::restart) : b.state("rej", StateRole::reject);
  std::size_t coin = b.op(fair_coin(2));
  b.move(start, '<', walk, +1);
  b.rule(walk, 'a', coin, {{walk, +1}, {walk, -1}});
  b.move(walk, '>', acc, 0);
  b.move(walk, '<', left, 0);
  b.complete_with(left);
  b.set_initial(start);
  b.set_restart_entry(start);
  return b.build();
}
