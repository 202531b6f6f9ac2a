#include "qcfa/engine.hpp"

#include <deque>
#include <unordered_map>

namespace qcfa {
namespace {

enum AbsorbingClass : std::size_t { kAccept = 0, kReject = 1, kRestart = 2, kCensored = 3, kNumClasses = 4 };

std::size_t class_of(StateRole role) {
  switch (role) {
    case StateRole::accept: return kAccept;
    case StateRole::reject: return kReject;
    case StateRole::restart: return kRestart;
    case StateRole::normal: break;
  }
  throw ContractError("class_of on a normal state");
}

struct Exploration {
  // Edges use placeholder targets: node ids, or kClassBase + class.
  std::vector<std::vector<std::pair<std::uint32_t, Scalar>>> edges;
  std::vector<StateId> state_of;
  bool budget_hit = false;
};

constexpr std::uint32_t kClassBase = UINT32_MAX - 8;

void add_edge(std::vector<std::pair<std::uint32_t, Scalar>>& list, std::uint32_t target, Scalar p) {
  for (auto& [t, q] : list) {
    if (t == target) {
      q += p;
      return;
    }
  }
  list.emplace_back(target, std::move(p));
}

Exploration explore(const MachineSpec& spec, std::string_view input, const ProverStrategy* prover,
                    const Configuration& start, const EngineOptions& options) {
  Exploration ex;
  std::unordered_map<std::string, std::uint32_t> index;
  struct Pending {
    std::uint32_t id;
    std::int64_t depth;
    Configuration config;
  };
  std::deque<Pending> queue;
  index.emplace(start.key(), 0);
  ex.edges.emplace_back();
  ex.state_of.push_back(start.state);
  queue.push_back({0, 0, start});

  while (!queue.empty()) {
    Pending cur = std::move(queue.front());
    queue.pop_front();
    auto& out = ex.edges[cur.id];
    if (cur.depth >= options.max_steps || ex.budget_hit) {
      out.emplace_back(kClassBase + kCensored, Scalar(1L));
      continue;
    }
    for (auto& s : step(spec, cur.config, input, prover)) {
      if (spec.halting(s.config.state)) {
        add_edge(ex.edges[cur.id], kClassBase + static_cast<std::uint32_t>(class_of(spec.state(s.config.state).role)),
                 std::move(s.probability));
        continue;
      }
      std::string key = s.config.key();
      auto it = index.find(key);
      std::uint32_t id;
      if (it == index.end()) {
        id = static_cast<std::uint32_t>(ex.edges.size());
        index.emplace(std::move(key), id);
        ex.edges.emplace_back();
        ex.state_of.push_back(s.config.state);
        queue.push_back({id, cur.depth + 1, std::move(s.config)});
        if (ex.edges.size() >= options.node_budget) ex.budget_hit = true;
      } else {
        id = it->second;
      }
      add_edge(ex.edges[cur.id], id, std::move(s.probability));
    }
  }
  return ex;
}

Configuration start_configuration(const MachineSpec& spec, RoundStart start) {
  return start == RoundStart::initial ? initial_configuration(spec) : restart_configuration(spec);
}

}  // namespace

std::string to_string(EngineKind kind) { return kind == EngineKind::exact ? "exact" : "monte-carlo"; }

RoundStatistics evaluate_round(const MachineSpec& spec, std::string_view input, const ProverStrategy* prover,
                               RoundStart start, const EngineOptions& options) {
  Configuration c0 = start_configuration(spec, start);
  RoundStatistics stats;
  if (spec.halting(c0.state)) {
    std::size_t cls = class_of(spec.state(c0.state).role);
    (cls == kAccept ? stats.p_accept : cls == kReject ? stats.p_reject : stats.p_restart) = Scalar(1L);
    stats.round_steps = Scalar(0L);
    return stats;
  }
  Exploration ex = explore(spec, input, prover, c0, options);

  AbsorbingChain<Scalar> chain;
  chain.num_classes = kNumClasses;
  const auto n = static_cast<std::uint32_t>(ex.edges.size());
  chain.out.resize(n);
  for (std::uint32_t v = 0; v < n; ++v)
    for (auto& [t, p] : ex.edges[v]) chain.out[v].emplace_back(t >= kClassBase ? n + (t - kClassBase) : t, std::move(p));
  ChainSolution<Scalar> sol = solve_chain(chain, 0);

  stats.p_accept = sol.absorbed[kAccept];
  stats.p_reject = sol.absorbed[kReject];
  stats.p_restart = sol.absorbed[kRestart];
  stats.p_nonhalt = sol.absorbed[kCensored] + sol.trapped;
  stats.nodes = n;
  if (stats.p_nonhalt.is_zero()) stats.round_steps = sol.expected_steps;
  if (!options.stage_prefix.empty()) {
    Scalar stage(0L);
    for (std::uint32_t v = 0; v < n; ++v)
      if (spec.state(ex.state_of[v]).name.starts_with(options.stage_prefix)) stage += sol.visits[v];
    stats.stage_steps = stage;
  }
  if (ex.budget_hit) {
    throw BudgetError("node budget of " + std::to_string(options.node_budget) + " configurations exhausted on '" +
                          spec.name() + "'",
                      stats);
  }
  return stats;
}

Scalar restart_acceptance(const RoundStatistics& stats) {
  Scalar halt = stats.p_accept + stats.p_reject;
  if (halt.is_zero()) throw ContractError("machine never halts: a round neither accepts nor rejects");
  return stats.p_accept / halt;
}

Scalar expected_rounds(const RoundStatistics& stats) {
  Scalar halt = stats.p_accept + stats.p_reject;
  if (halt.is_zero()) throw ContractError("machine never halts: a round neither accepts nor rejects");
  return Scalar(1L) / halt;
}

RunResult run_exact(const MachineSpec& spec, std::string_view input, const EngineOptions& options,
                    const ProverStrategy* prover) {
  RunResult r;
  r.engine = EngineKind::exact;
  r.precision = working_precision();
  RoundStatistics first = evaluate_round(spec, input, prover, RoundStart::initial, options);
  r.branch_count = first.nodes;
  r.accept_prob = first.p_accept;
  r.reject_prob = first.p_reject;
  r.nonhalt_mass = first.p_nonhalt;
  r.expected_steps = first.round_steps;
  if (first.p_restart.is_zero()) return r;

  RoundStatistics steady = first;
  if (spec.restart_entry() != spec.initial()) {
    steady = evaluate_round(spec, input, prover, RoundStart::restart_entry, options);
    r.branch_count += steady.nodes;
  }
  // Each steady round ends in accept, reject or non-halting mass; restarts
  // repeat it, so the outcome distribution is that of the round conditioned
  // on not restarting.
  Scalar settled = steady.p_accept + steady.p_reject + steady.p_nonhalt;
  if (settled.is_zero()) {
    r.nonhalt_mass += first.p_restart;
    r.expected_steps.reset();
    return r;
  }
  r.accept_prob += first.p_restart * steady.p_accept / settled;
  r.reject_prob += first.p_restart * steady.p_reject / settled;
  r.nonhalt_mass += first.p_restart * steady.p_nonhalt / settled;
  if (r.nonhalt_mass.is_zero() && first.round_steps && steady.round_steps) {
    // Wald: the number of steady rounds is geometric with mean 1/settled.
    r.expected_steps = *first.round_steps + first.p_restart * *steady.round_steps / settled;
  } else {
    r.expected_steps.reset();
  }
  return r;
}

namespace {

struct ExactState {
  Configuration config;  // reg unused
  std::vector<Rational> u;
  Rational weight;
  std::vector<std::string> history;
};

Rational squared_norm(const std::vector<Rational>& u) {
  Rational s = 0;
  for (const auto& x : u) s += x * x;
  return s;
}

}  // namespace

ExactRoundStatistics evaluate_round_exact(const MachineSpec& spec, std::string_view input,
                                          const ProverStrategy* prover, RoundStart start, std::size_t path_budget,
                                          bool suspend_on_exhausted) {
  ExactRoundStatistics stats;
  auto credit = [&](StateRole role, const Rational& w) {
    switch (role) {
      case StateRole::accept: stats.p_accept += w; break;
      case StateRole::reject: stats.p_reject += w; break;
      case StateRole::restart: stats.p_restart += w; break;
      case StateRole::normal: throw ContractError("credit on a normal state");
    }
  };

  std::vector<ExactState> stack;
  {
    ExactState s;
    s.config = start_configuration(spec, start);
    s.u = spec.initial_register_exact();
    s.weight = 1;
    stack.push_back(std::move(s));
  }
  const std::size_t max_depth = 64 * (input.size() + 2) + 1024;
  std::vector<std::size_t> depth_stack{0};

  while (!stack.empty()) {
    ExactState cur = std::move(stack.back());
    stack.pop_back();
    std::size_t depth = depth_stack.back();
    depth_stack.pop_back();
    const StateInfo& info = spec.state(cur.config.state);
    if (info.role != StateRole::normal) {
      credit(info.role, cur.weight);
      ++stats.paths;
      if (stats.paths > path_budget) throw ResourceError("path budget exhausted in exact round evaluation");
      continue;
    }
    if (depth > max_depth) throw StructuralError("round of '" + spec.name() + "' does not terminate along a path");

    const char symbol = tape_symbol(input, cur.config.head);
    char prover_symbol = kEndOfTransmission;
    if (info.reads_prover) {
      if (prover == nullptr) throw ContractError("state '" + info.name + "' reads a prover symbol but no prover is attached");
      prover_symbol = prover->next_symbol(ProverView{input, cur.history, cur.config.cursor});
      if (suspend_on_exhausted && prover_symbol == kEndOfTransmission) {
        stats.p_pending += cur.weight;
        ++stats.paths;
        continue;
      }
    }
    const Rule* rule = spec.lookup(cur.config.state, symbol, cur.config.counter == 0, prover_symbol);
    if (rule == nullptr) throw StructuralError("undefined transition in state '" + info.name + "'");
    const Superoperator& op = spec.operators()[rule->op];

    const Rational norm2 = squared_norm(cur.u);
    Rational exact_mass = 0;
    std::optional<StateRole> lumped_role;
    bool lumped = false;
    for (std::size_t i = 0; i < op.size(); ++i) {
      const OperationElement& e = op.elements()[i];
      const Transition& t = rule->on_outcome[i];
      if (!e.exact_form()) {
        StateRole role = spec.state(t.next).role;
        if (role == StateRole::normal || (lumped && *lumped_role != role)) {
          throw StructuralError("operator '" + op.name() + "' has an inexact element '" + e.label() +
                                "' that does not end the round uniformly");
        }
        lumped = true;
        lumped_role = role;
        continue;
      }
      const ExactForm& f = *e.exact_form();
      std::vector<Rational> v = f.matrix.apply(cur.u);
      Rational p = f.scale_squared * squared_norm(v) / norm2;
      if (p == 0) continue;
      exact_mass += p;
      ExactState next;
      next.config.state = t.next;
      next.config.head = cur.config.head + t.move;
      next.config.counter = cur.config.counter + t.counter_delta;
      next.config.cursor = cur.config.cursor + (info.reads_prover ? 1 : 0);
      next.u = std::move(v);
      next.weight = cur.weight * p;
      if (prover != nullptr && prover->uses_history) {
        next.history = cur.history;
        next.history.push_back(e.label());
      }
      stack.push_back(std::move(next));
      depth_stack.push_back(depth + 1);
    }
    if (lumped) {
      Rational rest = 1 - exact_mass;
      if (rest < 0) throw StructuralError("operator '" + op.name() + "' has exact outcome mass above 1");
      if (rest != 0) credit(*lumped_role, cur.weight * rest);
    } else if (exact_mass != 1) {
      throw StructuralError("operator '" + op.name() + "' is not trace preserving in exact arithmetic");
    }
  }
  return stats;
}

WalkAbsorption walk_absorption(long n) {
  if (n < 1) throw ContractError("walk_absorption needs n >= 1");
  return {Scalar(1L) / Scalar(n + 1), Scalar(n)};
}

namespace {

template <typename T>
AbsorbingChain<T> walk_chain(long n) {
  // Node i-1 is position i; classes: 0 = left end, 1 = right end.
  AbsorbingChain<T> chain;
  chain.num_classes = 2;
  chain.out.resize(static_cast<std::size_t>(n));
  const auto un = static_cast<std::uint32_t>(n);
  T half = T(1L) / T(2L);
  for (std::uint32_t i = 0; i < un; ++i) {
    chain.out[i].emplace_back(i == 0 ? un : i - 1, half);
    chain.out[i].emplace_back(i + 1 == un ? un + 1 : i + 1, half);
  }
  return chain;
}

}  // namespace

WalkAbsorption walk_absorption_solve(long n) {
  if (n < 1) throw ContractError("walk_absorption needs n >= 1");
  auto sol = solve_chain(walk_chain<Scalar>(n), 0);
  return {sol.absorbed[1], sol.expected_steps};
}

ExactWalkAbsorption walk_absorption_exact(long n) {
  if (n < 1) throw ContractError("walk_absorption needs n >= 1");
  auto sol = solve_chain(walk_chain<Rational>(n), 0);
  return {sol.absorbed[1], sol.expected_steps};
}

}  // namespace qcfa
