#include "qcfa/proofsystems.hpp"

#include "qcfa/errors.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <numeric>

namespace qcfa {
namespace {

RationalMatrix rmat(std::initializer_list<std::initializer_list<long>> rows) {
  RationalMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (long x : row) m(i, j++) = Rational(x);
    ++i;
  }
  return m;
}

OperationElement exact(const char* label, const Rational& scale2, RationalMatrix m) {
  return OperationElement::exact(label, scale2, std::move(m));
}

// One transition per element, chosen by label.
std::vector<Transition> by_label(const Superoperator& op, const std::map<std::string, Transition>& targets) {
  std::vector<Transition> out;
  for (const auto& e : op.elements()) {
    auto it = targets.find(e.label());
    if (it == targets.end()) throw StructuralError("no transition for outcome '" + e.label() + "' of " + op.name());
    out.push_back(it->second);
  }
  return out;
}

void check_gamma(const Rational& gamma) {
  if (gamma < 0 || gamma > Rational(1, 3)) throw ContractError("gamma must lie in [0, 1/3], got " + gamma.get_str());
}

std::string transmission_for(const LanguageOracle& oracle, std::string_view input) {
  if (oracle.alphabet() == kUnaryAlphabet) return honest_unary_transmission(oracle, input.size());
  return honest_binary_transmission(oracle, input);
}

// A history-oblivious prover whose transmission depends on the input only.
ProverStrategy streaming(std::string label, std::function<std::string(std::string_view)> make) {
  auto cache = std::make_shared<std::map<std::string, std::string, std::less<>>>();
  return ProverStrategy{std::move(label),
                        [cache, make = std::move(make)](const ProverView& view) {
                          auto it = cache->find(view.input);
                          if (it == cache->end()) it = cache->emplace(std::string(view.input), make(view.input)).first;
                          const std::string& t = it->second;
                          return view.symbols_sent < t.size() ? t[view.symbols_sent] : kEndOfTransmission;
                        },
                        false};
}

}  // namespace

VerifierSpec build_unary_verifier(const Rational& gamma) {
  check_gamma(gamma);
  MachineBuilder b("unary-verifier", MachineKind::two_way, kUnaryAlphabet, {Rational(1), Rational(0)});
  b.set_prover_alphabet(kUnaryProverAlphabet);
  StateId accept = b.state("accept", StateRole::accept);
  StateId reject = b.state("reject", StateRole::reject);
  StateId restart = b.state("restart", StateRole::restart);
  StateId init = b.state("init");
  std::array<StateId, 2> proc{b.state("proc-last0", StateRole::normal, true), b.state("proc-last1", StateRole::normal, true)};

  const Rational g = gamma;
  const Rational init_scale = 1 / (1 + g * g);
  RationalMatrix go1(2, 2), go2(2, 2);
  go1(0, 0) = g;
  go1(1, 0) = 1;
  go2(0, 1) = g;
  go2(1, 1) = 1;
  std::size_t op_init = b.op(Superoperator(kInitOp, {OperationElement::exact("go1", init_scale, go1),
                                                     OperationElement::exact("go2", init_scale, go2)}));
  std::size_t op_p0 = b.op(Superoperator(kProc0Op, {exact("go", Rational(1, 16), rmat({{4, 0}, {0, 1}})),
                                                    exact("restart", Rational(15, 16), rmat({{0, 1}, {0, 0}}))}));
  std::size_t op_p1 = b.op(Superoperator(kProc1Op, {exact("go", Rational(1, 18), rmat({{4, -1}, {0, 1}})),
                                                    exact("restart", Rational(1, 18), rmat({{1, 4}, {1, 0}}))}));
  std::size_t op_right = b.op(Superoperator(kRightOp, {exact("reject", Rational(1), rmat({{1, 0}, {0, 0}})),
                                                       exact("agree", Rational(1, 3), rmat({{0, 0}, {0, 1}})),
                                                       exact("restart", Rational(2, 3), rmat({{0, 1}, {0, 0}}))}));
  b.set_initial(init);
  b.all_outcomes(init, kLeftEndMarker, op_init, {proc[0], 0});
  for (int last = 0; last < 2; ++last) {
    b.rule(proc[last], kRightEndMarker, op_right, {{reject, 0}, {last ? accept : reject, 0}, {restart, 0}});
    b.rule(proc[last], std::nullopt, op_p0, {{proc[0], +1}, {restart, 0}}, std::nullopt, '0');
    b.rule(proc[last], std::nullopt, op_p1, {{proc[1], +1}, {restart, 0}}, std::nullopt, '1');
  }
  b.complete_with(reject);
  return {b.build(), false, gamma, Rational(1)};
}

std::vector<OperationElement> binary_partial_elements(const std::string& op, const Rational& c) {
  const Rational c2 = c * c;
  if (op == kEncode0Op) return {exact("go", c2, rmat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 1}}))};
  if (op == kEncode1Op) return {exact("go", c2, rmat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 1, 2, 0}, {0, 0, 0, 1}}))};
  if (op == kSuccOp) {
    return {exact("go", c2, rmat({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 1, 0, 0}, {0, 1, 1, 0}})),
            exact("reject", c2, rmat({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 1, -1}, {0, 0, 0, 0}}))};
  }
  if (op == kProc0Op) return {exact("go", c2, rmat({{4, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}))};
  if (op == kProc1Op) return {exact("go", c2, rmat({{4, -1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}))};
  if (op == kDecideOp) {
    return {exact("reject", c2, rmat({{1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}})),
            exact("agree", c2 / 3, rmat({{0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}))};
  }
  throw ContractError("no binary verifier operator named '" + op + "'");
}

VerifierSpec build_binary_verifier(const Rational& gamma, const Rational& c) {
  check_gamma(gamma);
  if (c <= 0) throw ContractError("the common coefficient must be positive");
  MachineBuilder b("binary-verifier", MachineKind::two_way, kBinaryAlphabet,
                   {Rational(1), Rational(0), Rational(0), Rational(0)});
  b.set_prover_alphabet(kBinaryProverAlphabet);
  StateId accept = b.state("accept", StateRole::accept);
  StateId reject = b.state("reject", StateRole::reject);
  StateId restart = b.state("restart", StateRole::restart);
  StateId init = b.state("init");
  StateId hash = b.state("expect-hash", StateRole::normal, true);
  std::array<StateId, 2> enc{b.state("encode-mismatch", StateRole::normal, true),
                             b.state("encode-match", StateRole::normal, true)};
  std::array<StateId, 2> sig{b.state("bit", StateRole::normal, true), b.state("bit-final", StateRole::normal, true)};
  std::array<StateId, 2> dec{b.state("decide-claim0"), b.state("decide-claim1")};
  StateId rewind = b.state("rewind");

  auto completed = [&](const char* name) {
    return b.op(complete_superoperator(name, binary_partial_elements(name, c), "restart"));
  };
  const std::size_t op_enc0 = completed(kEncode0Op), op_enc1 = completed(kEncode1Op), op_succ = completed(kSuccOp),
                    op_p0 = completed(kProc0Op), op_p1 = completed(kProc1Op), op_decide = completed(kDecideOp);

  const Rational scale = 1 / (gamma * gamma + 3);
  std::size_t op_init = b.op(preparation(scale, {gamma, Rational(1), Rational(1), Rational(1)},
                                         {"go1", "go2", "go3", "go4"}, kInitOp));
  b.set_initial(init);
  b.all_outcomes(init, kLeftEndMarker, op_init, {hash, +1});
  b.move(hash, std::nullopt, enc[1], 0, 0, std::nullopt, kBlockStart);

  const Transition to_restart{restart, 0};
  for (int m = 0; m < 2; ++m) {
    for (char bit : {'0', '1'}) {
      b.move(enc[m], kRightEndMarker, reject, 0, 0, std::nullopt, bit);  // s longer than w
      std::size_t op = bit == '0' ? op_enc0 : op_enc1;
      for (char x : {'0', '1'}) {
        StateId next = enc[m && x == bit];
        b.rule(enc[m], x, op, by_label(b.operator_at(op), {{"go", {next, +1}}, {"restart", to_restart}}), std::nullopt,
               bit);
      }
    }
    for (char x : {'0', '1', kRightEndMarker}) {
      StateId next = sig[m && x == kRightEndMarker];
      b.rule(enc[m], x, op_succ,
             by_label(b.operator_at(op_succ), {{"go", {next, 0}}, {"reject", {reject, 0}}, {"restart", to_restart}}),
             std::nullopt, kDagger);
    }
  }
  for (int f = 0; f < 2; ++f)
    for (int bit = 0; bit < 2; ++bit) {
      std::size_t op = bit ? op_p1 : op_p0;
      StateId next = f ? dec[bit] : rewind;
      b.rule(sig[f], std::nullopt, op, by_label(b.operator_at(op), {{"go", {next, 0}}, {"restart", to_restart}}),
             std::nullopt, bit ? '1' : '0');
    }
  for (int claim = 0; claim < 2; ++claim) {
    b.rule(dec[claim], std::nullopt, op_decide,
           by_label(b.operator_at(op_decide),
                    {{"reject", {reject, 0}}, {"agree", {claim ? accept : reject, 0}}, {"restart", to_restart}}));
  }
  b.move(rewind, kLeftEndMarker, hash, +1);
  b.move(rewind, std::nullopt, rewind, -1);
  b.complete_with(reject);
  return {b.build(), true, gamma, c};
}

const Superoperator& verifier_operator(const VerifierSpec& v, const std::string& name) {
  for (const auto& op : v.machine.operators())
    if (op.name() == name) return op;
  throw ContractError("verifier '" + v.machine.name() + "' has no operator named '" + name + "'");
}

ProverStrategy honest_prover(const LanguageOracle& oracle) {
  return streaming("honest", [oracle](std::string_view input) { return transmission_for(oracle, input); });
}

ProverStrategy final_bit_adversary(const LanguageOracle& oracle) {
  return streaming("final-bit", [oracle](std::string_view input) {
    std::string t = transmission_for(oracle, input);
    t.back() = t.back() == '1' ? '0' : '1';
    return t;
  });
}

ProverStrategy out_of_order_adversary(const LanguageOracle& oracle, std::vector<std::size_t> permutation) {
  if (oracle.alphabet() != kBinaryAlphabet) throw ContractError("out-of-order provers apply to binary systems only");
  std::vector<std::size_t> sorted = permutation;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i) throw ContractError("block order is not a permutation of 0.." + std::to_string(sorted.size() - 1));
  return streaming("out-of-order", [oracle, permutation](std::string_view input) {
    const std::uint64_t blocks = lex_index(kBinaryAlphabet, input);
    if (permutation.size() != blocks) {
      throw ContractError("block order covers " + std::to_string(permutation.size()) + " blocks but the input needs " +
                          std::to_string(blocks));
    }
    std::string t;
    for (std::size_t i : permutation) {
      t += kBlockStart;
      t += lex_string(kBinaryAlphabet, i + 1);
      t += kDagger;
      t += oracle.member_at(i + 1) ? '1' : '0';
    }
    return t;
  });
}

Rational restart_acceptance_exact(const ExactRoundStatistics& s) {
  Rational halt = s.p_accept + s.p_reject;
  if (halt == 0) throw ContractError("machine never halts: a round neither accepts nor rejects");
  return s.p_accept / halt;
}

ProtocolResult run_protocol(const VerifierSpec& v, const ProverStrategy& prover, std::string_view input) {
  ProtocolResult r;
  r.prover = prover.label;
  r.exact = evaluate_round_exact(v.machine, input, &prover);
  r.round.p_accept = Scalar(r.exact.p_accept);
  r.round.p_reject = Scalar(r.exact.p_reject);
  r.round.p_restart = Scalar(r.exact.p_restart);
  r.round.p_nonhalt = Scalar(0L);
  r.round.nodes = r.exact.paths;
  r.overall_acceptance = restart_acceptance_exact(r.exact);
  r.expected_rounds = 1 / (r.exact.p_accept + r.exact.p_reject);
  if (!prover.uses_history) {
    std::vector<std::string> none;
    while (r.transcript_length < 100'000'000 &&
           prover.next_symbol(ProverView{input, none, r.transcript_length}) != kEndOfTransmission)
      ++r.transcript_length;
  }
  return r;
}

AdversarySearchResult exhaustive_adversary_search(const VerifierSpec& v, std::string_view input,
                                                  std::size_t symbol_budget, std::size_t transcript_budget) {
  const std::string alphabet = v.machine.prover_alphabet();
  AdversarySearchResult best;
  bool have_best = false;
  std::string prefix;

  auto evaluate = [&](bool suspend) {
    ProverStrategy p = ProverStrategy::from_transcript("search", prefix);
    return evaluate_round_exact(v.machine, input, &p, RoundStart::initial, 10'000'000, suspend);
  };
  std::function<void()> visit = [&] {
    if (++best.evaluated > transcript_budget) {
      throw ResourceError("adversary search exceeded " + std::to_string(transcript_budget) + " transcripts");
    }
    ExactRoundStatistics full = evaluate(false);
    Rational halt = full.p_accept + full.p_reject;
    if (halt != 0) {
      Rational acc = full.p_accept / halt;
      if (!have_best || acc > best.max_acceptance) {
        best.max_acceptance = acc;
        best.witness = prefix;
        have_best = true;
      }
    }
    if (prefix.size() >= symbol_budget) return;
    // No continuation can accept more than the committed acceptance plus the
    // pending mass, nor reject less than the committed rejection.
    ExactRoundStatistics part = evaluate(true);
    Rational reach = part.p_accept + part.p_pending;
    if (have_best && reach + part.p_reject != 0 && reach / (reach + part.p_reject) <= best.max_acceptance) {
      ++best.pruned;
      return;
    }
    if (part.p_pending == 0) return;
    for (char s : alphabet) {
      prefix.push_back(s);
      visit();
      prefix.pop_back();
    }
  };
  visit();
  return best;
}

std::vector<Rational> delta_trace(const Rational& gamma, const std::vector<bool>& bits) {
  std::vector<Rational> out{gamma};
  for (bool b : bits) out.push_back(b ? Rational(4 * out.back() - 1) : Rational(4 * out.back()));
  return out;
}

}  // namespace qcfa
