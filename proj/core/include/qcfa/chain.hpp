#pragma once

// Absorbing Markov chains given as sparse transition lists.
//
// Transient nodes are 0..n-1; an edge target >= n names absorbing class
// (target - n). Mass is pushed forward from the source through strongly
// connected components in topological order; each component with cycles is
// solved by sparse Gaussian elimination. This yields expected visit counts
// for every transient node, hence absorption probabilities and the expected
// number of steps, in a single solve.

#include "qcfa/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace qcfa {

template <typename T>
struct AbsorbingChain {
  using Edge = std::pair<std::uint32_t, T>;
  std::vector<std::vector<Edge>> out;  // one list per transient node
  std::size_t num_classes = 0;

  std::size_t size() const { return out.size(); }
  std::uint32_t absorbing(std::size_t cls) const { return static_cast<std::uint32_t>(out.size() + cls); }
};

template <typename T>
struct ChainSolution {
  std::vector<T> absorbed;  // mass per absorbing class
  T trapped{0L};            // mass entering closed transient components
  T expected_steps{0L};     // sum of expected visits; meaningful only if trapped == 0
  std::vector<T> visits;    // expected visits per transient node
};

namespace detail {

// Iterative Tarjan. Components come out in reverse topological order.
inline std::vector<std::vector<std::uint32_t>> tarjan_scc(const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
  constexpr std::uint32_t unvisited = UINT32_MAX;
  std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> comps;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::uint32_t counter = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        std::uint32_t w = adj[v][pos++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        comps.push_back(std::move(comp));
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comps;
}

template <typename T>
bool is_zero_value(const T& x) {
  if constexpr (std::is_same_v<T, Scalar>) {
    return x.is_zero();
  } else {
    return x == 0;
  }
}

// Solves A x = b for a square sparse A (rows as column->value maps) by
// elimination in the given row order. No pivoting: the systems solved here
// are (I - Q)^T for substochastic Q, which are column diagonally dominant.
template <typename T>
std::vector<T> sparse_solve(std::vector<std::map<std::uint32_t, T>> rows, std::vector<T> b) {
  const std::size_t k = rows.size();
  std::vector<std::set<std::uint32_t>> col_rows(k);
  for (std::uint32_t r = 0; r < k; ++r)
    for (const auto& [c, v] : rows[r]) col_rows[c].insert(r);
  for (std::uint32_t p = 0; p < k; ++p) {
    auto pit = rows[p].find(p);
    if (pit == rows[p].end() || is_zero_value(pit->second)) throw std::domain_error("singular transient system");
    const T pivot = pit->second;
    std::vector<std::uint32_t> targets;
    for (std::uint32_t r : col_rows[p])
      if (r > p) targets.push_back(r);
    for (std::uint32_t r : targets) {
      T factor = rows[r][p] / pivot;
      rows[r].erase(p);
      col_rows[p].erase(r);
      for (const auto& [c, v] : rows[p]) {
        if (c <= p) continue;
        auto [it, inserted] = rows[r].try_emplace(c, T(0L));
        it->second -= factor * v;
        if (inserted) col_rows[c].insert(r);
      }
      b[r] -= factor * b[p];
    }
  }
  std::vector<T> x(k, T(0L));
  for (std::size_t i = k; i-- > 0;) {
    T acc = b[i];
    for (const auto& [c, v] : rows[i])
      if (c > i) acc -= v * x[c];
    x[i] = acc / rows[i].at(static_cast<std::uint32_t>(i));
  }
  return x;
}

}  // namespace detail

/// Forward solve from `source`. Throws std::domain_error on a singular
/// component (cannot happen for a well-formed chain).
template <typename T>
ChainSolution<T> solve_chain(const AbsorbingChain<T>& chain, std::uint32_t source) {
  const std::size_t n = chain.size();
  ChainSolution<T> sol;
  sol.absorbed.assign(chain.num_classes, T(0L));
  sol.visits.assign(n, T(0L));
  if (n == 0) return sol;

  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v)
    for (const auto& [t, p] : chain.out[v])
      if (t < n) adj[v].push_back(t);
  auto comps = detail::tarjan_scc(adj);

  std::vector<std::uint32_t> comp_of(n);
  for (std::uint32_t ci = 0; ci < comps.size(); ++ci)
    for (auto v : comps[ci]) comp_of[v] = ci;

  // Incoming mass from upstream components (and the unit source).
  std::vector<T> inflow(n, T(0L));
  inflow[source] = T(1L);

  for (std::size_t ci = comps.size(); ci-- > 0;) {
    auto& comp = comps[ci];
    bool any_inflow = false;
    for (auto v : comp)
      if (!detail::is_zero_value(inflow[v])) any_inflow = true;
    if (!any_inflow) continue;

    bool has_exit = false;
    bool cyclic = comp.size() > 1;
    for (auto v : comp)
      for (const auto& [t, p] : chain.out[v]) {
        if (t >= n || comp_of[t] != ci) has_exit = true;
        if (t == v) cyclic = true;
      }
    if (!has_exit) {
      for (auto v : comp) sol.trapped += inflow[v];
      continue;
    }

    if (!cyclic) {
      sol.visits[comp.front()] = inflow[comp.front()];
    } else {
      std::sort(comp.begin(), comp.end());
      std::map<std::uint32_t, std::uint32_t> local;
      for (std::uint32_t i = 0; i < comp.size(); ++i) local[comp[i]] = i;
      // Visits x satisfy x = inflow + Q_cc^T x, i.e. (I - Q_cc)^T x = inflow.
      std::vector<std::map<std::uint32_t, T>> rows(comp.size());
      std::vector<T> rhs(comp.size(), T(0L));
      for (std::uint32_t i = 0; i < comp.size(); ++i) {
        rows[i].emplace(i, T(1L));
        rhs[i] = inflow[comp[i]];
      }
      for (std::uint32_t i = 0; i < comp.size(); ++i)
        for (const auto& [t, p] : chain.out[comp[i]]) {
          if (t >= n || comp_of[t] != ci) continue;
          std::uint32_t j = local[t];
          auto [it, inserted] = rows[j].try_emplace(i, T(0L));
          it->second -= p;
        }
      auto x = detail::sparse_solve(std::move(rows), std::move(rhs));
      for (std::uint32_t i = 0; i < comp.size(); ++i) sol.visits[comp[i]] = std::move(x[i]);
    }

    for (auto v : comp) {
      const T& x = sol.visits[v];
      sol.expected_steps += x;
      for (const auto& [t, p] : chain.out[v]) {
        if (t >= n) {
          sol.absorbed[t - n] += x * p;
        } else if (comp_of[t] != ci) {
          inflow[t] += x * p;
        }
      }
    }
  }
  return sol;
}

}  // namespace qcfa
