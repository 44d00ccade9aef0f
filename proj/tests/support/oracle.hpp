#pragma once

// Brute-force reference implementations, deliberately written with none of
// the library's shortcuts: linear-space products, no ancestor pruning, own
// cycle check. Used to cross-check the real code.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cbl/cgm.hpp"
#include "cbl/rng.hpp"

namespace oracle {

// Product of per-variable factors for non-intervened variables.
inline double plain_likelihood(const cbl::Observation& obs,
                               const cbl::CausalGraph& graph,
                               const cbl::ParamTable& params) {
  double prod = 1.0;
  for (int k = 0; k < graph.num_vars(); ++k) {
    if (obs.is_intervened(k)) continue;
    const double p1 = params.prob_one(k, obs.values);
    prod *= obs.values[static_cast<std::size_t>(k)] == 1 ? p1 : 1.0 - p1;
  }
  return prod;
}

// P(target = 1 | do(action)) by summing the truncated joint over every
// assignment of all non-intervened variables.
inline double full_query(const cbl::CausalGraph& graph,
                         const cbl::ParamTable& params, int action_var,
                         std::uint8_t action_value, int target_var) {
  const int n = graph.num_vars();
  std::vector<int> free_vars;
  for (int v = 0; v < n; ++v)
    if (v != action_var) free_vars.push_back(v);

  std::vector<std::uint8_t> values(static_cast<std::size_t>(n), 0);
  values[static_cast<std::size_t>(action_var)] = action_value;
  double total = 0.0;
  for (std::size_t bits = 0; bits < (std::size_t{1} << free_vars.size());
       ++bits) {
    for (std::size_t i = 0; i < free_vars.size(); ++i)
      values[static_cast<std::size_t>(free_vars[i])] =
          static_cast<std::uint8_t>((bits >> i) & 1u);
    if (values[static_cast<std::size_t>(target_var)] != 1) continue;
    double prod = 1.0;
    for (int v : free_vars) {
      const double p1 = params.prob_one(v, values);
      prod *= values[static_cast<std::size_t>(v)] == 1 ? p1 : 1.0 - p1;
    }
    total += prod;
  }
  return total;
}

// Sum over all outcome assignments of utility * truncated joint.
template <typename Utility>
double full_expected_utility(const cbl::CausalGraph& graph,
                             const cbl::ParamTable& params, int action_var,
                             std::uint8_t action_value,
                             const Utility& utility) {
  const int n = graph.num_vars();
  std::vector<int> free_vars;
  for (int v = 0; v < n; ++v)
    if (v != action_var) free_vars.push_back(v);

  std::vector<std::uint8_t> values(static_cast<std::size_t>(n), 0);
  values[static_cast<std::size_t>(action_var)] = action_value;
  double total = 0.0;
  for (std::size_t bits = 0; bits < (std::size_t{1} << free_vars.size());
       ++bits) {
    for (std::size_t i = 0; i < free_vars.size(); ++i)
      values[static_cast<std::size_t>(free_vars[i])] =
          static_cast<std::uint8_t>((bits >> i) & 1u);
    double prod = 1.0;
    for (int v : free_vars) {
      const double p1 = params.prob_one(v, values);
      prod *= values[static_cast<std::size_t>(v)] == 1 ? p1 : 1.0 - p1;
    }
    total += prod * utility(values);
  }
  return total;
}

// DFS cycle check independent of validate_dag.
inline bool has_cycle(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges)
    out[static_cast<std::size_t>(a)].push_back(b);
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // 0 new 1 open 2 done
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (state[static_cast<std::size_t>(start)] != 0) continue;
    stack.push_back(start);
    while (!stack.empty()) {
      const int v = stack.back();
      if (state[static_cast<std::size_t>(v)] == 0) {
        state[static_cast<std::size_t>(v)] = 1;
        for (int w : out[static_cast<std::size_t>(v)]) {
          if (state[static_cast<std::size_t>(w)] == 1) return true;
          if (state[static_cast<std::size_t>(w)] == 0) stack.push_back(w);
        }
      } else {
        if (state[static_cast<std::size_t>(v)] == 1)
          state[static_cast<std::size_t>(v)] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

inline std::vector<std::string> numbered_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("V" + std::to_string(i));
  return names;
}

// Random DAG: random order, each forward pair kept with probability edge_p.
inline cbl::CausalGraph random_dag(int n, double edge_p, cbl::Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = cbl::uniform_index(rng, static_cast<std::size_t>(i) + 1);
    std::swap(order[static_cast<std::size_t>(i)], order[j]);
  }
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (cbl::bernoulli(rng, edge_p))
        edges.emplace_back(order[static_cast<std::size_t>(a)],
                           order[static_cast<std::size_t>(b)]);
  return cbl::CausalGraph(numbered_names(n), std::move(edges));
}

// Strictly interior row probabilities, as Laplace smoothing would produce.
inline cbl::ParamTable random_params(const cbl::CausalGraph& graph,
                                     cbl::Rng& rng) {
  std::vector<cbl::ParamTable::Cpt> tables;
  for (int k = 0; k < graph.num_vars(); ++k) {
    const std::vector<int>& parents = graph.parents(k);
    std::vector<double> p_one(std::size_t{1} << parents.size());
    for (double& p : p_one)
      p = 0.05 + 0.9 * cbl::canonical_double(rng);
    tables.push_back({parents, std::move(p_one)});
  }
  return cbl::ParamTable(std::move(tables));
}

// Random full assignment with `intervened_count` forced coordinates.
inline cbl::Observation random_observation(int n, int intervened_count,
                                           cbl::Rng& rng) {
  std::vector<std::uint8_t> values(static_cast<std::size_t>(n));
  for (auto& v : values) v = cbl::bernoulli(rng, 0.5) ? 1 : 0;
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = cbl::uniform_index(rng, static_cast<std::size_t>(i) + 1);
    std::swap(all[static_cast<std::size_t>(i)], all[j]);
  }
  std::vector<int> intervened(all.begin(), all.begin() + intervened_count);
  std::sort(intervened.begin(), intervened.end());
  std::vector<std::uint8_t> forced;
  for (int v : intervened) forced.push_back(values[static_cast<std::size_t>(v)]);
  return cbl::Observation(std::move(values), std::move(intervened),
                          std::move(forced));
}

}  // namespace oracle
