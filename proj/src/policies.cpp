#include "cbl/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "cbl/errors.hpp"

namespace cbl {

double epsilon_at(const EpsilonSchedule& schedule, int t) {
  if (t < 0) throw ValidationError("t", "step index must be >= 0");
  if (schedule.kind == DecayKind::Exponential) {
    return std::max(schedule.eps_min,
                    schedule.eps_start * std::pow(schedule.decay_factor, t));
  }
  if (schedule.horizon <= 0)
    throw ValidationError("horizon", "linear decay needs a positive horizon");
  const double slope =
      (schedule.eps_start - schedule.eps_min) / schedule.horizon;
  return std::max(schedule.eps_min, schedule.eps_start - slope * t);
}

UtilityFn indicator_utility(int variable) {
  return [variable](const std::vector<std::uint8_t>& outcome) {
    return outcome[static_cast<std::size_t>(variable)] == 1 ? 1.0 : 0.0;
  };
}

double expected_utility(const CausalGraph& graph, const ParamTable& params,
                        const Action& action, const UtilityFn& utility) {
  const int n = graph.num_vars();
  if (action.variable < 0 || action.variable >= n)
    throw DimensionMismatch("action variable out of range");
  const std::vector<int> order = validate_dag(graph);

  // Enumerate assignments over the non-intervened variables; the action
  // variable is pinned and contributes no factor.
  std::vector<int> free_vars;
  free_vars.reserve(static_cast<std::size_t>(n) - 1);
  for (int v = 0; v < n; ++v)
    if (v != action.variable) free_vars.push_back(v);

  std::vector<std::uint8_t> values(static_cast<std::size_t>(n), 0);
  values[static_cast<std::size_t>(action.variable)] = action.value;

  double total = 0.0;
  const std::size_t combos = std::size_t{1} << free_vars.size();
  for (std::size_t bits = 0; bits < combos; ++bits) {
    for (std::size_t i = 0; i < free_vars.size(); ++i)
      values[static_cast<std::size_t>(free_vars[i])] =
          static_cast<std::uint8_t>((bits >> i) & 1u);
    double prob = 1.0;
    for (int v : free_vars) {
      const double p1 = params.prob_one(v, values);
      prob *= values[static_cast<std::size_t>(v)] == 1 ? p1 : 1.0 - p1;
      if (prob == 0.0) break;
    }
    if (prob == 0.0) continue;
    total += prob * utility(values);
  }
  return total;
}

Action optimal_action(const CausalGraph& graph, const ParamTable& params,
                      const UtilityFn& utility,
                      const std::vector<Action>& actions) {
  if (actions.empty())
    throw ValidationError("actions", "need at least one candidate action");
  std::size_t best = 0;
  double best_value = expected_utility(graph, params, actions[0], utility);
  for (std::size_t i = 1; i < actions.size(); ++i) {
    const double value = expected_utility(graph, params, actions[i], utility);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  return actions[best];
}

Action select_action(SelectMode mode, double eps, const Action& greedy_action,
                     const std::vector<Action>& actions, Rng& rng) {
  if (actions.empty())
    throw ValidationError("actions", "need at least one candidate action");
  if (mode == SelectMode::Random)
    return actions[uniform_index(rng, actions.size())];
  if (eps < 0.0 || eps > 1.0)
    throw ValidationError("eps", "exploration rate must lie in [0, 1]");
  if (bernoulli(rng, eps)) return actions[uniform_index(rng, actions.size())];
  return greedy_action;
}

QTable::QTable(std::vector<Action> actions, double learning_rate)
    : actions_(std::move(actions)),
      values_(actions_.size(), 0.0),
      learning_rate_(learning_rate) {
  if (actions_.empty())
    throw ValidationError("actions", "need at least one candidate action");
  if (!(learning_rate > 0.0) || learning_rate > 1.0)
    throw ValidationError("learning_rate", "must lie in (0, 1]");
  for (std::size_t i = 0; i < actions_.size(); ++i)
    for (std::size_t j = i + 1; j < actions_.size(); ++j)
      if (actions_[i] == actions_[j])
        throw ValidationError("actions", "duplicate action");
}

double QTable::value(const Action& action) const {
  for (std::size_t i = 0; i < actions_.size(); ++i)
    if (actions_[i] == action) return values_[i];
  throw UnknownAction("action not in table");
}

Action QTable::best() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < actions_.size(); ++i)
    if (values_[i] > values_[best]) best = i;
  return actions_[best];
}

QTable q_update(QTable table, const Action& action, double reward) {
  std::size_t idx = table.actions_.size();
  for (std::size_t i = 0; i < table.actions_.size(); ++i)
    if (table.actions_[i] == action) {
      idx = i;
      break;
    }
  if (idx == table.actions_.size()) throw UnknownAction("action not in table");
  table.values_[idx] +=
      table.learning_rate_ * (reward - table.values_[idx]);
  return table;
}

}  // namespace cbl
