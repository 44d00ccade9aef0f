#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cbl/cgm.hpp"
#include "cbl/rng.hpp"

namespace cbl {

/// An intervention: force one variable to a value.
struct Action {
  int variable = 0;
  std::uint8_t value = 0;

  bool operator==(const Action&) const = default;
};

enum class DecayKind { Exponential, Linear };

struct EpsilonSchedule {
  DecayKind kind = DecayKind::Exponential;
  double eps_start = 1.0;
  double eps_min = 0.01;
  double decay_factor = 0.9;  // exponential
  int horizon = 50;           // linear: total interventions
};

/// Exploration probability at intervention step t (t = 0 is the first).
double epsilon_at(const EpsilonSchedule& schedule, int t);

/// Utility of a full outcome assignment.
using UtilityFn = std::function<double(const std::vector<std::uint8_t>&)>;

/// u(x) = 1 if x[variable] == 1 else 0.
UtilityFn indicator_utility(int variable);

/// Sum over all outcome assignments of u(c) * P(c | do(action)), by exact
/// enumeration of the truncated factorization.
double expected_utility(const CausalGraph& graph, const ParamTable& params,
                        const Action& action, const UtilityFn& utility);

/// Action with the highest interventional expected utility. Ties go to the
/// lowest action index.
Action optimal_action(const CausalGraph& graph, const ParamTable& params,
                      const UtilityFn& utility,
                      const std::vector<Action>& actions);

enum class SelectMode { Random, EpsGreedy };

/// Random mode draws uniformly from `actions`. EpsGreedy explores uniformly
/// with probability eps and otherwise returns `greedy_action`.
Action select_action(SelectMode mode, double eps, const Action& greedy_action,
                     const std::vector<Action>& actions, Rng& rng);

/// Single-state action-value table for the bandit baseline.
class QTable {
 public:
  QTable(std::vector<Action> actions, double learning_rate);

  const std::vector<Action>& actions() const { return actions_; }
  const std::vector<double>& values() const { return values_; }
  double learning_rate() const { return learning_rate_; }

  double value(const Action& action) const;  // UnknownAction if absent

  /// Argmax action, ties broken by lowest index.
  Action best() const;

 private:
  friend QTable q_update(QTable table, const Action& action, double reward);

  std::vector<Action> actions_;
  std::vector<double> values_;
  double learning_rate_;
};

/// Q(a) <- Q(a) + learning_rate * (reward - Q(a)).
QTable q_update(QTable table, const Action& action, double reward);

}  // namespace cbl
