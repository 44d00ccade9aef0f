#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cbl/errors.hpp"

namespace cbl {

/// A directed graph over named binary variables. Instances are immutable
/// after construction; edge variants are produced as new graphs. Acyclicity
/// is not enforced at construction, use validate_dag().
class CausalGraph {
 public:
  CausalGraph(std::vector<std::string> names,
              std::vector<std::pair<int, int>> edges);

  int num_vars() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  /// Edges as (cause, effect), sorted and deduplicated.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// Parent indexes of `var`, sorted ascending.
  const std::vector<int>& parents(int var) const { return parents_.at(var); }

  bool has_edge(int cause, int effect) const;

  CausalGraph with_edge(int cause, int effect) const;
  CausalGraph without_edge(int cause, int effect) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> parents_;
};

/// Conditional probability tables P(X_k = 1 | parent assignment), one per
/// variable. Row index bit b holds the value of the b-th parent in sorted
/// parent-index order, so a table has exactly 2^|parents| rows.
class ParamTable {
 public:
  struct Cpt {
    std::vector<int> parents;   // sorted ascending
    std::vector<double> p_one;  // size 2^parents.size()
  };

  explicit ParamTable(std::vector<Cpt> tables);

  /// All-variable table over `graph` with every entry set to `fill`.
  static ParamTable constant(const CausalGraph& graph, double fill);

  int num_vars() const { return static_cast<int>(tables_.size()); }
  const Cpt& cpt(int var) const { return tables_.at(var); }

  /// P(X_var = 1 | parents as set in `values`).
  double prob_one(int var, const std::vector<std::uint8_t>& values) const;

  static std::size_t row_index(const Cpt& cpt,
                               const std::vector<std::uint8_t>& values);

 private:
  std::vector<Cpt> tables_;
};

/// One full realization of the variable vector plus the intervention that
/// produced it.
struct Observation {
  std::vector<std::uint8_t> values;
  std::vector<int> intervened;        // sorted variable indexes
  std::vector<std::uint8_t> forced;   // forced values, parallel to intervened

  Observation(std::vector<std::uint8_t> values_in,
              std::vector<int> intervened_in,
              std::vector<std::uint8_t> forced_in);

  bool is_intervened(int var) const;
};

/// Topological order of `graph` with ties broken by lowest index.
/// Throws CycleDetected (carrying one cycle) if the graph is not a DAG.
std::vector<int> validate_dag(const CausalGraph& graph);

/// Likelihood of `obs` under the truncated factorization: the product of
/// P(x_k | parents) over non-intervened variables only. Intervened
/// variables contribute factor 1. Computed in log space.
double truncated_likelihood(const Observation& obs, const CausalGraph& graph,
                            const ParamTable& params);

/// P(target = 1 | do(action_var = action_value)) by exact marginalization
/// of the truncated factorization over the target's ancestors in the
/// mutilated graph.
double interventional_query(const CausalGraph& graph, const ParamTable& params,
                            int action_var, std::uint8_t action_value,
                            int target_var);

}  // namespace cbl
