#include "cbl/cgm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbl {

CausalGraph::CausalGraph(std::vector<std::string> names,
                         std::vector<std::pair<int, int>> edges)
    : names_(std::move(names)), edges_(std::move(edges)) {
  if (names_.empty()) throw std::invalid_argument("graph needs at least one node");
  const int n = num_vars();
  for (const auto& [c, e] : edges_) {
    if (c < 0 || c >= n || e < 0 || e >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (c == e) throw std::invalid_argument("self-loop edge");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  parents_.assign(n, {});
  for (const auto& [c, e] : edges_) parents_[e].push_back(c);
  for (auto& p : parents_) std::sort(p.begin(), p.end());
}

bool CausalGraph::has_edge(int cause, int effect) const {
  return std::binary_search(edges_.begin(), edges_.end(),
                            std::make_pair(cause, effect));
}

CausalGraph CausalGraph::with_edge(int cause, int effect) const {
  auto edges = edges_;
  edges.emplace_back(cause, effect);
  return CausalGraph(names_, std::move(edges));
}

CausalGraph CausalGraph::without_edge(int cause, int effect) const {
  auto edges = edges_;
  std::erase(edges, std::make_pair(cause, effect));
  return CausalGraph(names_, std::move(edges));
}

ParamTable::ParamTable(std::vector<Cpt> tables) : tables_(std::move(tables)) {
  for (const auto& t : tables_) {
    if (!std::is_sorted(t.parents.begin(), t.parents.end()) ||
        std::adjacent_find(t.parents.begin(), t.parents.end()) != t.parents.end())
      throw std::invalid_argument("cpt parents must be sorted and unique");
    if (t.parents.size() >= 8 * sizeof(std::size_t))
      throw std::invalid_argument("too many parents");
    if (t.p_one.size() != (std::size_t{1} << t.parents.size()))
      throw std::invalid_argument("cpt row count must be 2^|parents|");
    for (double p : t.p_one)
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("cpt entry outside [0,1]");
  }
}

ParamTable ParamTable::constant(const CausalGraph& graph, double fill) {
  std::vector<Cpt> tables;
  tables.reserve(graph.num_vars());
  for (int k = 0; k < graph.num_vars(); ++k) {
    Cpt t;
    t.parents = graph.parents(k);
    t.p_one.assign(std::size_t{1} << t.parents.size(), fill);
    tables.push_back(std::move(t));
  }
  return ParamTable(std::move(tables));
}

std::size_t ParamTable::row_index(const Cpt& cpt,
                                  const std::vector<std::uint8_t>& values) {
  std::size_t row = 0;
  for (std::size_t b = 0; b < cpt.parents.size(); ++b)
    row |= static_cast<std::size_t>(values[cpt.parents[b]] & 1u) << b;
  return row;
}

double ParamTable::prob_one(int var, const std::vector<std::uint8_t>& values) const {
  const Cpt& t = tables_.at(var);
  return t.p_one[row_index(t, values)];
}

Observation::Observation(std::vector<std::uint8_t> values_in,
                         std::vector<int> intervened_in,
                         std::vector<std::uint8_t> forced_in)
    : values(std::move(values_in)),
      intervened(std::move(intervened_in)),
      forced(std::move(forced_in)) {
  if (intervened.size() != forced.size())
    throw std::invalid_argument("intervened/forced size mismatch");
  if (!std::is_sorted(intervened.begin(), intervened.end()) ||
      std::adjacent_find(intervened.begin(), intervened.end()) != intervened.end())
    throw std::invalid_argument("intervened indexes must be sorted and unique");
  for (std::size_t i = 0; i < intervened.size(); ++i) {
    const int var = intervened[i];
    if (var < 0 || static_cast<std::size_t>(var) >= values.size())
      throw std::invalid_argument("intervened index out of range");
    if (values[var] != forced[i])
      throw std::invalid_argument("observed value disagrees with forced value");
  }
  for (auto v : values)
    if (v > 1) throw std::invalid_argument("variable values must be binary");
}

bool Observation::is_intervened(int var) const {
  return std::binary_search(intervened.begin(), intervened.end(), var);
}

std::vector<int> validate_dag(const CausalGraph& graph) {
  const int n = graph.num_vars();
  std::vector<int> indegree(n, 0);
  for (const auto& [c, e] : graph.edges()) {
    (void)c;
    ++indegree[e];
  }
  std::vector<bool> placed(n, false);
  std::vector<int> order;
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (!placed[v] && indegree[v] == 0) {
        pick = v;
        break;
      }
    }
    if (pick < 0) break;
    placed[pick] = true;
    order.push_back(pick);
    for (const auto& [c, e] : graph.edges())
      if (c == pick) --indegree[e];
  }
  if (static_cast<int>(order.size()) == n) return order;

  // Walk residual parents from any unplaced node until a node repeats,
  // then report that loop.
  int start = 0;
  while (placed[start]) ++start;
  std::vector<int> path{start};
  std::vector<int> pos(n, -1);
  pos[start] = 0;
  for (;;) {
    int cur = path.back();
    int parent = -1;
    for (int p : graph.parents(cur)) {
      if (!placed[p]) {
        parent = p;
        break;
      }
    }
    if (pos[parent] >= 0) {
      std::vector<std::pair<int, int>> cycle;
      cycle.emplace_back(parent, path.back());
      for (std::size_t i = path.size() - 1; i > static_cast<std::size_t>(pos[parent]); --i)
        cycle.emplace_back(path[i], path[i - 1]);
      std::reverse(cycle.begin(), cycle.end());
      throw CycleDetected(std::move(cycle));
    }
    pos[parent] = static_cast<int>(path.size());
    path.push_back(parent);
  }
}

double truncated_likelihood(const Observation& obs, const CausalGraph& graph,
                            const ParamTable& params) {
  const int n = graph.num_vars();
  if (static_cast<int>(obs.values.size()) != n)
    throw DimensionMismatch("observation dimension does not match graph");
  if (params.num_vars() != n)
    throw DimensionMismatch("param table dimension does not match graph");
  double log_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (obs.is_intervened(k)) continue;
    const ParamTable::Cpt& cpt = params.cpt(k);
    if (cpt.parents != graph.parents(k))
      throw MissingParamRow("param table for variable " + graph.names()[k] +
                            " does not cover the graph's parent set");
    const double p1 = cpt.p_one[ParamTable::row_index(cpt, obs.values)];
    const double factor = obs.values[k] ? p1 : 1.0 - p1;
    if (factor == 0.0) return 0.0;
    log_sum += std::log(factor);
  }
  return std::exp(log_sum);
}

namespace {

// Ancestors of `target` with incoming edges of `action_var` removed;
// excludes target and action_var themselves.
std::vector<int> mutilated_ancestors(const CausalGraph& graph, int action_var,
                                     int target_var) {
  std::vector<bool> seen(graph.num_vars(), false);
  std::vector<int> stack{target_var};
  seen[target_var] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (v == action_var) continue;  // intervention severs incoming edges
    for (int p : graph.parents(v)) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  std::vector<int> result;
  for (int v = 0; v < graph.num_vars(); ++v)
    if (seen[v] && v != target_var && v != action_var) result.push_back(v);
  return result;
}

}  // namespace

double interventional_query(const CausalGraph& graph, const ParamTable& params,
                            int action_var, std::uint8_t action_value,
                            int target_var) {
  const int n = graph.num_vars();
  if (action_var == target_var) throw SameVariable("action and target coincide");
  if (action_var < 0 || action_var >= n || target_var < 0 || target_var >= n)
    throw std::invalid_argument("variable index out of range");
  if (params.num_vars() != n)
    throw DimensionMismatch("param table dimension does not match graph");
  validate_dag(graph);

  const std::vector<int> free_vars = mutilated_ancestors(graph, action_var, target_var);
  for (int v : free_vars) {
    if (params.cpt(v).parents != graph.parents(v))
      throw MissingParamRow("param table for variable " + graph.names()[v] +
                            " does not cover the graph's parent set");
  }
  if (params.cpt(target_var).parents != graph.parents(target_var))
    throw MissingParamRow("param table for variable " + graph.names()[target_var] +
                          " does not cover the graph's parent set");

  std::vector<std::uint8_t> values(n, 0);
  values[action_var] = action_value & 1u;
  double total = 0.0;
  const std::size_t combos = std::size_t{1} << free_vars.size();
  for (std::size_t mask = 0; mask < combos; ++mask) {
    for (std::size_t b = 0; b < free_vars.size(); ++b)
      values[free_vars[b]] = static_cast<std::uint8_t>((mask >> b) & 1u);
    double prod = 1.0;
    for (int v : free_vars) {
      const double p1 = params.prob_one(v, values);
      prod *= values[v] ? p1 : 1.0 - p1;
    }
    total += prod * params.prob_one(target_var, values);
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace cbl
