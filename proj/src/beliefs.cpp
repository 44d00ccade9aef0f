#include "cbl/beliefs.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbl {

namespace {

void check_indexes(const std::vector<int>& vars, int n, const char* what) {
  for (int v : vars)
    if (v < 0 || v >= n)
      throw InvalidOrder(std::string(what) + " index out of range");
}

}  // namespace

CandidateEdgeSet::CandidateEdgeSet(std::vector<std::string> names,
                                   std::vector<std::pair<int, int>> pairs,
                                   RestrictionMode mode)
    : names_(std::move(names)), pairs_(std::move(pairs)), mode_(mode) {
  const int n = num_vars();
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& [c, e] = pairs_[i];
    if (c < 0 || c >= n || e < 0 || e >= n)
      throw std::invalid_argument("candidate pair out of range");
    if (c == e) throw std::invalid_argument("candidate self-pair");
    if (!index_.emplace(pairs_[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate candidate pair");
  }
}

int CandidateEdgeSet::index_of(int cause, int effect) const {
  auto it = index_.find({cause, effect});
  return it == index_.end() ? -1 : it->second;
}

CandidateEdgeSet candidate_edges(const std::vector<std::string>& variables,
                                 const std::vector<int>& causal_order,
                                 const std::vector<int>& intervened_vars) {
  const int n = static_cast<int>(variables.size());
  if (static_cast<int>(causal_order.size()) != n)
    throw InvalidOrder("causal order must list every variable exactly once");
  std::vector<bool> seen(n, false);
  for (int v : causal_order) {
    if (v < 0 || v >= n || seen[v])
      throw InvalidOrder("causal order is not a permutation of the variables");
    seen[v] = true;
  }
  check_indexes(intervened_vars, n, "intervened variable");

  std::vector<bool> intervened(n, false);
  for (int v : intervened_vars) intervened[v] = true;

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < causal_order.size(); ++a) {
    for (std::size_t b = a + 1; b < causal_order.size(); ++b) {
      const int cause = causal_order[a];
      const int effect = causal_order[b];
      if (intervened[effect]) continue;
      pairs.emplace_back(cause, effect);
    }
  }
  return CandidateEdgeSet(variables, std::move(pairs),
                          RestrictionMode::CausalOrder);
}

CandidateEdgeSet candidate_edges(const std::vector<std::string>& variables,
                                 const std::vector<int>& causes,
                                 const std::vector<int>& effects,
                                 RestrictionMode mode) {
  if (mode != RestrictionMode::CauseEffectBipartite)
    throw std::invalid_argument("this overload builds bipartite candidate sets");
  const int n = static_cast<int>(variables.size());
  check_indexes(causes, n, "cause");
  check_indexes(effects, n, "effect");
  for (int c : causes)
    for (int e : effects)
      if (c == e)
        throw OverlappingVariableSets(
            "cause and effect variable sets must be disjoint");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(causes.size() * effects.size());
  for (int c : causes)
    for (int e : effects) pairs.emplace_back(c, e);
  return CandidateEdgeSet(variables, std::move(pairs), mode);
}

BeliefMatrix::BeliefMatrix(CandidateEdgeSet candidates, double initial)
    : candidates_(std::move(candidates)),
      values_(candidates_.size(), initial) {
  if (!(initial >= 0.0 && initial <= 1.0))
    throw std::invalid_argument("belief outside [0,1]");
}

BeliefMatrix::BeliefMatrix(CandidateEdgeSet candidates,
                           std::vector<double> values)
    : candidates_(std::move(candidates)), values_(std::move(values)) {
  if (values_.size() != candidates_.size())
    throw DomainMismatch("belief vector does not match candidate set");
  for (double p : values_)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("belief outside [0,1]");
}

BeliefMatrix BeliefMatrix::uniform_random(CandidateEdgeSet candidates,
                                          Rng& rng) {
  std::vector<double> values(candidates.size());
  for (double& p : values) p = canonical_double(rng);
  return BeliefMatrix(std::move(candidates), std::move(values));
}

double BeliefMatrix::at(int cause, int effect) const {
  const int i = candidates_.index_of(cause, effect);
  if (i < 0) throw DomainMismatch("pair is not in the candidate set");
  return values_[static_cast<std::size_t>(i)];
}

CausalGraph sample_graph(const BeliefMatrix& beliefs, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  const auto& pairs = beliefs.candidates().pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (bernoulli(rng, beliefs.at_index(i))) edges.push_back(pairs[i]);
  return CausalGraph(beliefs.candidates().names(), std::move(edges));
}

ParamTable estimate_params(const ObservationBuffer& buffer,
                           const CausalGraph& graph, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  std::vector<ParamTable::Cpt> tables;
  tables.reserve(graph.num_vars());
  for (int k = 0; k < graph.num_vars(); ++k) {
    ParamTable::Cpt t;
    t.parents = graph.parents(k);
    const std::size_t rows = std::size_t{1} << t.parents.size();
    std::vector<double> count(rows, 0.0), count_one(rows, 0.0);
    for (const Observation& obs : buffer.records()) {
      if (obs.values.size() != static_cast<std::size_t>(graph.num_vars()))
        throw DimensionMismatch("buffered observation does not match graph");
      const std::size_t row = ParamTable::row_index(t, obs.values);
      count[row] += 1.0;
      if (obs.values[k]) count_one[row] += 1.0;
    }
    t.p_one.resize(rows);
    for (std::size_t r = 0; r < rows; ++r)
      t.p_one[r] = (count_one[r] + alpha) / (count[r] + 2.0 * alpha);
    tables.push_back(std::move(t));
  }
  return ParamTable(std::move(tables));
}

BeliefMatrix update_beliefs(const BeliefMatrix& beliefs,
                            const CausalGraph& sampled, const Observation& obs,
                            const ParamsProvider& params_provider) {
  const auto& pairs = beliefs.candidates().pairs();
  std::vector<double> next(beliefs.values());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [cause, effect] = pairs[i];
    const CausalGraph with = sampled.with_edge(cause, effect);
    const CausalGraph without = sampled.without_edge(cause, effect);
    const double lik_with = truncated_likelihood(obs, with, params_provider(with));
    const double lik_without =
        truncated_likelihood(obs, without, params_provider(without));
    const double prior = beliefs.at_index(i);
    // Equal likelihoods carry no information; keep the prior exactly
    // rather than round-tripping it through the division.
    if (lik_with == lik_without) continue;
    const double numer = lik_with * prior;
    const double denom = numer + lik_without * (1.0 - prior);
    if (denom > 0.0) next[i] = numer / denom;
    // denom == 0 means both hypotheses gave the data zero likelihood;
    // the posterior is undefined, keep the prior.
  }
  return BeliefMatrix(beliefs.candidates(), std::move(next));
}

std::vector<std::uint8_t> threshold_beliefs(const BeliefMatrix& beliefs,
                                            double theta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("theta must lie in (0,1)");
  std::vector<std::uint8_t> out(beliefs.size());
  for (std::size_t i = 0; i < beliefs.size(); ++i)
    out[i] = beliefs.at_index(i) < theta ? 0 : 1;
  return out;
}

}  // namespace cbl
