#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cbl/cgm.hpp"
#include "cbl/rng.hpp"

namespace cbl {

enum class RestrictionMode { CausalOrder, CauseEffectBipartite };

/// The ordered directed pairs over which edge beliefs are maintained.
class CandidateEdgeSet {
 public:
  CandidateEdgeSet(std::vector<std::string> names,
                   std::vector<std::pair<int, int>> pairs,
                   RestrictionMode mode);

  int num_vars() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  RestrictionMode mode() const { return mode_; }
  std::size_t size() const { return pairs_.size(); }

  /// Position of (cause, effect) in pairs(), or -1 if not a candidate.
  int index_of(int cause, int effect) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<int, int>> pairs_;
  RestrictionMode mode_;
  std::map<std::pair<int, int>, int> index_;
};

/// Candidate pairs in causal-order mode: every (i, j) where i precedes j in
/// `causal_order`, excluding pairs whose effect is an intervened variable
/// (interventions sever incoming edges, so those are unidentifiable).
CandidateEdgeSet candidate_edges(const std::vector<std::string>& variables,
                                 const std::vector<int>& causal_order,
                                 const std::vector<int>& intervened_vars);

/// Candidate pairs in bipartite mode: exactly causes x effects.
CandidateEdgeSet candidate_edges(const std::vector<std::string>& variables,
                                 const std::vector<int>& causes,
                                 const std::vector<int>& effects,
                                 RestrictionMode mode);

/// Per-edge existence beliefs p_ij over a candidate set.
class BeliefMatrix {
 public:
  BeliefMatrix(CandidateEdgeSet candidates, double initial);
  BeliefMatrix(CandidateEdgeSet candidates, std::vector<double> values);

  static BeliefMatrix uniform_random(CandidateEdgeSet candidates, Rng& rng);

  const CandidateEdgeSet& candidates() const { return candidates_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double at(int cause, int effect) const;  // DomainMismatch if not a candidate
  double at_index(std::size_t i) const { return values_.at(i); }

 private:
  CandidateEdgeSet candidates_;
  std::vector<double> values_;
};

/// Append-only record of environment responses.
enum class BufferTag { All, On, Off };

class ObservationBuffer {
 public:
  explicit ObservationBuffer(BufferTag tag) : tag_(tag) {}

  void append(Observation obs) { records_.push_back(std::move(obs)); }
  const std::vector<Observation>& records() const { return records_; }
  BufferTag tag() const { return tag_; }
  std::size_t size() const { return records_.size(); }

 private:
  BufferTag tag_;
  std::vector<Observation> records_;
};

/// One random graph draw: each candidate edge is included independently
/// with its current belief probability.
CausalGraph sample_graph(const BeliefMatrix& beliefs, Rng& rng);

/// Laplace-smoothed maximum-likelihood tables from the buffer:
/// P(X_k = 1 | u) = (count(X_k = 1, u) + alpha) / (count(u) + 2 alpha).
ParamTable estimate_params(const ObservationBuffer& buffer,
                           const CausalGraph& graph, double alpha);

using ParamsProvider = std::function<ParamTable(const CausalGraph&)>;

/// One Bayes round over all candidate pairs. For each pair the observation
/// likelihood is contrasted with the edge added to and removed from the
/// sampled graph, parameters re-estimated per variant, and the belief
/// updated by the exact two-hypothesis posterior. All pairs read the
/// pre-round beliefs (synchronous update).
BeliefMatrix update_beliefs(const BeliefMatrix& beliefs,
                            const CausalGraph& sampled, const Observation& obs,
                            const ParamsProvider& params_provider);

/// Binary edge indicators: 0 where p < theta, else 1.
std::vector<std::uint8_t> threshold_beliefs(const BeliefMatrix& beliefs,
                                            double theta);

}  // namespace cbl
