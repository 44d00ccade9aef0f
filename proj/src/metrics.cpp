#include "cbl/metrics.hpp"

#include <cmath>

#include "cbl/errors.hpp"

namespace cbl {

GroundTruthMask make_mask(const CandidateEdgeSet& candidates,
                          const CausalGraph& truth) {
  GroundTruthMask mask;
  mask.reserve(candidates.size());
  for (const auto& [cause, effect] : candidates.pairs())
    mask.push_back(truth.has_edge(cause, effect) ? 1 : 0);
  return mask;
}

double l2_distance(const BeliefMatrix& beliefs, const GroundTruthMask& truth) {
  if (beliefs.size() != truth.size())
    throw DomainMismatch("belief and mask domains differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = beliefs.at_index(i) - truth[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double hamming_loss(const std::vector<std::uint8_t>& binary,
                    const GroundTruthMask& truth) {
  if (binary.size() != truth.size())
    throw DomainMismatch("prediction and mask domains differ");
  if (binary.empty()) throw DomainMismatch("empty domain");
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (binary[i] > 1 || truth[i] > 1)
      throw NonBinaryInput("entries must be 0 or 1");
    if (binary[i] != truth[i]) ++mismatched;
  }
  return static_cast<double>(mismatched) / static_cast<double>(truth.size());
}

double accuracy(const std::vector<std::uint8_t>& binary,
                const GroundTruthMask& truth) {
  return 1.0 - hamming_loss(binary, truth);
}

}  // namespace cbl
