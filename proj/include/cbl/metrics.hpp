#pragma once

#include <cstdint>
#include <vector>

#include "cbl/beliefs.hpp"
#include "cbl/cgm.hpp"

namespace cbl {

/// 1 per candidate edge present in the true graph, else 0, aligned with
/// the candidate set's pair order.
using GroundTruthMask = std::vector<std::uint8_t>;

GroundTruthMask make_mask(const CandidateEdgeSet& candidates,
                          const CausalGraph& truth);

/// sqrt of the summed squared belief-vs-mask differences.
double l2_distance(const BeliefMatrix& beliefs, const GroundTruthMask& truth);

/// Fraction of mismatched entries. Both inputs must be 0/1.
double hamming_loss(const std::vector<std::uint8_t>& binary,
                    const GroundTruthMask& truth);

/// 1 - hamming_loss.
double accuracy(const std::vector<std::uint8_t>& binary,
                const GroundTruthMask& truth);

struct MetricRow {
  int run = 0;
  int round = 0;  // 1-based
  double l2 = 0.0;
  double hamming = 0.0;
  double accuracy = 0.0;
  double reward = 0.0;
  double epsilon = 0.0;
};

}  // namespace cbl
