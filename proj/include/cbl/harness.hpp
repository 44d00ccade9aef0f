#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cbl/beliefs.hpp"
#include "cbl/cgm.hpp"
#include "cbl/environments.hpp"
#include "cbl/metrics.hpp"

namespace cbl {

enum class Scenario { Disease, Lights };
enum class PolicyKind { Random, EpsExp, EpsLin, QLearnExp, QLearnLin };
enum class BeliefInit { Half, UniformRandom };

/// Explicit ground truth + parameters for the treatment scenario, as loaded
/// from the config's "disease" block.
struct DiseaseModel {
  CausalGraph truth;
  ParamTable params;
  std::string note;  // free-form provenance marker, echoed back
};

struct ExperimentConfig {
  Scenario scenario = Scenario::Disease;
  StructureType structure_type = StructureType::OneToOne;  // lights only
  int n_lights = 0;                                        // lights only
  LightSemantics light_semantics = LightSemantics::Or;     // lights only
  int rounds = 50;
  int runs = 10;
  PolicyKind policy = PolicyKind::Random;
  double theta = 0.75;
  double alpha = 1.0;
  BeliefInit belief_init = BeliefInit::Half;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  double q_alpha = 0.1;
  std::optional<DiseaseModel> disease;  // disease only; defaults when absent
};

/// Validate and apply defaults. Unknown keys and keys that do not apply to
/// the chosen scenario are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Read + parse + validate a JSON config file.
ExperimentConfig load_config(const std::string& path);

/// Effective config as JSON, suitable for re-loading.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

/// Everything recorded for one run.
struct RunResult {
  int run_index = 0;
  CausalGraph truth;
  GroundTruthMask mask;
  std::vector<MetricRow> metrics;               // one per round
  std::vector<std::vector<double>> belief_rounds;  // [round][candidate]
  std::size_t on_count = 0;   // lights: observations routed by transition
  std::size_t off_count = 0;
};

struct TraceRecord {
  CandidateEdgeSet candidates;
  std::vector<RunResult> runs;
};

/// Candidate edge set implied by the scenario: causal-order pairs for the
/// treatment problem, the full switch/no-op x light bipartite set for the
/// light board.
CandidateEdgeSet candidates_for(const ExperimentConfig& cfg);

/// One seeded run of the belief-learning loop.
RunResult run_single(const ExperimentConfig& cfg,
                     const CandidateEdgeSet& candidates,
                     std::uint64_t run_seed, int run_index);

/// All runs, each seeded by derive_seed(cfg.seed, run index). Runs execute
/// in parallel, capped by the CBL_THREADS environment variable.
TraceRecord run_experiment(const ExperimentConfig& cfg);

/// Write metrics.csv, beliefs.csv, ground_truth.json, config_echo.json and
/// summary.json into output_dir (created if missing).
void emit_outputs(const TraceRecord& trace, const ExperimentConfig& cfg,
                  const std::string& output_dir);

/// Shortest decimal string that round-trips to exactly `value`.
std::string fmt_double(double value);

}  // namespace cbl
