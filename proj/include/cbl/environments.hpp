#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cbl/cgm.hpp"
#include "cbl/policies.hpp"
#include "cbl/rng.hpp"

namespace cbl {

/// Stochastic four-variable treatment environment. One patient per step:
/// Disease is drawn fresh, Treatment is forced by the caller, Reaction and
/// Lives follow the ground-truth structure.
class DiseaseEnv {
 public:
  static constexpr int kTreatment = 0;
  static constexpr int kDisease = 1;
  static constexpr int kReaction = 2;
  static constexpr int kLives = 3;

  DiseaseEnv(CausalGraph ground_truth, ParamTable true_params);

  static std::vector<std::string> variable_names();
  /// Cause-to-effect ordering used by the belief machinery.
  static std::vector<int> causal_order();
  /// Default ground truth: Treatment->Reaction, Treatment->Lives,
  /// Disease->Lives, Reaction->Lives, with synthetic parameters.
  static DiseaseEnv defaults();

  const CausalGraph& ground_truth() const { return ground_truth_; }
  const ParamTable& true_params() const { return true_params_; }

  struct StepResult {
    Observation observation;
    double reward = 0.0;  // 1 iff Lives == 1
  };

  StepResult step(std::uint8_t treatment, Rng& rng) const;

 private:
  CausalGraph ground_truth_;
  ParamTable true_params_;
};

enum class StructureType { OneToOne, CommonCause, CommonEffect };
enum class LightSemantics { Or, Xor };

/// Deterministic switch/light board. Variables: switches 0..n-1, a no-op
/// action variable at index n, lights n+1..2n. Switch positions persist
/// between steps; lights are a pure function of the switches.
class LightEnv {
 public:
  static LightEnv generate(int n, StructureType type, LightSemantics semantics,
                           Rng& rng);

  /// Variable names for an n-light board: S1..Sn, NoOp, L1..Ln.
  static std::vector<std::string> names_for(int n);

  int n_lights() const { return n_; }
  int var_count() const { return 2 * n_ + 1; }
  int noop_var() const { return n_; }
  StructureType structure_type() const { return type_; }
  LightSemantics semantics() const { return semantics_; }
  const std::vector<std::string>& variable_names() const { return names_; }
  /// (switch variable, light variable) pairs.
  const std::vector<std::pair<int, int>>& wiring() const { return wiring_; }
  CausalGraph ground_truth() const;
  const std::vector<std::uint8_t>& switch_state() const { return switches_; }

  struct StepResult {
    Observation observation;
    bool turned_on = false;  // some light went 0 -> 1
  };

  /// Apply one intervention: set a switch (persists) or take the no-op.
  StepResult step(const Action& action);

  void reset();

 private:
  LightEnv() = default;

  std::vector<std::uint8_t> compute_lights() const;

  int n_ = 0;
  StructureType type_ = StructureType::OneToOne;
  LightSemantics semantics_ = LightSemantics::Or;
  std::vector<std::string> names_;
  std::vector<std::pair<int, int>> wiring_;
  std::vector<std::vector<int>> light_parents_;  // per light 0..n-1
  std::vector<std::uint8_t> switches_;
  std::vector<std::uint8_t> lights_;
};

}  // namespace cbl
