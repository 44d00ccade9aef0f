#include "cbl/environments.hpp"

#include <algorithm>
#include <numeric>

#include "cbl/errors.hpp"

namespace cbl {

namespace {

// Position of each variable in the causal order (Disease, Treatment,
// Reaction, Lives), indexed by variable id.
constexpr int kOrderPos[4] = {1, 0, 2, 3};

}  // namespace

DiseaseEnv::DiseaseEnv(CausalGraph ground_truth, ParamTable true_params)
    : ground_truth_(std::move(ground_truth)),
      true_params_(std::move(true_params)) {
  if (ground_truth_.names() != variable_names())
    throw ValidationError("ground_truth",
                          "variables must be Treatment, Disease, Reaction, "
                          "Lives in that order");
  for (const auto& [cause, effect] : ground_truth_.edges())
    if (kOrderPos[cause] >= kOrderPos[effect])
      throw ValidationError("ground_truth",
                            "edge violates the causal order (Disease, "
                            "Treatment, Reaction, Lives)");
  if (true_params_.num_vars() != ground_truth_.num_vars())
    throw DimensionMismatch("parameter table size mismatch");
  for (int v = 0; v < ground_truth_.num_vars(); ++v) {
    const auto& cpt = true_params_.cpt(v);
    if (cpt.parents != ground_truth_.parents(v))
      throw ValidationError("params", "table rows do not match graph parents");
    for (double p : cpt.p_one)
      if (!(p >= 0.0) || !(p <= 1.0))
        throw ValidationError("params", "probability outside [0, 1]");
  }
}

std::vector<std::string> DiseaseEnv::variable_names() {
  return {"Treatment", "Disease", "Reaction", "Lives"};
}

std::vector<int> DiseaseEnv::causal_order() {
  return {kDisease, kTreatment, kReaction, kLives};
}

DiseaseEnv DiseaseEnv::defaults() {
  CausalGraph truth(variable_names(), {{kTreatment, kReaction},
                                       {kTreatment, kLives},
                                       {kDisease, kLives},
                                       {kReaction, kLives}});
  std::vector<ParamTable::Cpt> tables(4);
  tables[kTreatment] = {{}, {0.5}};  // forced every step; marginal unused
  tables[kDisease] = {{}, {0.5}};
  // Treatment A (=0) usually provokes the reaction, B rarely does.
  tables[kReaction] = {{kTreatment}, {0.9, 0.1}};
  // Row bit order: Treatment, Disease, Reaction. Survival drops with the
  // disease and with the reaction; treatment B helps the diseased.
  tables[kLives] = {{kTreatment, kDisease, kReaction},
                    {0.9, 0.9, 0.7, 0.8, 0.5, 0.5, 0.3, 0.4}};
  return DiseaseEnv(std::move(truth), ParamTable(std::move(tables)));
}

DiseaseEnv::StepResult DiseaseEnv::step(std::uint8_t treatment,
                                        Rng& rng) const {
  if (treatment > 1) throw ValidationError("treatment", "must be 0 or 1");
  std::vector<std::uint8_t> values(4, 0);
  values[kTreatment] = treatment;
  for (int var : causal_order()) {
    if (var == kTreatment) continue;
    values[var] = bernoulli(rng, true_params_.prob_one(var, values)) ? 1 : 0;
  }
  const double reward = values[kLives] == 1 ? 1.0 : 0.0;
  Observation obs(std::move(values), {kTreatment}, {treatment});
  return {std::move(obs), reward};
}

namespace {

// Fisher-Yates over 0..n-1 using the project RNG primitives.
std::vector<int> shuffled_indices(int n, Rng& rng) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = uniform_index(rng, static_cast<std::size_t>(i) + 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
  }
  return idx;
}

}  // namespace

std::vector<std::string> LightEnv::names_for(int n) {
  if (n < 1) throw InvalidSize("need at least one light");
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(2 * n + 1));
  for (int i = 0; i < n; ++i) names.push_back("S" + std::to_string(i + 1));
  names.push_back("NoOp");
  for (int i = 0; i < n; ++i) names.push_back("L" + std::to_string(i + 1));
  return names;
}

LightEnv LightEnv::generate(int n, StructureType type,
                            LightSemantics semantics, Rng& rng) {
  if (n < 1) throw InvalidSize("need at least one light");
  if (type != StructureType::OneToOne && n < 2)
    throw InvalidSize(
        "common-cause and common-effect structures need at least two lights");

  LightEnv env;
  env.n_ = n;
  env.type_ = type;
  env.semantics_ = semantics;
  env.names_ = names_for(n);

  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n));
  switch (type) {
    case StructureType::OneToOne: {
      const std::vector<int> perm = shuffled_indices(n, rng);
      for (int s = 0; s < n; ++s)
        parents[static_cast<std::size_t>(perm[s])].push_back(s);
      break;
    }
    case StructureType::CommonCause: {
      // Partition the lights among m <= n-1 owner switches; the pigeonhole
      // principle then forces some owner to control two or more lights.
      const auto m = 1 + uniform_index(rng, static_cast<std::size_t>(n) - 1);
      const std::vector<int> owners = shuffled_indices(n, rng);
      for (int l = 0; l < n; ++l) {
        const int owner = owners[uniform_index(rng, m)];
        parents[static_cast<std::size_t>(l)].push_back(owner);
      }
      break;
    }
    case StructureType::CommonEffect: {
      bool shared = false;
      while (!shared) {
        for (auto& p : parents) p.clear();
        for (int s = 0; s < n; ++s) {
          const auto child = uniform_index(rng, static_cast<std::size_t>(n));
          parents[child].push_back(s);
        }
        for (const auto& p : parents) shared = shared || p.size() >= 2;
      }
      break;
    }
  }

  for (int l = 0; l < n; ++l)
    for (int s : parents[static_cast<std::size_t>(l)])
      env.wiring_.emplace_back(s, n + 1 + l);
  std::sort(env.wiring_.begin(), env.wiring_.end());
  env.light_parents_ = std::move(parents);
  env.switches_.assign(static_cast<std::size_t>(n), 0);
  env.lights_.assign(static_cast<std::size_t>(n), 0);
  return env;
}

CausalGraph LightEnv::ground_truth() const {
  return CausalGraph(names_, wiring_);
}

std::vector<std::uint8_t> LightEnv::compute_lights() const {
  std::vector<std::uint8_t> lights(static_cast<std::size_t>(n_), 0);
  for (int l = 0; l < n_; ++l) {
    int acc = 0;
    for (int s : light_parents_[static_cast<std::size_t>(l)]) {
      if (semantics_ == LightSemantics::Or)
        acc = acc | switches_[static_cast<std::size_t>(s)];
      else
        acc = acc ^ switches_[static_cast<std::size_t>(s)];
    }
    lights[static_cast<std::size_t>(l)] = static_cast<std::uint8_t>(acc);
  }
  return lights;
}

LightEnv::StepResult LightEnv::step(const Action& action) {
  if (action.variable < 0 || action.variable > n_)
    throw InvalidSwitch("action must target a switch or the no-op");
  if (action.value > 1) throw InvalidSwitch("switch position must be 0 or 1");

  if (action.variable < n_)
    switches_[static_cast<std::size_t>(action.variable)] = action.value;
  std::vector<std::uint8_t> next = compute_lights();
  bool turned_on = false;
  for (int l = 0; l < n_; ++l)
    turned_on = turned_on || (lights_[static_cast<std::size_t>(l)] == 0 &&
                              next[static_cast<std::size_t>(l)] == 1);
  lights_ = std::move(next);

  std::vector<std::uint8_t> values;
  values.reserve(static_cast<std::size_t>(var_count()));
  values.insert(values.end(), switches_.begin(), switches_.end());
  // The no-op variable reflects the action taken, never persists.
  values.push_back(action.variable == n_ ? action.value : std::uint8_t{0});
  values.insert(values.end(), lights_.begin(), lights_.end());
  Observation obs(std::move(values), {action.variable}, {action.value});
  return {std::move(obs), turned_on};
}

void LightEnv::reset() {
  std::fill(switches_.begin(), switches_.end(), std::uint8_t{0});
  std::fill(lights_.begin(), lights_.end(), std::uint8_t{0});
}

}  // namespace cbl
