#include "cbl/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "cbl/policies.hpp"
#include "cbl/rng.hpp"

namespace cbl {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(Scenario s) {
  return s == Scenario::Disease ? "disease" : "lights";
}

const char* to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::Random: return "random";
    case PolicyKind::EpsExp: return "eps-exp";
    case PolicyKind::EpsLin: return "eps-lin";
    case PolicyKind::QLearnExp: return "qlearn-exp";
    case PolicyKind::QLearnLin: return "qlearn-lin";
  }
  return "random";
}

const char* to_string(BeliefInit b) {
  return b == BeliefInit::Half ? "half" : "uniform-random";
}

const char* to_string(StructureType t) {
  switch (t) {
    case StructureType::OneToOne: return "one-to-one";
    case StructureType::CommonCause: return "common-cause";
    case StructureType::CommonEffect: return "common-effect";
  }
  return "one-to-one";
}

const char* to_string(LightSemantics s) {
  return s == LightSemantics::Or ? "or" : "xor";
}

Scenario parse_scenario(const std::string& s) {
  if (s == "disease") return Scenario::Disease;
  if (s == "lights") return Scenario::Lights;
  throw ValidationError("scenario", "must be \"disease\" or \"lights\"");
}

PolicyKind parse_policy(const std::string& s) {
  if (s == "random") return PolicyKind::Random;
  if (s == "eps-exp") return PolicyKind::EpsExp;
  if (s == "eps-lin") return PolicyKind::EpsLin;
  if (s == "qlearn-exp") return PolicyKind::QLearnExp;
  if (s == "qlearn-lin") return PolicyKind::QLearnLin;
  throw ValidationError("policy",
                        "must be one of random, eps-exp, eps-lin, qlearn-exp, "
                        "qlearn-lin");
}

BeliefInit parse_belief_init(const std::string& s) {
  if (s == "half") return BeliefInit::Half;
  if (s == "uniform-random") return BeliefInit::UniformRandom;
  throw ValidationError("belief_init", "must be \"half\" or \"uniform-random\"");
}

StructureType parse_structure(const std::string& s) {
  if (s == "one-to-one") return StructureType::OneToOne;
  if (s == "common-cause") return StructureType::CommonCause;
  if (s == "common-effect") return StructureType::CommonEffect;
  throw ValidationError(
      "structure_type",
      "must be one of one-to-one, common-cause, common-effect");
}

LightSemantics parse_semantics(const std::string& s) {
  if (s == "or") return LightSemantics::Or;
  if (s == "xor") return LightSemantics::Xor;
  throw ValidationError("light_semantics", "must be \"or\" or \"xor\"");
}

std::string read_string(const json& j, const std::string& key,
                        const std::string& def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_string())
    throw ValidationError(key, "must be a string");
  return j.at(key).get<std::string>();
}

int read_int(const json& j, const std::string& key, int def, int min_value) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number_integer())
    throw ValidationError(key, "must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min_value)
    throw ValidationError(key,
                          "must be >= " + std::to_string(min_value));
  if (x > 1000000) throw ValidationError(key, "unreasonably large");
  return static_cast<int>(x);
}

double read_real(const json& j, const std::string& key, double def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ValidationError(key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(key, "must be finite");
  return x;
}

std::uint64_t read_seed(const json& j, const std::string& key,
                        std::uint64_t def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ValidationError(key, "must be a non-negative integer");
}

DiseaseModel parse_disease_block(const json& d) {
  if (!d.is_object())
    throw ValidationError("disease", "must be an object");
  for (const auto& item : d.items()) {
    const std::string& key = item.key();
    if (key != "note" && key != "edges" && key != "params")
      throw ValidationError("disease." + key, "unknown key");
  }
  if (!d.contains("edges") || !d.contains("params"))
    throw ValidationError("disease",
                          "needs both \"edges\" and \"params\"");

  const std::vector<std::string> names = DiseaseEnv::variable_names();
  const auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    throw ValidationError("disease", "unknown variable \"" + name + "\"");
  };

  const auto& edges_json = d.at("edges");
  if (!edges_json.is_array())
    throw ValidationError("disease.edges", "must be an array of name pairs");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : edges_json) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
        !e[1].is_string())
      throw ValidationError("disease.edges",
                            "each edge must be [cause, effect] names");
    edges.emplace_back(index_of(e[0].get<std::string>()),
                       index_of(e[1].get<std::string>()));
  }
  CausalGraph truth(names, std::move(edges));

  const auto& params_json = d.at("params");
  if (!params_json.is_object())
    throw ValidationError("disease.params",
                          "must map variable names to row lists");
  for (const auto& item : params_json.items()) index_of(item.key());

  std::vector<ParamTable::Cpt> tables;
  tables.reserve(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::vector<int>& parents = truth.parents(static_cast<int>(k));
    const std::size_t rows = std::size_t{1} << parents.size();
    if (!params_json.contains(names[k]))
      throw ValidationError("disease.params", "missing rows for " + names[k]);
    const auto& row_list = params_json.at(names[k]);
    if (!row_list.is_array())
      throw ValidationError("disease.params." + names[k],
                            "must be an array of rows");
    std::vector<double> p_one(rows, -1.0);
    for (const auto& row : row_list) {
      if (!row.is_object() || !row.contains("when") || !row.contains("p1"))
        throw ValidationError("disease.params." + names[k],
                              "each row needs \"when\" and \"p1\"");
      for (const auto& item : row.items())
        if (item.key() != "when" && item.key() != "p1")
          throw ValidationError("disease.params." + names[k],
                                "unknown row key \"" + item.key() + "\"");
      const auto& when = row.at("when");
      if (!when.is_object())
        throw ValidationError("disease.params." + names[k],
                              "\"when\" must map parent names to 0/1");
      std::size_t idx = 0;
      std::size_t matched = 0;
      for (std::size_t b = 0; b < parents.size(); ++b) {
        const std::string& pname =
            names[static_cast<std::size_t>(parents[b])];
        if (!when.contains(pname))
          throw ValidationError("disease.params." + names[k],
                                "row is missing parent \"" + pname + "\"");
        const auto& bit = when.at(pname);
        if (!bit.is_number_integer() || bit.get<int>() < 0 ||
            bit.get<int>() > 1)
          throw ValidationError("disease.params." + names[k],
                                "parent values must be 0 or 1");
        idx |= static_cast<std::size_t>(bit.get<int>()) << b;
        ++matched;
      }
      if (when.size() != matched)
        throw ValidationError("disease.params." + names[k],
                              "\"when\" mentions a non-parent variable");
      if (!row.at("p1").is_number())
        throw ValidationError("disease.params." + names[k],
                              "\"p1\" must be a number");
      const double p = row.at("p1").get<double>();
      if (!(p >= 0.0) || !(p <= 1.0))
        throw ValidationError("disease.params." + names[k],
                              "\"p1\" must lie in [0, 1]");
      if (p_one[idx] >= 0.0)
        throw ValidationError("disease.params." + names[k],
                              "duplicate row for one parent assignment");
      p_one[idx] = p;
    }
    for (double p : p_one)
      if (p < 0.0)
        throw ValidationError("disease.params." + names[k],
                              "rows do not cover every parent assignment");
    tables.push_back({parents, std::move(p_one)});
  }
  ParamTable table(std::move(tables));

  DiseaseModel model{truth, table, read_string(d, "note", "")};
  try {
    DiseaseEnv check(model.truth, model.params);  // enforce env invariants
  } catch (const Error& e) {
    throw ValidationError("disease", e.what());
  }
  return model;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object())
    throw ValidationError("config", "top level must be a JSON object");
  if (!j.contains("scenario"))
    throw ValidationError("scenario", "required");

  ExperimentConfig cfg;
  cfg.scenario = parse_scenario(read_string(j, "scenario", ""));

  static const std::set<std::string> common = {
      "scenario", "rounds",      "runs", "policy",     "theta",
      "alpha",    "belief_init", "seed", "output_dir", "q_alpha"};
  static const std::set<std::string> lights_only = {
      "structure_type", "n_lights", "light_semantics"};
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (common.count(key)) continue;
    if (cfg.scenario == Scenario::Lights && lights_only.count(key)) continue;
    if (cfg.scenario == Scenario::Disease && key == "disease") continue;
    if (lights_only.count(key) || key == "disease")
      throw ValidationError(
          key, std::string("not applicable to the ") +
                   to_string(cfg.scenario) + " scenario");
    throw ValidationError(key, "unknown key");
  }

  cfg.rounds = read_int(j, "rounds", 50, 1);
  cfg.runs = read_int(j, "runs", 10, 1);
  cfg.policy = parse_policy(read_string(j, "policy", "random"));
  cfg.theta = read_real(j, "theta", 0.75);
  if (!(cfg.theta > 0.0) || !(cfg.theta < 1.0))
    throw ValidationError("theta", "must lie strictly between 0 and 1");
  cfg.alpha = read_real(j, "alpha", 1.0);
  if (!(cfg.alpha > 0.0))
    throw ValidationError("alpha", "smoothing weight must be positive");
  cfg.belief_init = parse_belief_init(read_string(j, "belief_init", "half"));
  cfg.seed = read_seed(j, "seed", 0);
  cfg.output_dir = read_string(j, "output_dir", "out");
  if (cfg.output_dir.empty())
    throw ValidationError("output_dir", "must not be empty");
  cfg.q_alpha = read_real(j, "q_alpha", 0.1);
  if (!(cfg.q_alpha > 0.0) || cfg.q_alpha > 1.0)
    throw ValidationError("q_alpha", "must lie in (0, 1]");

  if (cfg.scenario == Scenario::Lights) {
    if (!j.contains("n_lights"))
      throw ValidationError("n_lights", "required for the lights scenario");
    if (!j.contains("structure_type"))
      throw ValidationError("structure_type",
                            "required for the lights scenario");
    cfg.n_lights = read_int(j, "n_lights", 0, 1);
    cfg.structure_type = parse_structure(read_string(j, "structure_type", ""));
    cfg.light_semantics =
        parse_semantics(read_string(j, "light_semantics", "or"));
    if (cfg.structure_type != StructureType::OneToOne && cfg.n_lights < 2)
      throw ValidationError(
          "n_lights", "shared-cause and shared-effect wirings need >= 2");
    if (cfg.policy != PolicyKind::Random)
      throw ValidationError("policy",
                            "the lights scenario supports only random actions");
  } else if (j.contains("disease")) {
    cfg.disease = parse_disease_block(j.at("disease"));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return config_from_json(j);
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["scenario"] = to_string(cfg.scenario);
  if (cfg.scenario == Scenario::Lights) {
    j["structure_type"] = to_string(cfg.structure_type);
    j["n_lights"] = cfg.n_lights;
    j["light_semantics"] = to_string(cfg.light_semantics);
  }
  j["rounds"] = cfg.rounds;
  j["runs"] = cfg.runs;
  j["policy"] = to_string(cfg.policy);
  j["theta"] = cfg.theta;
  j["alpha"] = cfg.alpha;
  j["belief_init"] = to_string(cfg.belief_init);
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["q_alpha"] = cfg.q_alpha;
  if (cfg.disease) {
    ordered_json d;
    if (!cfg.disease->note.empty()) d["note"] = cfg.disease->note;
    const auto& names = cfg.disease->truth.names();
    ordered_json edges = ordered_json::array();
    for (const auto& [cause, effect] : cfg.disease->truth.edges())
      edges.push_back({names[static_cast<std::size_t>(cause)],
                       names[static_cast<std::size_t>(effect)]});
    d["edges"] = std::move(edges);
    ordered_json params;
    for (int k = 0; k < cfg.disease->truth.num_vars(); ++k) {
      const auto& cpt = cfg.disease->params.cpt(k);
      ordered_json rows = ordered_json::array();
      for (std::size_t r = 0; r < cpt.p_one.size(); ++r) {
        ordered_json when = ordered_json::object();
        for (std::size_t b = 0; b < cpt.parents.size(); ++b)
          when[names[static_cast<std::size_t>(cpt.parents[b])]] =
              static_cast<int>((r >> b) & 1u);
        rows.push_back({{"when", std::move(when)}, {"p1", cpt.p_one[r]}});
      }
      params[names[static_cast<std::size_t>(k)]] = std::move(rows);
    }
    d["params"] = std::move(params);
    j["disease"] = std::move(d);
  }
  return j;
}

CandidateEdgeSet candidates_for(const ExperimentConfig& cfg) {
  if (cfg.scenario == Scenario::Disease)
    return candidate_edges(DiseaseEnv::variable_names(),
                           DiseaseEnv::causal_order(),
                           {DiseaseEnv::kTreatment});
  const int n = cfg.n_lights;
  std::vector<int> causes(static_cast<std::size_t>(n) + 1);
  std::vector<int> effects(static_cast<std::size_t>(n));
  for (int i = 0; i <= n; ++i) causes[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < n; ++i) effects[static_cast<std::size_t>(i)] = n + 1 + i;
  return candidate_edges(LightEnv::names_for(n), causes, effects,
                         RestrictionMode::CauseEffectBipartite);
}

namespace {

BeliefMatrix initial_beliefs(const ExperimentConfig& cfg,
                             const CandidateEdgeSet& candidates, Rng& rng) {
  if (cfg.belief_init == BeliefInit::Half)
    return BeliefMatrix(candidates, 0.5);
  return BeliefMatrix::uniform_random(candidates, rng);
}

void record_round(RunResult& result, const BeliefMatrix& beliefs,
                  double theta, int run_index, int round, double reward,
                  double eps) {
  const double l2 = l2_distance(beliefs, result.mask);
  const double ham = hamming_loss(threshold_beliefs(beliefs, theta),
                                  result.mask);
  result.metrics.push_back(
      {run_index, round, l2, ham, 1.0 - ham, reward, eps});
  result.belief_rounds.push_back(beliefs.values());
}

RunResult run_disease(const ExperimentConfig& cfg,
                      const CandidateEdgeSet& candidates, Rng& rng,
                      int run_index) {
  const DiseaseEnv env = cfg.disease
                             ? DiseaseEnv(cfg.disease->truth,
                                          cfg.disease->params)
                             : DiseaseEnv::defaults();
  BeliefMatrix beliefs = initial_beliefs(cfg, candidates, rng);
  ObservationBuffer buffer(BufferTag::All);
  const std::vector<Action> actions = {{DiseaseEnv::kTreatment, 0},
                                       {DiseaseEnv::kTreatment, 1}};
  const UtilityFn utility = indicator_utility(DiseaseEnv::kLives);

  EpsilonSchedule schedule;
  schedule.kind = (cfg.policy == PolicyKind::EpsLin ||
                   cfg.policy == PolicyKind::QLearnLin)
                      ? DecayKind::Linear
                      : DecayKind::Exponential;
  schedule.horizon = cfg.rounds;
  const bool qlearn = cfg.policy == PolicyKind::QLearnExp ||
                      cfg.policy == PolicyKind::QLearnLin;
  std::optional<QTable> qtable;
  if (qlearn) qtable.emplace(actions, cfg.q_alpha);

  RunResult result{run_index,
                   env.ground_truth(),
                   make_mask(candidates, env.ground_truth()),
                   {},
                   {},
                   0,
                   0};
  result.metrics.reserve(static_cast<std::size_t>(cfg.rounds));
  result.belief_rounds.reserve(static_cast<std::size_t>(cfg.rounds));

  for (int t = 0; t < cfg.rounds; ++t) {
    const CausalGraph sampled = sample_graph(beliefs, rng);
    double eps = 1.0;  // the random policy always explores
    Action act = actions[0];
    switch (cfg.policy) {
      case PolicyKind::Random:
        act = select_action(SelectMode::Random, 0.0, actions[0], actions, rng);
        break;
      case PolicyKind::EpsExp:
      case PolicyKind::EpsLin: {
        eps = epsilon_at(schedule, t);
        const ParamTable params = estimate_params(buffer, sampled, cfg.alpha);
        const Action greedy = optimal_action(sampled, params, utility, actions);
        act = select_action(SelectMode::EpsGreedy, eps, greedy, actions, rng);
        break;
      }
      case PolicyKind::QLearnExp:
      case PolicyKind::QLearnLin: {
        eps = epsilon_at(schedule, t);
        act = select_action(SelectMode::EpsGreedy, eps, qtable->best(),
                            actions, rng);
        break;
      }
    }
    auto stepped = env.step(act.value, rng);
    buffer.append(std::move(stepped.observation));
    const Observation& obs = buffer.records().back();
    const auto provider = [&](const CausalGraph& g) {
      return estimate_params(buffer, g, cfg.alpha);
    };
    beliefs = update_beliefs(beliefs, sampled, obs, provider);
    if (qtable) *qtable = q_update(std::move(*qtable), act, stepped.reward);
    record_round(result, beliefs, cfg.theta, run_index, t + 1, stepped.reward,
                 eps);
  }
  return result;
}

RunResult run_lights(const ExperimentConfig& cfg,
                     const CandidateEdgeSet& candidates, Rng& rng,
                     int run_index) {
  LightEnv env = LightEnv::generate(cfg.n_lights, cfg.structure_type,
                                    cfg.light_semantics, rng);
  BeliefMatrix beliefs = initial_beliefs(cfg, candidates, rng);
  ObservationBuffer on_buffer(BufferTag::On);
  ObservationBuffer off_buffer(BufferTag::Off);

  std::vector<Action> actions;
  actions.reserve(2 * (static_cast<std::size_t>(cfg.n_lights) + 1));
  for (int v = 0; v <= cfg.n_lights; ++v) {
    actions.push_back({v, 0});
    actions.push_back({v, 1});
  }

  RunResult result{run_index,
                   env.ground_truth(),
                   make_mask(candidates, env.ground_truth()),
                   {},
                   {},
                   0,
                   0};
  result.metrics.reserve(static_cast<std::size_t>(cfg.rounds));
  result.belief_rounds.reserve(static_cast<std::size_t>(cfg.rounds));

  for (int t = 0; t < cfg.rounds; ++t) {
    const CausalGraph sampled = sample_graph(beliefs, rng);
    const Action act =
        select_action(SelectMode::Random, 0.0, actions[0], actions, rng);
    auto stepped = env.step(act);
    ObservationBuffer& buffer = stepped.turned_on ? on_buffer : off_buffer;
    buffer.append(std::move(stepped.observation));
    const Observation& obs = buffer.records().back();
    const auto provider = [&](const CausalGraph& g) {
      return estimate_params(buffer, g, cfg.alpha);
    };
    beliefs = update_beliefs(beliefs, sampled, obs, provider);
    record_round(result, beliefs, cfg.theta, run_index, t + 1, 0.0, 1.0);
  }
  result.on_count = on_buffer.size();
  result.off_count = off_buffer.size();
  return result;
}

unsigned thread_cap(int runs) {
  unsigned cap = 0;
  if (const char* env = std::getenv("CBL_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end && *end == '\0') cap = static_cast<unsigned>(parsed);
  }
  if (cap == 0) cap = std::thread::hardware_concurrency();
  if (cap == 0) cap = 1;
  return std::min<unsigned>(cap, static_cast<unsigned>(runs));
}

}  // namespace

RunResult run_single(const ExperimentConfig& cfg,
                     const CandidateEdgeSet& candidates,
                     std::uint64_t run_seed, int run_index) {
  Rng rng(run_seed);
  if (cfg.scenario == Scenario::Lights)
    return run_lights(cfg, candidates, rng, run_index);
  return run_disease(cfg, candidates, rng, run_index);
}

TraceRecord run_experiment(const ExperimentConfig& cfg) {
  const CandidateEdgeSet candidates = candidates_for(cfg);
  const int runs = cfg.runs;
  std::vector<std::optional<RunResult>> slots(
      static_cast<std::size_t>(runs));

  const unsigned workers = thread_cap(runs);
  if (workers <= 1) {
    for (int i = 0; i < runs; ++i)
      slots[static_cast<std::size_t>(i)] =
          run_single(cfg, candidates, derive_seed(cfg.seed, i), i);
  } else {
    std::atomic<int> next{0};
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const auto work = [&] {
      while (!stop.load(std::memory_order_relaxed)) {
        const int i = next.fetch_add(1);
        if (i >= runs) break;
        try {
          slots[static_cast<std::size_t>(i)] =
              run_single(cfg, candidates, derive_seed(cfg.seed, i), i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          stop.store(true, std::memory_order_relaxed);
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  TraceRecord trace{candidates, {}};
  trace.runs.reserve(static_cast<std::size_t>(runs));
  for (auto& slot : slots) trace.runs.push_back(std::move(*slot));
  return trace;
}

std::string fmt_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

namespace {

void write_file(const std::filesystem::path& path,
                const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("failed while writing: " + path.string());
}

}  // namespace

void emit_outputs(const TraceRecord& trace, const ExperimentConfig& cfg,
                  const std::string& output_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir.string());

  const auto& names = trace.candidates.names();

  std::string metrics_csv = "run,round,l2,hamming,accuracy,reward,epsilon\n";
  for (const auto& run : trace.runs)
    for (const auto& row : run.metrics) {
      metrics_csv += std::to_string(row.run);
      metrics_csv += ',';
      metrics_csv += std::to_string(row.round);
      metrics_csv += ',';
      metrics_csv += fmt_double(row.l2);
      metrics_csv += ',';
      metrics_csv += fmt_double(row.hamming);
      metrics_csv += ',';
      metrics_csv += fmt_double(row.accuracy);
      metrics_csv += ',';
      metrics_csv += fmt_double(row.reward);
      metrics_csv += ',';
      metrics_csv += fmt_double(row.epsilon);
      metrics_csv += '\n';
    }
  write_file(dir / "metrics.csv", metrics_csv);

  std::string beliefs_csv = "run,round,cause,effect,p\n";
  for (const auto& run : trace.runs)
    for (std::size_t r = 0; r < run.belief_rounds.size(); ++r)
      for (std::size_t k = 0; k < trace.candidates.size(); ++k) {
        const auto& [cause, effect] = trace.candidates.pairs()[k];
        beliefs_csv += std::to_string(run.run_index);
        beliefs_csv += ',';
        beliefs_csv += std::to_string(r + 1);
        beliefs_csv += ',';
        beliefs_csv += names[static_cast<std::size_t>(cause)];
        beliefs_csv += ',';
        beliefs_csv += names[static_cast<std::size_t>(effect)];
        beliefs_csv += ',';
        beliefs_csv += fmt_double(run.belief_rounds[r][k]);
        beliefs_csv += '\n';
      }
  write_file(dir / "beliefs.csv", beliefs_csv);

  ordered_json truth_json;
  truth_json["variables"] = names;
  ordered_json cand_json = ordered_json::array();
  for (const auto& [cause, effect] : trace.candidates.pairs())
    cand_json.push_back({names[static_cast<std::size_t>(cause)],
                         names[static_cast<std::size_t>(effect)]});
  truth_json["candidates"] = std::move(cand_json);
  ordered_json runs_json = ordered_json::array();
  for (const auto& run : trace.runs) {
    ordered_json edges = ordered_json::array();
    for (const auto& [cause, effect] : run.truth.edges())
      edges.push_back({names[static_cast<std::size_t>(cause)],
                       names[static_cast<std::size_t>(effect)]});
    ordered_json rj;
    rj["run"] = run.run_index;
    rj["edges"] = std::move(edges);
    rj["mask"] = run.mask;
    runs_json.push_back(std::move(rj));
  }
  truth_json["runs"] = std::move(runs_json);
  write_file(dir / "ground_truth.json", truth_json.dump(2) + "\n");

  write_file(dir / "config_echo.json", config_to_json(cfg).dump(2) + "\n");

  const std::size_t rounds =
      trace.runs.empty() ? 0 : trace.runs.front().metrics.size();
  ordered_json summary;
  summary["runs"] = trace.runs.size();
  summary["rounds"] = rounds;
  const std::array<const char*, 5> keys = {"l2", "hamming", "accuracy",
                                           "reward", "epsilon"};
  const auto field = [](const MetricRow& row, std::size_t key) {
    switch (key) {
      case 0: return row.l2;
      case 1: return row.hamming;
      case 2: return row.accuracy;
      case 3: return row.reward;
      default: return row.epsilon;
    }
  };
  ordered_json per_round;
  for (std::size_t key = 0; key < keys.size(); ++key) {
    std::vector<double> mean(rounds, 0.0);
    std::vector<double> stddev(rounds, 0.0);
    const double count = static_cast<double>(trace.runs.size());
    for (std::size_t r = 0; r < rounds; ++r) {
      double sum = 0.0;
      for (const auto& run : trace.runs) sum += field(run.metrics[r], key);
      mean[r] = sum / count;
      double sq = 0.0;
      for (const auto& run : trace.runs) {
        const double d = field(run.metrics[r], key) - mean[r];
        sq += d * d;
      }
      stddev[r] = std::sqrt(sq / count);
    }
    per_round[keys[key]] = {{"mean", mean}, {"std", stddev}};
  }
  summary["per_round"] = std::move(per_round);
  write_file(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace cbl
