#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cbl/errors.hpp"
#include "cbl/harness.hpp"

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cbl::IoError("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw cbl::ParseError(std::string("invalid JSON in ") + path + ": " +
                          e.what());
  }
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : csv) {
    if (c == ',') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

// Interpret a sweep value as a JSON scalar where possible, else as a string.
nlohmann::json parse_value(const std::string& raw) {
  const nlohmann::json parsed =
      nlohmann::json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_discarded() && parsed.is_primitive() && !parsed.is_null())
    return parsed;
  return nlohmann::json(raw);
}

void execute(const nlohmann::json& config_json) {
  const cbl::ExperimentConfig cfg = cbl::config_from_json(config_json);
  const cbl::TraceRecord trace = cbl::run_experiment(cfg);
  cbl::emit_outputs(trace, cfg, cfg.output_dir);
  std::cout << "outputs written to " << cfg.output_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interventional causal-structure learning experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;

  auto* run_cmd = app.add_subcommand("run", "Execute one experiment");
  run_cmd->add_option("--config", config_path, "JSON config file")->required();
  auto* run_seed =
      run_cmd->add_option("--seed", seed_override, "Master seed override");
  run_cmd->add_option("--out", out_override, "Output directory override");

  std::string param_key;
  std::string values_csv;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Repeat an experiment over a value grid");
  sweep_cmd->add_option("--config", config_path, "JSON config file")
      ->required();
  sweep_cmd->add_option("--param", param_key, "Top-level config key to vary")
      ->required();
  sweep_cmd
      ->add_option("--values", values_csv, "Comma-separated values, one run each")
      ->required();
  auto* sweep_seed =
      sweep_cmd->add_option("--seed", seed_override, "Master seed override");
  sweep_cmd->add_option("--out", out_override,
                        "Base output directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    nlohmann::json base = read_json_file(config_path);
    if (!base.is_object())
      throw cbl::ValidationError("config", "top level must be a JSON object");

    if (run_cmd->parsed()) {
      if (run_seed->count() > 0) base["seed"] = seed_override;
      if (!out_override.empty()) base["output_dir"] = out_override;
      execute(base);
      return 0;
    }

    if (sweep_seed->count() > 0) base["seed"] = seed_override;
    if (!out_override.empty()) base["output_dir"] = out_override;
    const std::string base_out = base.value("output_dir", std::string("out"));
    for (const std::string& raw : split_csv(values_csv)) {
      if (raw.empty())
        throw cbl::ValidationError("values", "empty value in the list");
      nlohmann::json arm = base;
      arm[param_key] = parse_value(raw);
      arm["output_dir"] = base_out + "/" + param_key + "=" + raw;
      execute(arm);
    }
    return 0;
  } catch (const cbl::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cbl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cbl::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
