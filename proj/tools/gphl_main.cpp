#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gphl/config.hpp"
#include "gphl/experiments.hpp"
#include "gphl/table.hpp"
#include "gphl/version.hpp"

using namespace gphl;

namespace {

struct Overrides {
  std::string out_dir;
  int workers = 0;       // 0: keep the config value
  long long seed = -1;   // negative: keep the config value
};

ExperimentConfig apply_overrides(ExperimentConfig cfg, const Overrides& o) {
  if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
  if (o.workers > 0) cfg.workers = o.workers;
  if (o.seed >= 0) cfg.seed = static_cast<unsigned>(o.seed);
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const nlohmann::json& j) { std::printf("%s\n", j.dump(2).c_str()); }

int error_exit(const std::exception& e, const char* type, int code) {
  nlohmann::json j;
  j["error"] = {{"type", type}, {"message", e.what()}, {"exit_code", code}};
  emit(j);
  return code;
}

int do_run(const std::string& path, const Overrides& o) {
  ExperimentConfig cfg = apply_overrides(parse_config(slurp(path)), o);
  RunResult result = run_experiment(cfg);
  nlohmann::json j;
  j["status"] = "ok";
  j["experiment"] = cfg.experiment;
  j["config_hash"] = hash_hex(cfg.config_hash());
  j["output_dir"] = cfg.output_dir;
  j["files"] = result.files;
  j["wall_seconds"] = result.wall_seconds;
  emit(j);
  return 0;
}

int do_validate(const std::string& path, const Overrides& o) {
  std::string text = slurp(path);
  ValidationReport rep = validate_config_text(text);
  nlohmann::json j;
  if (!rep.parsed) {
    j["status"] = "invalid";
    j["reason"] = rep.reason;
    j["valid_names"] = experiment_names();
    emit(j);
    return 0;
  }
  ExperimentConfig cfg = apply_overrides(parse_config(text), o);
  j["status"] = rep.ok ? "ok" : "refused";
  if (!rep.ok) j["reason"] = rep.reason;
  j["config_hash"] = hash_hex(cfg.config_hash());
  j["experiment"] = cfg.experiment;
  j["predicted_bytes"] = rep.predicted_bytes;
  j["budget_bytes"] = rep.budget_bytes;
  j["output_dir"] = cfg.output_dir;
  j["workers"] = cfg.workers;
  emit(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic experiment runner for the correlation-dressed hierarchy library"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON experiment config")->required();
    sub->add_option("--out-dir", o.out_dir, "Override the configured output directory");
    sub->add_option("--workers", o.workers, "Override the configured worker count")
        ->check(CLI::Range(1, 64));
    sub->add_option("--seed-override", o.seed, "Override the configured RNG seed")
        ->check(CLI::Range(0ll, 4294967295ll));
  };
  CLI::App* run = app.add_subcommand("run", "Execute the configured experiment");
  CLI::App* validate = app.add_subcommand("validate", "Schema and resource pre-flight only");
  add_common(run);
  add_common(validate);

  CLI11_PARSE(app, argc, argv);

  try {
    return run->parsed() ? do_run(config_path, o) : do_validate(config_path, o);
  } catch (const MemoryBudgetError& e) {
    return error_exit(e, "memory", 3);
  } catch (const DomainError& e) {
    return error_exit(e, "domain", 2);
  } catch (const NumericalError& e) {
    return error_exit(e, "numerical", 4);
  } catch (const std::bad_alloc& e) {
    return error_exit(e, "memory", 3);
  } catch (const std::exception& e) {
    return error_exit(e, "internal", 1);
  }
}
