#include "gphl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gphl {

using nlohmann::json;

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "scattering-scan", "born-limit", "chaos",  "bbgky-residual", "identity-check",
      "boardgame",       "dyadic",     "probes", "nls-norms"};
  return names;
}

RadialPotential PotentialSpec::make() const {
  if (kind == "zero") return RadialPotential::square_barrier(0.0, 1.0);
  if (kind == "square_barrier") return RadialPotential::square_barrier(height, radius);
  if (kind == "gaussian") return RadialPotential::gaussian(amplitude, width);
  throw DomainError("unknown potential kind \"" + kind + "\"");
}

namespace {

std::string joined_names() {
  std::string out;
  for (const auto& n : experiment_names()) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

[[noreturn]] void fail(const std::string& msg) { throw DomainError("config: " + msg); }

double get_number(const json& j, const std::string& key, double lo, double hi, bool open_lo) {
  const json& v = j.at(key);
  if (!v.is_number()) fail("\"" + key + "\" must be a number");
  double x = v.get<double>();
  if (!std::isfinite(x) || (open_lo ? !(x > lo) : !(x >= lo)) || !(x <= hi)) {
    std::ostringstream os;
    os << "\"" << key << "\" = " << x << " outside " << (open_lo ? "(" : "[") << lo << ", " << hi
       << "]";
    fail(os.str());
  }
  return x;
}

long long get_integer(const json& j, const std::string& key, long long lo, long long hi) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail("\"" + key + "\" must be an integer");
  long long x = v.get<long long>();
  if (x < lo || x > hi)
    fail("\"" + key + "\" = " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
         std::to_string(hi) + "]");
  return x;
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) fail("\"" + key + "\" must be a string");
  return v.get<std::string>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail("unknown " + where + " key \"" + it.key() + "\"");
}

PotentialSpec parse_potential(const json& p) {
  if (!p.is_object()) fail("\"potential\" must be an object");
  PotentialSpec spec;
  if (p.contains("kind")) spec.kind = get_string(p, "kind");
  if (spec.kind == "zero") {
    reject_unknown(p, {"kind"}, "potential");
  } else if (spec.kind == "square_barrier") {
    reject_unknown(p, {"kind", "height", "radius"}, "potential");
    if (p.contains("height")) spec.height = get_number(p, "height", 0.0, 1e6, false);
    if (p.contains("radius")) spec.radius = get_number(p, "radius", 0.0, 1e3, true);
  } else if (spec.kind == "gaussian") {
    reject_unknown(p, {"kind", "amplitude", "width"}, "potential");
    if (p.contains("amplitude")) spec.amplitude = get_number(p, "amplitude", 0.0, 1e6, false);
    if (p.contains("width")) spec.width = get_number(p, "width", 0.0, 1e3, true);
  } else {
    fail("unknown potential kind \"" + spec.kind + "\"; valid kinds: zero, square_barrier, "
         "gaussian");
  }
  return spec;
}

json potential_json(const PotentialSpec& spec) {
  json p;
  p["kind"] = spec.kind;
  if (spec.kind == "square_barrier") {
    p["height"] = spec.height;
    p["radius"] = spec.radius;
  } else if (spec.kind == "gaussian") {
    p["amplitude"] = spec.amplitude;
    p["width"] = spec.width;
  }
  return p;
}

json physical_fields(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["experiment"] = c.experiment;
  j["potential"] = potential_json(c.potential);
  j["beta"] = c.beta;
  j["N_values"] = c.N_values;
  j["dimension"] = c.dimension;
  j["points_per_axis"] = c.points_per_axis;
  j["box_length"] = c.box_length;
  j["dt"] = c.dt;
  j["steps"] = c.steps;
  j["snapshot_every"] = c.snapshot_every;
  j["k_max"] = c.k_max;
  j["q_max"] = c.q_max;
  j["epsilon"] = c.epsilon;
  j["ensemble_size"] = c.ensemble_size;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

std::string ExperimentConfig::physical_json() const { return physical_fields(*this).dump(); }

std::string ExperimentConfig::canonical_json() const {
  json j = physical_fields(*this);
  j["output_dir"] = output_dir;
  j["workers"] = workers;
  j["memory_budget_bytes"] = memory_budget_bytes;
  return j.dump();
}

std::uint64_t ExperimentConfig::config_hash() const { return fnv1a64(physical_json()); }

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("document must be a JSON object");

  static const std::set<std::string> top_keys = {
      "schema_version", "experiment",  "potential",     "beta",
      "N_values",       "dimension",   "points_per_axis", "box_length",
      "dt",             "steps",       "snapshot_every", "k_max",
      "q_max",          "epsilon",     "ensemble_size",  "seed",
      "output_dir",     "workers",     "memory_budget_bytes"};
  reject_unknown(j, top_keys, "config");

  ExperimentConfig c;
  if (j.contains("schema_version")) {
    long long v = get_integer(j, "schema_version", 0, 1ll << 30);
    if (v != static_cast<long long>(kSchemaVersion))
      fail("schema_version " + std::to_string(v) + " unsupported; this build reads version " +
           std::to_string(kSchemaVersion));
  }
  if (!j.contains("experiment")) fail("missing required key \"experiment\"");
  c.experiment = get_string(j, "experiment");
  bool known = false;
  for (const auto& n : experiment_names()) known = known || n == c.experiment;
  if (!known)
    fail("unknown experiment \"" + c.experiment + "\"; valid names: " + joined_names());

  if (j.contains("potential")) c.potential = parse_potential(j.at("potential"));
  if (j.contains("beta")) c.beta = get_number(j, "beta", 0.0, 1.0, true);
  if (j.contains("N_values")) {
    const json& arr = j.at("N_values");
    if (!arr.is_array() || arr.empty()) fail("\"N_values\" must be a nonempty array");
    c.N_values.clear();
    for (const json& v : arr) {
      if (!v.is_number()) fail("\"N_values\" entries must be numbers");
      double x = v.get<double>();
      if (!(x >= 1.0) || !(x <= 1e9)) fail("\"N_values\" entries must lie in [1, 1e9]");
      if (!c.N_values.empty() && !(x > c.N_values.back()))
        fail("\"N_values\" must be strictly increasing");
      c.N_values.push_back(x);
    }
  }
  if (j.contains("dimension")) {
    c.dimension = static_cast<int>(get_integer(j, "dimension", 1, 3));
    if (c.dimension == 2) fail("\"dimension\" must be 1 or 3");
  }
  if (j.contains("points_per_axis")) {
    c.points_per_axis = static_cast<int>(get_integer(j, "points_per_axis", 8, 64));
    if (!is_power_of_two(static_cast<std::uint64_t>(c.points_per_axis)))
      fail("\"points_per_axis\" must be a power of two in [8, 64]");
  }
  if (j.contains("box_length")) c.box_length = get_number(j, "box_length", 0.0, 1e6, true);
  if (j.contains("dt")) c.dt = get_number(j, "dt", 0.0, 1.0, true);
  if (j.contains("steps")) c.steps = static_cast<int>(get_integer(j, "steps", 1, 10000000));
  if (j.contains("snapshot_every")) {
    c.snapshot_every = static_cast<int>(get_integer(j, "snapshot_every", 1, 10000000));
    if (c.snapshot_every > c.steps) fail("\"snapshot_every\" must not exceed \"steps\"");
  } else {
    c.snapshot_every = std::min(c.snapshot_every, c.steps);
    if (c.steps % c.snapshot_every != 0) c.snapshot_every = c.steps;
  }
  if (j.contains("k_max")) c.k_max = static_cast<int>(get_integer(j, "k_max", 1, 3));
  if (j.contains("q_max")) c.q_max = static_cast<int>(get_integer(j, "q_max", 0, 8));
  if (j.contains("epsilon")) c.epsilon = get_number(j, "epsilon", 0.0, 1.0, true);
  if (c.epsilon >= 1.0) fail("\"epsilon\" must lie in (0, 1)");
  if (j.contains("ensemble_size"))
    c.ensemble_size = static_cast<int>(get_integer(j, "ensemble_size", 1, 10000));
  if (j.contains("seed")) c.seed = static_cast<unsigned>(get_integer(j, "seed", 0, 4294967295ll));
  if (j.contains("output_dir")) {
    c.output_dir = get_string(j, "output_dir");
    if (c.output_dir.empty()) fail("\"output_dir\" must be nonempty");
  }
  if (j.contains("workers")) c.workers = static_cast<int>(get_integer(j, "workers", 1, 64));
  if (j.contains("memory_budget_bytes")) {
    long long b = get_integer(j, "memory_budget_bytes", 1, 1ll << 46);
    c.memory_budget_bytes = static_cast<std::uint64_t>(b);
  }

  // Per-experiment constraints beyond the generic ranges.
  if (c.experiment == "chaos" || c.experiment == "bbgky-residual") {
    for (double N : c.N_values) {
      if (std::floor(N) != N || N > 8.0)
        fail("\"" + c.experiment + "\" needs integer particle counts at most 8");
    }
  }
  if (c.experiment == "probes" && c.points_per_axis != 8 && c.points_per_axis != 16)
    fail("\"probes\" supports points_per_axis 8 or 16");
  if ((c.experiment == "chaos" || c.experiment == "nls-norms") &&
      c.steps % c.snapshot_every != 0)
    fail("\"snapshot_every\" must divide \"steps\" for trajectory experiments");

  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gphl
