#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gphl/common.hpp"
#include "gphl/potential.hpp"
#include "gphl/version.hpp"

namespace gphl {

// The nine runnable experiments, in documentation order.
const std::vector<std::string>& experiment_names();

// Declarative pair-potential description from the config file. Only the keys
// applicable to the kind may appear; make() builds the radial profile.
struct PotentialSpec {
  std::string kind = "square_barrier";  // zero | square_barrier | gaussian
  double height = 2.0;                  // square_barrier
  double radius = 1.0;                  // square_barrier
  double amplitude = 1.0;               // gaussian
  double width = 0.8;                   // gaussian

  RadialPotential make() const;
};

// One experiment invocation. Every field has a default except the experiment
// name; parse_config rejects unknown keys and out-of-range values.
struct ExperimentConfig {
  unsigned schema_version = kSchemaVersion;
  std::string experiment;
  PotentialSpec potential;
  double beta = 0.5;
  std::vector<double> N_values{2.0, 3.0, 4.0, 5.0};
  int dimension = 1;
  int points_per_axis = 16;
  double box_length = 2.0 * kPi;
  double dt = 2.5e-3;
  int steps = 200;
  int snapshot_every = 50;
  int k_max = 2;      // highest marginal order / boardgame k
  int q_max = 6;      // boardgame collapse count
  double epsilon = 0.1;
  int ensemble_size = 12;
  unsigned seed = 1732050808u;
  std::string output_dir = "out";
  int workers = 1;
  std::uint64_t memory_budget_bytes = kDefaultMemoryBudgetBytes;

  // Compact sorted-key JSON with every field explicit.
  std::string canonical_json() const;
  // The same dump restricted to the fields that determine the numbers:
  // output_dir, workers and the memory budget are plumbing, not physics.
  std::string physical_json() const;
  // FNV-1a over physical_json(); stamped into every emitted table.
  std::uint64_t config_hash() const;
};

// Strict parse of a JSON config document. Unknown keys at the top level or
// inside "potential" are rejected; "experiment" is required; all parameters
// are range-checked, including per-experiment constraints (integer particle
// counts at most 8 for the simulation experiments, probe grids in {8, 16}).
ExperimentConfig parse_config(const std::string& json_text);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace gphl
