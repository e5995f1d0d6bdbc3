#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gphl/config.hpp"
#include "gphl/table.hpp"

namespace gphl {

// Peak working-set estimate for the configured experiment, counting the
// dominant allocations (states, kernels, probe spectra) with headroom for
// their transient copies. Used by the pre-flight budget check.
std::uint64_t predicted_peak_bytes(const ExperimentConfig& cfg);

struct RunResult {
  std::vector<std::string> files;  // names written under cfg.output_dir
  double wall_seconds = 0.0;
};

// Executes the named experiment: pre-flight budget check, the computation,
// then the CSV tables, any checkpoints, and metadata.json under
// cfg.output_dir. Throws DomainError / MemoryBudgetError / NumericalError.
RunResult run_experiment(const ExperimentConfig& cfg);

struct ValidationReport {
  bool parsed = false;  // schema and ranges accepted
  bool ok = false;      // parsed and within the memory budget
  std::string reason;   // empty when ok; the diagnostic otherwise
  std::uint64_t config_hash = 0;
  std::uint64_t predicted_bytes = 0;
  std::uint64_t budget_bytes = 0;
};

// Schema plus memory pre-flight without execution. Parse failures come back
// as diagnostics in `reason`, not as exceptions.
ValidationReport validate_config_text(const std::string& json_text);

}  // namespace gphl
