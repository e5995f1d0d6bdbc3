#include "gphl/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>

#include <json.hpp>

#include "gphl/boardgame.hpp"
#include "gphl/checkpoint.hpp"
#include "gphl/dyadic.hpp"
#include "gphl/hierarchy.hpp"
#include "gphl/marginal.hpp"
#include "gphl/nls.hpp"
#include "gphl/parallel.hpp"
#include "gphl/probes.hpp"
#include "gphl/scattering.hpp"
#include "gphl/version.hpp"
#include "gphl/wavefunction.hpp"

namespace gphl {

namespace {

namespace fs = std::filesystem;

std::uint64_t clamped(long double bytes) {
  if (!(bytes >= 0.0L)) return 0;
  if (bytes > 4.0e18L) return 4000000000000000000ull;
  return static_cast<std::uint64_t>(bytes);
}

// 16-byte complex entries of an N-particle state on grid^(d N).
long double state_entries(const ExperimentConfig& cfg, double particles) {
  return std::pow(static_cast<long double>(cfg.points_per_axis), cfg.dimension * particles);
}

long double kernel_entries(const ExperimentConfig& cfg, int k) {
  return std::pow(static_cast<long double>(cfg.points_per_axis), 2.0 * cfg.dimension * k);
}

// Normalized deterministic initial datum: the d=1 packet, or a smooth
// low-mode superposition in d=3.
std::vector<cplx> initial_field(const LatticeGrid& grid) {
  if (grid.dimension() == 1)
    return gaussian_packet_field(grid, 0.45 * grid.box_length(), 0.2 * grid.box_length(), 1);
  std::vector<cplx> base = plane_wave_field(grid, {0, 0, 0});
  std::vector<cplx> mx = plane_wave_field(grid, {1, 0, 0});
  std::vector<cplx> my = plane_wave_field(grid, {0, 1, 0});
  std::vector<cplx> phi(base.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    phi[i] = base[i] + 0.5 * mx[i] + cplx(0.0, 0.25) * my[i];
  double mass = 0.0;
  for (const cplx& v : phi) mass += std::norm(v);
  mass *= grid.cell_volume();
  double scale = 1.0 / std::sqrt(mass);
  for (cplx& v : phi) v *= scale;
  return phi;
}

std::string n_label(double N) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", N);
  return buf;
}

// ---------------------------------------------------------------------------
// Runners. Each fills one ResultTable; side artifacts (checkpoints, marginal
// exports) are written directly and recorded in `files`.

ResultTable run_scattering_scan(const ExperimentConfig& cfg, const std::string&, std::uint64_t,
                                std::vector<std::string>&) {
  RadialPotential V = cfg.potential.make();
  ResultTable t;
  t.columns = {"N", "beta", "value", "residual"};
  for (double N : cfg.N_values) {
    ScatteringSolution sol = solve_zero_energy(V, N, cfg.beta);
    add_row(t, {fmt_double(N), fmt_double(cfg.beta), fmt_double(sol.a0),
                fmt_double(sol.residual)});
  }
  return t;
}

ResultTable run_born_limit(const ExperimentConfig& cfg, const std::string&, std::uint64_t,
                           std::vector<std::string>&) {
  RadialPotential V = cfg.potential.make();
  ResultTable t;
  t.columns = {"N", "beta", "value", "residual"};
  for (const BornScanRow& row : born_limit_scan(V, cfg.beta, cfg.N_values))
    add_row(t, {fmt_double(row.N), fmt_double(row.beta), fmt_double(row.value),
                fmt_double(row.residual)});
  return t;
}

ResultTable run_chaos(const ExperimentConfig& cfg, const std::string& outdir, std::uint64_t hash,
                      std::vector<std::string>& files) {
  RadialPotential V = cfg.potential.make();
  LatticeGrid grid(cfg.dimension, cfg.points_per_axis, cfg.box_length);
  std::vector<cplx> phi0 = initial_field(grid);
  double c0 = V.integral(cfg.dimension);

  ResultTable t;
  t.columns = {"N", "t", "hs_distance"};
  const int blocks = cfg.steps / cfg.snapshot_every;
  for (double Nd : cfg.N_values) {
    int N = static_cast<int>(Nd);
    ScaledPotential sp(V, Nd, cfg.beta, cfg.dimension);
    WaveFunction psi = init_product_state(grid, phi0, N);
    NLSField ref = make_nls_field(grid, phi0, c0);
    add_row(t, {fmt_double(Nd), fmt_double(0.0),
                fmt_double(chaos_distance(marginal(psi, 1), ref.phi))});
    for (int b = 1; b <= blocks; ++b) {
      psi = propagate(psi, sp, cfg.dt, cfg.snapshot_every);
      ref = nls_propagate(ref, cfg.dt, cfg.snapshot_every);
      double tcur = cfg.dt * cfg.snapshot_every * b;
      add_row(t, {fmt_double(Nd), fmt_double(tcur),
                  fmt_double(chaos_distance(marginal(psi, 1), ref.phi))});
    }
    std::string state_name = "state_N" + n_label(Nd) + ".gphl";
    save_checkpoint(outdir + "/" + state_name, psi);
    files.push_back(state_name);
    std::string marg_name = "marginal_N" + n_label(Nd) + ".csv";
    export_marginal_csv(outdir + "/" + marg_name, marginal(psi, 1),
                        "config_hash=" + hash_hex(hash));
    files.push_back(marg_name);
  }
  return t;
}

ResultTable run_bbgky(const ExperimentConfig& cfg, const std::string&, std::uint64_t,
                      std::vector<std::string>&) {
  RadialPotential V = cfg.potential.make();
  LatticeGrid grid(cfg.dimension, cfg.points_per_axis, cfg.box_length);
  std::vector<cplx> phi0 = initial_field(grid);

  ResultTable t;
  t.columns = {"N", "k", "dt", "residual"};
  for (double Nd : cfg.N_values) {
    int N = static_cast<int>(Nd);
    if (N < 2) continue;  // the hierarchy needs a (k+1)-st particle
    ScaledPotential sp(V, Nd, cfg.beta, cfg.dimension);
    WaveFunction center = propagate(init_product_state(grid, phi0, N), sp, cfg.dt, 10);
    for (int k = 1; k <= std::min(cfg.k_max, N - 1); ++k) {
      for (double h : {cfg.dt, 0.5 * cfg.dt}) {
        std::vector<WaveFunction> triple = {propagate(center, sp, -h, 1), center,
                                            propagate(center, sp, h, 1)};
        add_row(t, {fmt_double(Nd), fmt_double(k), fmt_double(h),
                    fmt_double(bbgky_residual(triple, k, sp))});
      }
    }
  }
  return t;
}

ResultTable run_identity_check(const ExperimentConfig& cfg, const std::string&, std::uint64_t,
                               std::vector<std::string>&) {
  RadialPotential V = cfg.potential.make();
  double N0 = cfg.N_values.front();
  ScaledPotential sp(V, N0, cfg.beta, 3);
  double margin = V.kind() == PotentialKind::SquareBarrier ? 0.005 : 0.0;

  ResultTable t;
  t.columns = {"name", "k", "residual"};
  PairProfile generic = generic_profile();
  for (int k : {2, 3}) {
    std::mt19937 rng(cfg.seed + static_cast<unsigned>(k));
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    std::vector<Config3> cfgs(40, Config3(static_cast<std::size_t>(k)));
    for (auto& c : cfgs)
      for (auto& x : c) x = Eigen::Vector3d(coord(rng), coord(rng), coord(rng));
    add_row(t, {"leibniz", fmt_double(k),
                fmt_double(leibniz_identity_residual(generic, k, cfgs))});
  }
  if (!V.is_zero()) {
    for (int k : {2, 3}) {
      std::vector<Config3> cfgs =
          sample_identity_configs(sp, k, 60, cfg.seed + 100u + static_cast<unsigned>(k), margin);
      add_row(t, {"wave_operator", fmt_double(k),
                  fmt_double(wave_operator_identity_residual(sp, k, cfgs))});
    }
  }
  for (int k : {1, 2})
    add_row(t, {"collapse_split", fmt_double(k),
                fmt_double(collapse_split_residual(sp, k, 3, 5, cfg.seed + 200u))});
  return t;
}

ResultTable run_boardgame(const ExperimentConfig& cfg, const std::string&, std::uint64_t,
                          std::vector<std::string>&) {
  ResultTable t;
  t.columns = {"k", "q", "admissible_count", "class_count", "bound_4q"};
  for (int q = 0; q <= cfg.q_max; ++q) {
    std::size_t admissible = enumerate_maps(cfg.k_max, q).size();
    std::size_t classes = class_count(cfg.k_max, q);
    std::uint64_t bound = 1ull << (2 * q);
    add_row(t, {fmt_double(cfg.k_max), fmt_double(q), std::to_string(admissible),
                std::to_string(classes), std::to_string(bound)});
  }
  return t;
}

ResultTable run_dyadic(const ExperimentConfig& cfg, const std::string&, std::uint64_t,
                       std::vector<std::string>&) {
  std::vector<int> exps{10, 12, 14, 16, 18, 20, 22, 24};
  ResultTable t;
  t.columns = {"form", "beta", "epsilon", "fitted_exponent", "reference_exponent"};
  double kip = dyadic_fit_exponent(cfg.beta, cfg.epsilon, 0.0, exps, 1.0);
  add_row(t, {"kinetic", fmt_double(cfg.beta), fmt_double(cfg.epsilon), fmt_double(kip),
              fmt_double(2.0 * cfg.epsilon)});
  double pp = dyadic_fit_exponent(cfg.beta, cfg.epsilon, 2.0, exps, 1.0);
  add_row(t, {"two_derivative", fmt_double(cfg.beta), fmt_double(cfg.epsilon), fmt_double(pp),
              fmt_double(2.0 * cfg.beta + 2.0 * cfg.epsilon)});
  return t;
}

ResultTable run_probes(const ExperimentConfig& cfg, const std::string&, std::uint64_t,
                       std::vector<std::string>&) {
  std::vector<int> resolutions{cfg.points_per_axis};
  if (cfg.points_per_axis == 8) resolutions.push_back(16);
  std::vector<std::pair<std::string, int>> tasks;
  for (const std::string& name : probe_names())
    for (int n : resolutions) tasks.emplace_back(name, n);

  std::vector<ProbeReport> reports(tasks.size());
  parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
    reports[i] =
        probe_inequality(tasks[i].first, cfg.ensemble_size, tasks[i].second, cfg.seed);
  });

  ResultTable t;
  t.columns = {"name", "resolution", "seed", "max_ratio", "median_ratio"};
  for (const ProbeReport& r : reports)
    add_row(t, {r.name, fmt_double(r.points_per_axis), std::to_string(r.seed),
                fmt_double(r.max_ratio), fmt_double(r.median_ratio)});
  return t;
}

ResultTable run_nls_norms(const ExperimentConfig& cfg, const std::string&, std::uint64_t,
                          std::vector<std::string>&) {
  RadialPotential V = cfg.potential.make();
  LatticeGrid grid(cfg.dimension, cfg.points_per_axis, cfg.box_length);
  NLSField f = make_nls_field(grid, initial_field(grid), V.integral(cfg.dimension));
  NLSTrajectory traj = nls_trajectory(f, cfg.dt, cfg.steps, cfg.snapshot_every);

  ResultTable t;
  t.columns = {"t", "mass", "energy", "esy", "km_partial"};
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    NLSTrajectory prefix;
    prefix.snapshots.assign(traj.snapshots.begin(),
                            traj.snapshots.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    double km = i == 0 ? 0.0 : km_functional(prefix);
    add_row(t, {fmt_double(traj.snapshots[i].time), fmt_double(nls_mass(traj.snapshots[i])),
                fmt_double(nls_energy(traj.snapshots[i])), fmt_double(esy_functional(prefix)),
                fmt_double(km)});
  }
  return t;
}

using Runner = ResultTable (*)(const ExperimentConfig&, const std::string&, std::uint64_t,
                               std::vector<std::string>&);

Runner runner_for(const std::string& name) {
  if (name == "scattering-scan") return run_scattering_scan;
  if (name == "born-limit") return run_born_limit;
  if (name == "chaos") return run_chaos;
  if (name == "bbgky-residual") return run_bbgky;
  if (name == "identity-check") return run_identity_check;
  if (name == "boardgame") return run_boardgame;
  if (name == "dyadic") return run_dyadic;
  if (name == "probes") return run_probes;
  if (name == "nls-norms") return run_nls_norms;
  throw DomainError("unknown experiment \"" + name + "\"");
}

std::string csv_name(const std::string& experiment) {
  std::string out = experiment;
  std::replace(out.begin(), out.end(), '-', '_');
  return out + ".csv";
}

}  // namespace

std::uint64_t predicted_peak_bytes(const ExperimentConfig& cfg) {
  const std::string& e = cfg.experiment;
  if (e == "chaos") {
    double n_max = cfg.N_values.back();
    return clamped(16.0L * (4.0L * state_entries(cfg, n_max) + 4.0L * kernel_entries(cfg, 1)));
  }
  if (e == "bbgky-residual") {
    double n_max = cfg.N_values.back();
    int k = std::min<int>(cfg.k_max, static_cast<int>(n_max) - 1);
    if (k < 1) k = 1;
    return clamped(16.0L *
                   (5.0L * state_entries(cfg, n_max) + 8.0L * kernel_entries(cfg, k)));
  }
  if (e == "nls-norms") {
    long double snaps = cfg.steps / cfg.snapshot_every + 1.0L;
    return clamped(16.0L * (2.0L * snaps + 2.0L) * state_entries(cfg, 1));
  }
  if (e == "probes") {
    // Dominated by the streamed three-body spectrum plus a few position fields.
    long double spectrum = 2.0L * 125.0L * 343.0L * 125.0L;
    long double fields = 8.0L * state_entries(cfg, 1);
    return clamped(16.0L * (spectrum + fields));
  }
  // Scans, identity checks, combinatorics: flat working sets.
  return 32ull << 20;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  std::uint64_t budget = memory_budget_bytes(cfg.memory_budget_bytes);
  require_within_budget(predicted_peak_bytes(cfg), budget, cfg.experiment + " experiment");

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw DomainError("cannot create output directory " + cfg.output_dir);

  std::uint64_t hash = cfg.config_hash();
  RunResult result;
  ResultTable table = runner_for(cfg.experiment)(cfg, cfg.output_dir, hash, result.files);

  std::string table_name = csv_name(cfg.experiment);
  write_text_file(cfg.output_dir + "/" + table_name, table_csv(table, hash));
  result.files.insert(result.files.begin(), table_name);

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["experiment"] = cfg.experiment;
  meta["config_hash"] = hash_hex(hash);
  meta["code_version"] = kVersion;
  meta["workers"] = cfg.workers;
  meta["seed"] = cfg.seed;
  meta["wall_seconds"] = result.wall_seconds;
  meta["files"] = result.files;
  meta["config"] = nlohmann::json::parse(cfg.canonical_json());
  write_text_file(cfg.output_dir + "/metadata.json", meta.dump(2) + "\n");
  result.files.push_back("metadata.json");
  return result;
}

ValidationReport validate_config_text(const std::string& json_text) {
  ValidationReport report;
  ExperimentConfig cfg;
  try {
    cfg = parse_config(json_text);
  } catch (const DomainError& e) {
    report.reason = e.what();
    return report;
  }
  report.parsed = true;
  report.config_hash = cfg.config_hash();
  report.predicted_bytes = predicted_peak_bytes(cfg);
  report.budget_bytes = memory_budget_bytes(cfg.memory_budget_bytes);
  if (report.predicted_bytes <= report.budget_bytes) {
    report.ok = true;
  } else {
    report.reason = "predicted peak " + std::to_string(report.predicted_bytes) +
                    " bytes exceeds budget " + std::to_string(report.budget_bytes) + " bytes";
  }
  return report;
}

}  // namespace gphl
