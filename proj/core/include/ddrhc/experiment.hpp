#pragma once

#include "ddrhc/config.hpp"
#include "ddrhc/csv.hpp"

#include <optional>

namespace ddrhc {

struct ConstellationRunSummary {
  int steps = 0;
  double mae_a_initial = 0.0, mae_a_final = 0.0;
  double z_rel_initial = 0.0, z_rel_final = 0.0;  // fleet-mean ||z_rel||
  double z_norm_initial = 0.0, z_norm_final = 0.0;
  bool clamp_violated = false;
  double worst_mass_residual = 0.0;  // |(m0 - m_final) - sum ||u||_1 Tc/(Isp g0)|
  double min_mass = 0.0;
  int windows = 0;
  HarnessStats window_stats;
  size_t peak_unit_bytes = 0;
};

/// One seeded constellation closed-loop run; writes the CSV artifacts when an
/// output directory is set in the config. Refuses inadmissible (H, d) with
/// the violated inequality when dt bounds are configured.
ConstellationRunSummary run_constellation_experiment(const ExperimentConfig& cfg, uint64_t seed,
                                                     bool write_outputs);

struct GenericRunSummary {
  int steps = 0;
  double z_norm_initial = 0.0, z_norm_final = 0.0;
  int windows = 0;
};

GenericRunSummary run_generic_experiment(const ExperimentConfig& cfg, uint64_t seed,
                                         bool write_outputs);

struct ComplexityProbe {
  int fleet = 0;
  int max_unit_round_sent = 0;
  size_t max_unit_round_bytes = 0;
  size_t max_unit_peak_bytes = 0;
};

/// One time-invariant window synthesis on the epoch snapshot topology;
/// reports the per-unit communication and storage maxima for the O(1)
/// complexity measurements.
ComplexityProbe probe_window_complexity(const leo::ConstellationConfig& ccfg, double Tc, int H,
                                        int d, double snapshot_time = 0.0);

struct GeometryReportRow {
  double range_m = 0.0;
  int min_coupled = 0;  // |D-_i| - 1 extrema over the fleet
  int max_coupled = 0;
  double mean_coupled = 0.0;
};

std::vector<GeometryReportRow> coupling_vs_range(const leo::ConstellationConfig& ccfg,
                                                 const std::vector<double>& ranges,
                                                 double snapshot_time = 0.0);

struct LosBacktrackResult {
  std::vector<double> durations_s;  // time in LOS before each sampled coupling
  double dt_min = 0.0, dt_max = 0.0;
};

/// The backtracking procedure: sample coupled pairs at random instants and
/// walk their nominal positions backwards until line-of-sight is lost.
LosBacktrackResult los_backtrack_histogram(const leo::ConstellationConfig& ccfg, int samples,
                                           double horizon_s, double step_s, uint64_t seed);

}  // namespace ddrhc
