#pragma once

#include "ddrhc/leo.hpp"
#include "ddrhc/schedule.hpp"

#include <optional>
#include <string>

namespace ddrhc {

enum class Scenario { kGenericNetwork, kConstellation };

struct ExperimentConfig {
  Scenario scenario = Scenario::kGenericNetwork;
  ScheduleConfig schedule;
  std::optional<leo::ConstellationConfig> constellation;
  std::vector<uint64_t> seeds = {1};
  std::string output_dir = "out";
  leo::TruthMode truth_mode = leo::TruthMode::kNonlinearMeanElement;

  // Simulation extent and initial-condition magnitudes (constellation runs).
  double periods = 12.0;
  double init_along_track_m = 2000.0;
  double init_sma_m = 500.0;
  // Time-varying admissibility inputs (measured LOS-window bounds).
  double dt_max_s = 0.0;  // 0 = skip the admissibility gate
  double dt_min_s = 0.0;
  // Satellites whose per-step trajectories are exported.
  std::vector<int> detail_satellites = {0};
  bool trace = false;

  void validate() const;
};

/// Parses the JSON experiment config (comments allowed). Field names are
/// documented in configs/constellation.json.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

}  // namespace ddrhc
