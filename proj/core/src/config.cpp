#include "ddrhc/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ddrhc {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (scenario == Scenario::kConstellation) {
    if (!constellation) throw ValidationError("constellation scenario needs a constellation block");
    constellation->validate();
  } else if (constellation) {
    throw ValidationError("constellation block is only valid for the constellation scenario");
  }
  if (schedule.H < 1 || schedule.d < 1 || schedule.d > schedule.H)
    throw ValidationError("schedule must satisfy 1 <= d <= H");
  if (seeds.empty()) throw ValidationError("at least one seed is required");
  if (periods <= 0.0) throw ValidationError("periods must be positive");
}

namespace {

leo::ConstellationConfig parse_constellation(const json& j) {
  leo::ConstellationConfig c;
  c.inclination = j.at("inclination_deg").get<double>() * M_PI / 180.0;
  c.total = j.at("satellites").get<int>();
  c.planes = j.at("planes").get<int>();
  c.phasing = j.at("phasing").get<int>();
  c.a_bar = j.at("semi_major_axis_km").get<double>() * 1.0e3;
  c.tracking_range = j.at("tracking_range_km").get<double>() * 1.0e3;
  c.max_in_neighborhood = j.value("max_in_neighborhood", 6);
  c.max_thrust = j.value("max_thrust_n", 0.068);
  c.isp = j.value("specific_impulse_s", 1640.0);
  c.initial_mass = j.value("initial_mass_kg", 260.0);
  return c;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  const json j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  ExperimentConfig cfg;

  const std::string scenario = j.at("scenario").get<std::string>();
  if (scenario == "generic-network")
    cfg.scenario = Scenario::kGenericNetwork;
  else if (scenario == "constellation")
    cfg.scenario = Scenario::kConstellation;
  else
    throw ValidationError("unknown scenario '" + scenario + "'");

  const json& s = j.at("schedule");
  cfg.schedule.Tc = s.at("Tc").get<double>();
  cfg.schedule.Tt = s.at("Tt").get<double>();
  cfg.schedule.H = s.at("H").get<int>();
  cfg.schedule.d = s.at("d").get<int>();

  if (j.contains("constellation")) cfg.constellation = parse_constellation(j.at("constellation"));
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<uint64_t>>();
  cfg.output_dir = j.value("output_dir", std::string("out"));
  const std::string truth = j.value("truth_mode", std::string("nonlinear-mean-element"));
  if (truth == "linear-model")
    cfg.truth_mode = leo::TruthMode::kLinearModel;
  else if (truth == "nonlinear-mean-element")
    cfg.truth_mode = leo::TruthMode::kNonlinearMeanElement;
  else
    throw ValidationError("unknown truth_mode '" + truth + "'");
  cfg.periods = j.value("periods", 12.0);
  cfg.init_along_track_m = j.value("init_along_track_m", 2000.0);
  cfg.init_sma_m = j.value("init_sma_m", 500.0);
  cfg.dt_max_s = j.value("dt_max_s", 0.0);
  cfg.dt_min_s = j.value("dt_min_s", 0.0);
  if (j.contains("detail_satellites"))
    cfg.detail_satellites = j.at("detail_satellites").get<std::vector<int>>();
  cfg.trace = j.value("trace", false);

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace ddrhc
