#include "ddrhc/experiment.hpp"

#include "ddrhc/verification.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace ddrhc {

namespace {

double z_rel_mean(const std::vector<Vec>& z, const Topology& topo, int k) {
  double acc = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    const int kappa = static_cast<int>(topo.in_neighbors(static_cast<int>(i), k).size()) - 1;
    acc += z[i].head(2 * kappa).norm();
  }
  return acc / static_cast<double>(z.size());
}

std::string seed_path(const std::string& dir, const std::string& stem, uint64_t seed) {
  return dir + "/" + stem + "_seed" + std::to_string(seed) + ".csv";
}

}  // namespace

ConstellationRunSummary run_constellation_experiment(const ExperimentConfig& cfg, uint64_t seed,
                                                     bool write_outputs) {
  cfg.validate();
  if (cfg.scenario != Scenario::kConstellation)
    throw ValidationError("constellation experiment needs the constellation scenario");
  const leo::ConstellationConfig& ccfg = *cfg.constellation;

  if (cfg.dt_max_s > 0.0 && cfg.dt_min_s > 0.0) {
    const TvAdmissibility adm =
        check_tv_constraints(cfg.schedule.Tc, cfg.schedule.Tt, cfg.dt_max_s, cfg.dt_min_s);
    const std::string violated = adm.violated(cfg.schedule.H, cfg.schedule.d);
    if (!violated.empty()) throw SchedulingError("inadmissible schedule: " + violated);
  }

  const leo::Anchor anchor{0.0, 0.0, 0.0};
  const Network net = leo::build_network(ccfg, anchor, cfg.schedule.Tc);
  const double period = leo::orbital_period(ccfg.a_bar);
  const int steps = static_cast<int>(std::ceil(cfg.periods * period / cfg.schedule.Tc));

  leo::ConstellationPlant plant(ccfg, anchor, cfg.schedule.Tc, cfg.truth_mode,
                                leo::perturbed_fleet(ccfg, anchor, cfg.init_along_track_m,
                                                     cfg.init_sma_m, seed));

  ConstellationRunSummary sum;
  sum.steps = steps;

  std::optional<CsvWriter> metrics_csv;
  std::map<int, std::unique_ptr<CsvWriter>> detail_csv;
  if (write_outputs) {
    std::filesystem::create_directories(cfg.output_dir);
    metrics_csv.emplace(seed_path(cfg.output_dir, "metrics", seed),
                        std::vector<std::string>{"step", "t_s", "mae_a_m", "mae_e", "mae_i_rad",
                                                 "mae_u_rad", "mae_omega_rad", "z_norm",
                                                 "z_rel_mean", "min_mass_kg"});
    for (int sat : cfg.detail_satellites) {
      if (sat < 0 || sat >= ccfg.total) throw ValidationError("detail satellite out of range");
      detail_csv[sat] = std::make_unique<CsvWriter>(
          seed_path(cfg.output_dir, "sat" + std::to_string(sat), seed),
          std::vector<std::string>{"step", "t_s", "a_err_m", "e", "i_err_rad", "u_err_rad",
                                   "u_t_n", "u_n_n", "u_w_n", "mass_kg"});
    }
  }

  std::vector<double> spent(ccfg.total, 0.0);  // propellant mass bookkeeping
  const double Tc = cfg.schedule.Tc;

  ClosedLoopOptions opt;
  opt.synthesizer = SynthesizerKind::kDistributedTv;
  opt.schedule = cfg.schedule;
  opt.feasibility = leo::los_feasibility(ccfg, anchor);
  opt.trace_enabled = cfg.trace;
  opt.on_step = [&](int k, const std::vector<Vec>& u, const std::vector<Vec>& z) {
    const double t = k * Tc;
    const auto& fleet = plant.fleet();
    const leo::FleetMetrics m = leo::metrics(fleet, ccfg, t);
    const double zr = z_rel_mean(z, net.topology, k);
    double z2 = 0.0, min_mass = fleet[0].mass;
    for (const auto& zi : z) z2 += zi.squaredNorm();
    for (const auto& s : fleet) min_mass = std::min(min_mass, s.mass);
    if (k == 0) {
      sum.mae_a_initial = m.mae_a;
      sum.z_rel_initial = zr;
      sum.z_norm_initial = std::sqrt(z2);
    }
    sum.mae_a_final = m.mae_a;
    sum.z_rel_final = zr;
    sum.z_norm_final = std::sqrt(z2);
    sum.min_mass = min_mass;

    for (size_t i = 0; i < u.size(); ++i) {
      for (int axis = 0; axis < 3; ++axis)
        if (std::abs(u[i][axis]) > ccfg.max_thrust * (1.0 + 1e-12)) sum.clamp_violated = true;
      spent[i] += u[i].lpNorm<1>() * Tc / (ccfg.isp * leo::kConstants.g0);
    }

    if (metrics_csv)
      metrics_csv->row({static_cast<double>(k), t, m.mae_a, m.mae_e, m.mae_i, m.mae_u,
                        m.mae_Omega, std::sqrt(z2), zr, min_mass});
    for (auto& [sat, csv] : detail_csv) {
      const auto& x = fleet[sat].elements;
      const leo::MeanElements nom = leo::walker_nominal(ccfg, anchor, t, sat);
      const Vec3 ui = u.empty() ? Vec3::Zero() : Vec3(u[sat]);
      csv->row({static_cast<double>(k), t, x.a - ccfg.a_bar, std::hypot(x.ex, x.ey),
                x.i - ccfg.inclination, leo::wrap_angle(x.u - nom.u), ui[0], ui[1], ui[2],
                fleet[sat].mass});
    }
  };

  const ClosedLoopResult loop = run_closed_loop(net, plant, steps, opt);
  sum.windows = loop.windows;
  sum.window_stats = loop.window_stats;
  sum.peak_unit_bytes = loop.peak_unit_bytes;

  for (int i = 0; i < ccfg.total; ++i) {
    const double residual =
        std::abs((ccfg.initial_mass - plant.fleet()[i].mass) - spent[i]);
    sum.worst_mass_residual = std::max(sum.worst_mass_residual, residual);
  }

  if (write_outputs) {
    CsvWriter fleet_csv(seed_path(cfg.output_dir, "fleet", seed),
                        {"sat", "a_m", "u_rad", "ex", "ey", "i_rad", "omega_rad", "mass_kg"});
    for (int i = 0; i < ccfg.total; ++i) {
      const auto& x = plant.fleet()[i].elements;
      fleet_csv.row({static_cast<double>(i), x.a, x.u, x.ex, x.ey, x.i, x.Omega,
                     plant.fleet()[i].mass});
    }
  }
  if (write_outputs && cfg.trace) {
    CsvWriter trace(seed_path(cfg.output_dir, "trace", seed),
                    {"round", "from", "to", "kind", "bytes"});
    for (const auto& row : loop.trace)
      trace.row_mixed({std::to_string(row.round), std::to_string(row.from),
                       std::to_string(row.to), to_string(row.kind), std::to_string(row.bytes)});
  }
  return sum;
}

GenericRunSummary run_generic_experiment(const ExperimentConfig& cfg, uint64_t seed,
                                         bool write_outputs) {
  cfg.validate();
  const Topology topo = verify::chain_topology(5);
  const Network net = verify::random_network(topo, seed);
  std::vector<Vec> x0;
  for (int i = 0; i < net.agent_count(); ++i)
    x0.push_back(verify::seeded_matrix(seed, 0x100 + i, net.agents[i].state_dim, 1));
  LinearModelPlant plant(&net, x0);

  const int steps = std::max(cfg.schedule.H, 4 * cfg.schedule.d);
  std::optional<CsvWriter> csv;
  if (write_outputs) {
    std::filesystem::create_directories(cfg.output_dir);
    csv.emplace(seed_path(cfg.output_dir, "generic", seed), std::vector<std::string>{"step", "z_norm"});
  }

  ClosedLoopOptions opt;
  opt.synthesizer = SynthesizerKind::kDistributedTi;
  opt.schedule = cfg.schedule;
  opt.on_step = [&](int k, const std::vector<Vec>&, const std::vector<Vec>& z) {
    if (!csv) return;
    double z2 = 0.0;
    for (const auto& zi : z) z2 += zi.squaredNorm();
    csv->row({static_cast<double>(k), std::sqrt(z2)});
  };

  const ClosedLoopResult loop = run_closed_loop(net, plant, steps, opt);
  GenericRunSummary sum;
  sum.steps = steps;
  sum.z_norm_initial = loop.z_norm.front();
  sum.z_norm_final = loop.z_norm.back();
  sum.windows = loop.windows;
  return sum;
}

ComplexityProbe probe_window_complexity(const leo::ConstellationConfig& ccfg, double Tc, int H,
                                        int d, double snapshot_time) {
  ccfg.validate();
  const leo::Anchor anchor{0.0, 0.0, 0.0};
  const Topology snapshot =
      leo::coupling_topology(leo::nominal_positions(ccfg, anchor, snapshot_time), ccfg);
  Network net = leo::build_network(ccfg, anchor, Tc);
  net.topology = snapshot;
  // Rebind the output providers to the frozen topology.
  auto topo = std::make_shared<Topology>(snapshot);
  for (int i = 0; i < net.agent_count(); ++i) {
    auto& m = net.agents[i];
    m.Q = [ccfg, topo, i](int tau) {
      return leo::weight_q(ccfg, static_cast<int>(topo->in_neighbors(i, tau).size()));
    };
    m.H = [ccfg, topo, i](int j, int tau) {
      return leo::output_block(ccfg, topo->in_neighbors(i, tau), i, j);
    };
  }

  const WindowSpec w{0, H, d};
  RoundHarness h(net.agent_count(), window_link_predicate(net.topology, w), H + 2);
  h.set_trace_enabled(false);
  const DistributedResult res = synthesize_window_ti(net, w, h);

  ComplexityProbe probe;
  probe.fleet = ccfg.total;
  probe.max_unit_round_sent = h.stats().max_unit_round_sent;
  probe.max_unit_round_bytes = h.stats().max_unit_round_bytes;
  probe.max_unit_peak_bytes =
      *std::max_element(res.peak_stored_bytes.begin(), res.peak_stored_bytes.end());
  return probe;
}

std::vector<GeometryReportRow> coupling_vs_range(const leo::ConstellationConfig& ccfg,
                                                 const std::vector<double>& ranges,
                                                 double snapshot_time) {
  const leo::Anchor anchor{0.0, 0.0, 0.0};
  const auto positions = leo::nominal_positions(ccfg, anchor, snapshot_time);
  std::vector<GeometryReportRow> rows;
  for (double R : ranges) {
    leo::ConstellationConfig c = ccfg;
    c.tracking_range = R;
    const Topology topo = leo::coupling_topology(positions, c);
    GeometryReportRow row;
    row.range_m = R;
    row.min_coupled = ccfg.total;
    long long total = 0;
    for (int i = 0; i < ccfg.total; ++i) {
      const int coupled = static_cast<int>(topo.in_neighbors(i, 0).size()) - 1;
      row.min_coupled = std::min(row.min_coupled, coupled);
      row.max_coupled = std::max(row.max_coupled, coupled);
      total += coupled;
    }
    row.mean_coupled = static_cast<double>(total) / ccfg.total;
    rows.push_back(row);
  }
  return rows;
}

LosBacktrackResult los_backtrack_histogram(const leo::ConstellationConfig& ccfg, int samples,
                                           double horizon_s, double step_s, uint64_t seed) {
  ccfg.validate();
  const leo::Anchor anchor{0.0, 0.0, 0.0};
  LosBacktrackResult out;
  uint64_t state = verify::mix64(seed ^ 0x105ull);
  int guard = 0;
  while (static_cast<int>(out.durations_s.size()) < samples && guard < samples * 50) {
    ++guard;
    state = verify::mix64(state);
    const double t =
        horizon_s * (static_cast<double>(state >> 11) / 9007199254740992.0);
    const auto positions = leo::nominal_positions(ccfg, anchor, t);
    const Topology topo = leo::coupling_topology(positions, ccfg);
    // Pick a random coupled pair at t.
    std::vector<AgentPair> pairs;
    for (int i = 0; i < ccfg.total; ++i)
      for (int j : topo.in_neighbors(i, 0))
        if (j != i) pairs.emplace_back(j, i);
    if (pairs.empty()) continue;
    state = verify::mix64(state);
    const auto& [j, i] = pairs[state % pairs.size()];
    double back = 0.0;
    while (back < horizon_s) {
      const double tb = t - back - step_s;
      const Vec3 pi = leo::elements_to_position(leo::walker_nominal(ccfg, anchor, tb, i));
      const Vec3 pj = leo::elements_to_position(leo::walker_nominal(ccfg, anchor, tb, j));
      if (!leo::los_feasible(pi, pj, ccfg.a_bar)) break;
      back += step_s;
    }
    out.durations_s.push_back(back);
  }
  if (!out.durations_s.empty()) {
    out.dt_min = *std::min_element(out.durations_s.begin(), out.durations_s.end());
    out.dt_max = *std::max_element(out.durations_s.begin(), out.durations_s.end());
  }
  return out;
}

}  // namespace ddrhc
