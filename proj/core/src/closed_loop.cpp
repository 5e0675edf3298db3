#include "ddrhc/closed_loop.hpp"

namespace ddrhc {

void LinearModelPlant::apply(const std::vector<Vec>& u, int k) {
  std::vector<Vec> next(x_.size());
  for (int i = 0; i < agent_count(); ++i) {
    const AgentModel& m = net_->agents[i];
    next[i] = m.A(k) * x_[i] + m.B(k) * u[i];
  }
  x_ = std::move(next);
}

namespace {

std::vector<GainSchedule> synthesize_for_window(const Network& net, const WindowSpec& w,
                                                const ClosedLoopOptions& opt,
                                                ClosedLoopResult* res) {
  RoundHarness harness(net.agent_count(), window_link_predicate(net.topology, w), w.H + 2);
  harness.set_trace_enabled(opt.trace_enabled);

  std::vector<GainSchedule> actuation;
  if (opt.synthesizer == SynthesizerKind::kCentralized) {
    const CentralizedResult c = synthesize_window(net, w.k, w.H, w.d);
    actuation.assign(net.agent_count(), GainSchedule(w.k, w.H, w.d));
    for (int i = 0; i < net.agent_count(); ++i)
      for (int tau = w.k; tau < w.k + w.d; ++tau)
        for (int j : net.topology.in_neighbors(i, tau))
          if (const Mat* K = c.gains.find(i, j, tau)) actuation[i].set(i, j, tau, *K);
  } else if (opt.synthesizer == SynthesizerKind::kDistributedTi) {
    actuation = synthesize_window_ti(net, w, harness, opt.driver).actuation;
  } else {
    if (!opt.feasibility)
      throw ValidationError("time-varying synthesis needs a feasibility predicate");
    const int N = net.agent_count();
    const ScheduleConfig& cfg = opt.schedule;
    auto feasible = [&opt, N, cfg, &w](int i, int tau) {
      return feasibility_set(opt.feasibility, N, i, tau, w.k, cfg);
    };
    auto result = synthesize_window_tv(net, w, feasible, harness, opt.driver);
    actuation = std::move(result.actuation);
    for (size_t b : result.peak_stored_bytes)
      res->peak_unit_bytes = std::max(res->peak_unit_bytes, b);
  }

  const HarnessStats& s = harness.stats();
  res->window_stats.messages += s.messages;
  res->window_stats.total_bytes += s.total_bytes;
  res->window_stats.rounds += s.rounds;
  res->window_stats.max_unit_round_sent =
      std::max(res->window_stats.max_unit_round_sent, s.max_unit_round_sent);
  res->window_stats.max_unit_round_bytes =
      std::max(res->window_stats.max_unit_round_bytes, s.max_unit_round_bytes);
  if (opt.trace_enabled) {
    const int round_offset = (w.k / (w.d > 0 ? w.d : 1)) * (w.H + 2);
    for (TraceRow row : harness.trace()) {
      row.round += round_offset;
      res->trace.push_back(row);
    }
  }
  ++res->windows;
  return actuation;
}

}  // namespace

ClosedLoopResult run_closed_loop(const Network& net, TruthPlant& plant, int steps,
                                 const ClosedLoopOptions& opt) {
  const int N = net.agent_count();
  if (plant.agent_count() != N) throw ValidationError("plant and network sizes differ");
  const SchedulePlan plan = plan_schedule(opt.schedule);
  if (plan.overlapping && opt.reject_overlap)
    throw SchedulingError("window computations overlap: d*Tc < (H+2)*Tt");

  ClosedLoopResult res;
  std::vector<GainSchedule> gains;  // per unit, current window

  for (int k = 0; k <= steps; ++k) {
    // Tracking outputs at k (also emitted for the final state).
    std::vector<Vec> x(N), z(N);
    for (int i = 0; i < N; ++i) x[i] = plant.model_state(i, k);
    for (int i = 0; i < N; ++i) {
      const auto& din = net.topology.in_neighbors(i, k);
      Vec zi;
      for (int j : din) {
        const Mat Hij = net.agents[i].H(j, k);
        if (zi.size() == 0) zi = Vec::Zero(Hij.rows());
        zi += Hij * x[j];
      }
      z[i] = zi;
    }
    double nz = 0.0;
    for (const auto& zi : z) nz += zi.squaredNorm();
    res.z_norm.push_back(std::sqrt(nz));

    if (k == steps) {
      if (opt.on_step) opt.on_step(k, {}, z);
      break;
    }

    if (k % opt.schedule.d == 0) {
      WindowSpec w{k, opt.schedule.H, opt.schedule.d};
      gains = synthesize_for_window(net, w, opt, &res);
    }

    std::vector<Vec> u(N);
    for (int i = 0; i < N; ++i) {
      Vec raw = Vec::Zero(net.agents[i].input_dim);
      for (int j : net.topology.in_neighbors(i, k)) {
        const Mat* K = gains[i].find(i, j, k);
        if (!K)
          throw SchedulingError("gain K_{" + std::to_string(i) + "," + std::to_string(j) +
                                "}(" + std::to_string(k) + ") unavailable at actuation time");
        raw -= (*K) * x[j];
        if (j != i) {
          ++res.state_messages;
          if (opt.trace_enabled)
            res.trace.push_back({-(k + 1), j, i, MsgKind::kState,
                                 kMessageHeaderBytes + kItemHeaderBytes +
                                     kBytesPerEntry * static_cast<size_t>(x[j].size())});
        }
      }
      u[i] = plant.shape_input(i, raw, k);
    }
    if (opt.on_step) opt.on_step(k, u, z);
    plant.apply(u, k);
  }
  return res;
}

}  // namespace ddrhc
