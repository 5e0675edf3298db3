#pragma once

#include "ddrhc/gain_schedule.hpp"
#include "ddrhc/network.hpp"

namespace ddrhc {

/// Global cost-to-go sequence P(tau), tau in [k, k+H], dense and symmetric.
struct CostToGo {
  int window_start = 0;
  int horizon = 0;
  std::vector<Mat> P;  // P[tau - window_start]

  const Mat& at(int tau) const { return P.at(static_cast<size_t>(tau - window_start)); }
};

struct CentralizedResult {
  GainSchedule gains;
  CostToGo cost_to_go;
};

/// Centralized finite-window synthesis under the one-step relaxation: the
/// backward pass solves, for every column agent i, the stacked system over
/// its out-neighborhood using the full cost-to-go, then updates P with the
/// projected sparse gain. Exact reference for the distributed algorithm on
/// coverage topologies; tracks a time-varying topology step by step.
CentralizedResult synthesize_window(const Network& net, int k, int H, int used_prefix = 0);

/// Cost-to-go sequence for an arbitrary sparse gain schedule (the gains need
/// not be optimal). Used for the cost-identity cross-check.
CostToGo propagate_cost(const Network& net, const GainSchedule& gains);

/// Window cost J(k) accumulated by forward rollout under the given gains.
double evaluate_cost(const Network& net, const GainSchedule& gains, const Vec& x0);

struct Rollout {
  std::vector<Vec> x;  // steps+1 entries
  std::vector<Vec> u;  // steps entries
  std::vector<Vec> z;  // steps+1 entries
};

/// Rolls x(tau+1) = (A - B K) x(tau) forward for `steps` steps starting at the
/// schedule's window start; throws SchedulingError when a step has no gains.
Rollout closed_loop_rollout(const Network& net, const GainSchedule& gains, const Vec& x0, int steps);

}  // namespace ddrhc
