#pragma once

#include "ddrhc/harness.hpp"
#include "ddrhc/unit.hpp"

namespace ddrhc {

struct DriverOptions {
  bool parallel = false;  // run the per-round unit computations on worker threads
  BlockSelectionRule selection = BlockSelectionRule::kMinLossAverage;
};

struct DistributedResult {
  /// Every K_{p,i}(tau) over the whole window, provenance = computing unit i.
  GainSchedule combined;
  /// Per unit i: the actuation blocks K_{i,p}(tau), tau in [k, k+d).
  std::vector<GainSchedule> actuation;
  /// Final block stores (time k+1), for cross-checks.
  std::vector<CostBlockStore> stores;
  std::vector<size_t> peak_stored_bytes;
};

using FeasibilityFn = RestrictedSets::FeasibilityFn;

/// Undirected window-union link predicate: (a, b) allowed when b couples with
/// a at some step of the window [k, k+H].
RoundHarness::LinkPredicate window_link_predicate(const Topology& t, const WindowSpec& w);

/// Algorithm for a time-invariant coupling topology: H+2 transmission rounds
/// through the harness, one backward gain step per compute round.
DistributedResult synthesize_window_ti(const Network& net, const WindowSpec& w, RoundHarness& h,
                                       const DriverOptions& opt = {});

/// Time-varying extension: neighborhoods restricted to the feasibility sets
/// C_i(tau). Requires unrestricted neighborhoods over the first d steps and
/// throws FeasibilityError otherwise.
DistributedResult synthesize_window_tv(const Network& net, const WindowSpec& w,
                                       const FeasibilityFn& feasible, RoundHarness& h,
                                       const DriverOptions& opt = {});

/// Shared driver used by both entry points.
DistributedResult run_window_synthesis(const Network& net, const WindowSpec& w,
                                       const SetsProvider& sets, RoundHarness& h,
                                       const DriverOptions& opt);

}  // namespace ddrhc
