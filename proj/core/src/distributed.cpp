#include "ddrhc/distributed.hpp"

#include <algorithm>
#include <set>
#include <thread>

namespace ddrhc {

RoundHarness::LinkPredicate window_link_predicate(const Topology& t, const WindowSpec& w) {
  const int N = t.agent_count();
  auto allowed = std::make_shared<std::vector<uint8_t>>(static_cast<size_t>(N) * N, 0);
  for (int tau = w.k; tau <= w.k + w.H; ++tau) {
    for (int i = 0; i < N; ++i) {
      for (int j : t.in_neighbors(i, tau)) {
        (*allowed)[static_cast<size_t>(i) * N + j] = 1;
        (*allowed)[static_cast<size_t>(j) * N + i] = 1;  // undirected at the protocol level
      }
    }
  }
  return [allowed, N](int from, int to, int) {
    return (*allowed)[static_cast<size_t>(from) * N + to] != 0;
  };
}

namespace {

void compute_all(std::vector<SynthesisUnit>& units, int r, bool parallel) {
  if (!parallel || units.size() < 2) {
    for (auto& u : units) u.compute(r);
    return;
  }
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(units.size()));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (unsigned wi = 0; wi < workers; ++wi) {
    pool.emplace_back([&, wi] {
      try {
        for (size_t u = wi; u < units.size(); u += workers) units[u].compute(r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

DistributedResult run_window_synthesis(const Network& net, const WindowSpec& w,
                                       const SetsProvider& sets, RoundHarness& h,
                                       const DriverOptions& opt) {
  const int N = net.agent_count();
  if (h.unit_count() != N) throw ValidationError("harness sized for a different unit count");
  if (w.H < 1 || w.d < 1 || w.d > w.H)
    throw ValidationError("window spec must satisfy 1 <= d <= H");

  std::vector<SynthesisUnit> units;
  units.reserve(N);
  for (int i = 0; i < N; ++i) units.emplace_back(i, &net.agents[i], &sets, w, opt.selection);

  for (int r = 0; r <= w.H + 1; ++r) {
    for (int u = 0; u < N; ++u)
      for (const auto& m : h.collect(u)) units[u].ingest(m);
    if (r >= 2) compute_all(units, r, opt.parallel);
    for (int u = 0; u < N; ++u)
      for (auto& m : units[u].round_messages(r)) h.post(std::move(m));
    for (auto& unit : units) unit.end_of_round(r);
    h.advance();
  }
  // Step 6: the gain-export messages become visible after the final instant.
  for (int u = 0; u < N; ++u)
    for (const auto& m : h.collect(u)) units[u].ingest(m);

  DistributedResult res;
  res.combined = GainSchedule(w.k, w.H, w.d);
  res.actuation.reserve(N);
  res.stores.reserve(N);
  res.peak_stored_bytes.reserve(N);
  for (auto& unit : units) {
    for (const auto& [tau, per_p] : unit.gains_out())
      for (const auto& [p, K] : per_p) res.combined.set(p, unit.id(), tau, K, unit.id());
    res.actuation.push_back(unit.actuation_gains());
    res.stores.push_back(unit.store());
    res.peak_stored_bytes.push_back(unit.peak_stored_bytes());
  }
  return res;
}

DistributedResult synthesize_window_ti(const Network& net, const WindowSpec& w, RoundHarness& h,
                                       const DriverOptions& opt) {
  TopologySets sets(&net.topology);
  return run_window_synthesis(net, w, sets, h, opt);
}

DistributedResult synthesize_window_tv(const Network& net, const WindowSpec& w,
                                       const FeasibilityFn& feasible, RoundHarness& h,
                                       const DriverOptions& opt) {
  RestrictedSets sets(&net.topology, feasible);
  // Over the first d steps the actuation topology cannot be restricted; d must
  // be small enough for feasibility to hold there.
  for (int tau = w.k; tau < w.k + w.d; ++tau) {
    for (int i = 0; i < net.agent_count(); ++i) {
      const auto full_in = net.topology.in_neighbors(i, tau);
      const auto restr_in = sets.in_set(i, tau);
      if (restr_in.size() != full_in.size())
        throw FeasibilityError("feasibility restricts D-_" + std::to_string(i) + "(" +
                               std::to_string(tau) + ") inside the first d steps");
      const auto full_out = net.topology.out_neighbors(i, tau);
      const auto restr_out = sets.out_set(i, tau);
      if (restr_out.size() != full_out.size())
        throw FeasibilityError("feasibility restricts D+_" + std::to_string(i) + "(" +
                               std::to_string(tau) + ") inside the first d steps");
    }
  }
  return run_window_synthesis(net, w, sets, h, opt);
}

}  // namespace ddrhc
