#pragma once

#include "ddrhc/block_ops.hpp"
#include "ddrhc/gain_schedule.hpp"
#include "ddrhc/messages.hpp"
#include "ddrhc/network.hpp"

#include <map>
#include <optional>

namespace ddrhc {

struct WindowSpec {
  int k = 0;  // window start
  int H = 1;  // window length
  int d = 1;  // gains exported for actuation
};

/// Per-step (possibly restricted) neighborhoods D~±_i(tau) used by the
/// synthesis units. The plain topology provider serves the time-invariant
/// algorithm; the restricted provider intersects with feasibility sets.
class SetsProvider {
 public:
  virtual ~SetsProvider() = default;
  virtual std::vector<int> in_set(int i, int tau) const = 0;
  virtual std::vector<int> out_set(int i, int tau) const = 0;

  PairSet phi(int i, int tau) const;
  PairSet psi(int i, int tau) const;
};

class TopologySets final : public SetsProvider {
 public:
  explicit TopologySets(const Topology* t) : t_(t) {}
  std::vector<int> in_set(int i, int tau) const override { return t_->in_neighbors(i, tau); }
  std::vector<int> out_set(int i, int tau) const override { return t_->out_neighbors(i, tau); }

 private:
  const Topology* t_;
};

/// D~±_i(tau) = D±_i(tau) ∩ C_i(tau). The feasibility callback returns the
/// sorted set of units i can exchange data with at the wall-clock instant
/// tied to tau; i itself is always feasible.
class RestrictedSets final : public SetsProvider {
 public:
  using FeasibilityFn = std::function<std::vector<int>(int i, int tau)>;
  RestrictedSets(const Topology* t, FeasibilityFn feasible)
      : t_(t), feasible_(std::move(feasible)) {}
  std::vector<int> in_set(int i, int tau) const override;
  std::vector<int> out_set(int i, int tau) const override;

 private:
  const Topology* t_;
  FeasibilityFn feasible_;
};

/// Per-unit approximations P_{i,(p,q)}(time) over the pair set the unit owns,
/// with the empirical loss attached to each block.
struct CostBlockStore {
  int owner = -1;
  int time = 0;
  std::map<AgentPair, Mat> blocks;
  std::map<AgentPair, double> loss;

  size_t bytes() const;
};

/// One computational unit of the distributed synthesis. It sees only its own
/// model, the (predicted) neighborhood sets, and whatever arrives through
/// `ingest`; cross-unit data never enters any other way. The window driver
/// calls, per round r: ingest(inbox), compute(r), round_messages(r),
/// end_of_round(r).
class SynthesisUnit {
 public:
  SynthesisUnit(int id, const AgentModel* model, const SetsProvider* sets, WindowSpec w,
                BlockSelectionRule rule = BlockSelectionRule::kMinLossAverage);

  int id() const { return id_; }

  void ingest(const Message& m);
  /// Compute phase of round r (r in [2, H+1]): updates the block store for
  /// one backward step and solves the stacked local gain system.
  void compute(int r);
  /// Messages this unit posts in round r (r in [0, H+1]).
  std::vector<Message> round_messages(int r);
  /// Peak-memory sampling and knowledge eviction; call once per round.
  void end_of_round(int r);

  // Exposed for tests driving the steps directly (terminal_blocks,
  // propagate_blocks, local_gain in isolation).
  void compute_terminal();
  void compute_propagation(int tau_gain);
  void compute_gain(int tau_gain);

  const CostBlockStore& store() const { return store_; }
  /// K_{p,i}(tau) for p in D~+_i(tau), the gains this unit computed.
  const std::map<int, std::map<int, Mat>>& gains_out() const { return gains_out_; }
  /// K_{i,p}(tau) for tau in [k, k+d): own column plus neighbor exports.
  GainSchedule actuation_gains() const;

  size_t peak_stored_bytes() const { return peak_bytes_; }

 private:
  struct Knowledge {
    // All keyed by time index first.
    std::map<int, std::map<AgentPair, Mat>> sqrt_qh;  // (r, p) -> Q_r^{1/2} H_{r,p}
    std::map<int, std::map<int, Mat>> R, B, A;        // owner -> matrix
    std::map<int, std::map<AgentPair, Mat>> gain;     // (r, p) -> K_{r,p}
    std::map<int, std::map<AgentPair, std::vector<BlockCandidate>>> pcand;
    size_t bytes() const;
    void evict_after(int t_max);
  };

  const Mat& own_sqrt_qh(int p, int t);
  const Mat* lookup_sqrt_qh(int r, int p, int t) const;
  Mat require_sqrt_qh(int r, int p, int t, const char* stage);
  Mat require_R(int owner, int t) const;
  Mat require_B(int owner, int t) const;
  Mat require_A(int owner, int t) const;
  Mat require_gain(int r, int p, int t) const;
  int require_dim(int agent) const;
  void note_dims(int agent, int n, int m = -1);

  int id_;
  const AgentModel* model_;
  const SetsProvider* sets_;
  WindowSpec w_;
  BlockSelectionRule rule_;

  Knowledge know_;
  std::map<int, std::map<int, Mat>> own_sqrt_qh_;  // t -> p -> product
  std::map<int, int> state_dim_, input_dim_;
  CostBlockStore store_;
  std::map<int, std::map<int, Mat>> gains_out_;      // tau -> p -> K_{p,i}
  std::map<int, std::map<int, Mat>> actuation_in_;   // tau -> p -> K_{i,p}
  size_t peak_bytes_ = 0;
};

}  // namespace ddrhc
