#pragma once

#include "ddrhc/centralized.hpp"
#include "ddrhc/distributed.hpp"
#include "ddrhc/schedule.hpp"

namespace ddrhc {

/// Plant interface for closed-loop runs. The loop computes the raw feedback
/// -sum_j K_{i,j}(k) x_j(k) from the plant's model-space states, lets the
/// plant shape it into the actuated input (saturation, mass scaling), and
/// applies it.
class TruthPlant {
 public:
  virtual ~TruthPlant() = default;
  virtual int agent_count() const = 0;
  /// Model-space state of agent i at step k (what the feedback law consumes).
  virtual Vec model_state(int i, int k) const = 0;
  /// Map raw feedback to the actuated input; identity by default.
  virtual Vec shape_input(int /*i*/, const Vec& raw, int /*k*/) { return raw; }
  virtual void apply(const std::vector<Vec>& u, int k) = 0;
};

/// Truth = the synthesis model itself: x(k+1) = A(k) x(k) + B(k) u(k).
class LinearModelPlant final : public TruthPlant {
 public:
  LinearModelPlant(const Network* net, std::vector<Vec> x0) : net_(net), x_(std::move(x0)) {}
  int agent_count() const override { return net_->agent_count(); }
  Vec model_state(int i, int /*k*/) const override { return x_[i]; }
  void apply(const std::vector<Vec>& u, int k) override;
  const std::vector<Vec>& states() const { return x_; }

 private:
  const Network* net_;
  std::vector<Vec> x_;
};

enum class SynthesizerKind { kCentralized, kDistributedTi, kDistributedTv };

struct ClosedLoopOptions {
  SynthesizerKind synthesizer = SynthesizerKind::kDistributedTi;
  ScheduleConfig schedule;
  LinkFeasibilityPredicate feasibility;  // required for kDistributedTv
  bool reject_overlap = false;  // refuse configs whose windows overlap in wall-clock
  bool trace_enabled = false;
  DriverOptions driver;
  /// Called once per step with the actuated inputs (empty at the final step)
  /// and the per-agent tracking outputs.
  std::function<void(int k, const std::vector<Vec>& u, const std::vector<Vec>& z)> on_step;
};

struct ClosedLoopResult {
  std::vector<double> z_norm;  // global tracking output norm, steps+1 entries
  int windows = 0;
  HarnessStats window_stats;       // maxima across windows
  size_t peak_unit_bytes = 0;      // max over units and windows
  std::vector<TraceRow> trace;     // synthesis rounds (global round index) + state rows
  size_t state_messages = 0;
};

/// Receding-horizon closed loop: every d steps a window synthesis is launched
/// delta_minus early in simulated time; actuation uses the first-d gains with
/// the per-step state exchange modeled as a hard-real-time transfer.
ClosedLoopResult run_closed_loop(const Network& net, TruthPlant& plant, int steps,
                                 const ClosedLoopOptions& opt);

}  // namespace ddrhc
