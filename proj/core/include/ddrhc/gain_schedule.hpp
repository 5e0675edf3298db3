#pragma once

#include "ddrhc/topology.hpp"
#include "ddrhc/types.hpp"

#include <map>
#include <optional>
#include <tuple>

namespace ddrhc {

/// Sparse block gain sequence over a window [k, k+H-1]. Block (i, j, tau) is
/// K_{i,j}(tau): the contribution of agent j's state to agent i's input.
/// Blocks outside the sparsity pattern are simply absent (exact zeros).
class GainSchedule {
 public:
  GainSchedule() = default;
  GainSchedule(int window_start, int horizon, int used_prefix)
      : window_start_(window_start), horizon_(horizon), used_prefix_(used_prefix) {}

  int window_start() const { return window_start_; }
  int horizon() const { return horizon_; }
  int used_prefix() const { return used_prefix_; }

  void set(int i, int j, int tau, Mat K, int computed_by = -1);
  const Mat* find(int i, int j, int tau) const;
  int computed_by(int i, int j, int tau) const;
  bool has_step(int tau) const;
  size_t block_count() const { return blocks_.size(); }

  /// All blocks at one step as (i, j) -> K.
  std::map<AgentPair, const Mat*> step_blocks(int tau) const;

  /// True when every stored block lies inside the pattern E_D(tau).
  bool respects(const Topology& t) const;

  /// Dense global gain at one step, zero outside stored blocks.
  Mat dense(int tau, const std::vector<int>& u_off, const std::vector<int>& x_off) const;

  auto begin() const { return blocks_.begin(); }
  auto end() const { return blocks_.end(); }

 private:
  struct Block {
    Mat K;
    int computed_by = -1;
  };
  int window_start_ = 0, horizon_ = 0, used_prefix_ = 0;
  std::map<std::tuple<int, int, int>, Block> blocks_;  // (tau, i, j)
};

}  // namespace ddrhc
