#pragma once

#include "ddrhc/topology.hpp"
#include "ddrhc/types.hpp"

#include <functional>

namespace ddrhc {

/// One agent's LTV model over a window: decoupled dynamics (A, B), coupled
/// tracking output blocks H(j, tau) for j in the agent's in-neighborhood,
/// and the weights Q (PSD) and R (PD). The output dimension may vary with
/// tau when the coupling topology does; it is Q(tau).rows().
struct AgentModel {
  int state_dim = 0;
  int input_dim = 0;
  std::function<Mat(int)> A;         // state_dim x state_dim
  std::function<Mat(int)> B;         // state_dim x input_dim
  std::function<Mat(int)> Q;         // o(tau) x o(tau)
  std::function<Mat(int)> R;         // input_dim x input_dim
  std::function<Mat(int, int)> H;    // H(j, tau): o(tau) x n_j

  // Optional providers evaluated against an explicit in-neighborhood; the
  // synthesis units use them when feasibility restricts the topology (the
  // output stack then shrinks with the in-set).
  std::function<Mat(const std::vector<int>&, int)> Q_for;       // (din, tau)
  std::function<Mat(const std::vector<int>&, int, int)> H_for;  // (din, j, tau)

  int output_dim(int tau) const { return static_cast<int>(Q(tau).rows()); }
};

struct Network {
  Topology topology;
  std::vector<AgentModel> agents;

  int agent_count() const { return static_cast<int>(agents.size()); }
  int global_state_dim() const;
  int global_input_dim() const;
  std::vector<int> state_offsets() const;  // size N+1, prefix sums of n_i
  std::vector<int> input_offsets() const;
};

/// Global concatenation at one time step: A, B, Q, R block-diagonal and H with
/// block (i, j) = H_{i,j}(tau) for j in D-_i(tau), zero elsewhere.
struct GlobalMatrices {
  Mat A, B, H, Q, R;
  std::vector<int> x_off, u_off, z_off;
};

GlobalMatrices assemble_global(const Network& net, int tau);

/// Checks Q symmetry/PSD-ish and R symmetric positive definite over a window;
/// throws ValidationError naming the offending agent and step.
void validate_weights(const Network& net, int k, int H);

}  // namespace ddrhc
