#pragma once

#include "ddrhc/types.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace ddrhc {

/// Block-granular mask over agent pairs: allowed(i, j) iff j is in the
/// in-neighborhood of i, i.e. gain block K_{i,j} may be nonzero.
struct SparsityPattern {
  int n = 0;
  std::vector<uint8_t> mask;  // row-major, n*n

  bool allowed(int i, int j) const { return mask[static_cast<size_t>(i) * n + j] != 0; }
  bool all_ones() const;
  bool block_diagonal() const;
};

/// Neighborhood sets of one agent at one time step.
struct NeighborhoodSets {
  std::vector<int> d_minus;  // in-neighborhood, sorted, contains the agent itself
  std::vector<int> d_plus;   // out-neighborhood, sorted, contains the agent itself
  PairSet phi;               // d_plus x d_plus
  PairSet psi;               // union of phi_j over j in d_plus
};

/// Directed tracking-coupling graph, possibly time-varying. Edge (j, i) means
/// the tracking output of agent i depends on the state of agent j. Every
/// vertex carries a self-loop at every time step; construction adds missing
/// self-loops and deduplicates. Read-only after construction; concurrent
/// queries are safe (the per-step snapshot cache is internally locked).
class Topology {
 public:
  using EdgeList = std::vector<AgentPair>;  // (j, i) pairs

  Topology() = default;

  static Topology static_graph(int n, EdgeList edges);
  /// Explicit per-step edge lists; steps beyond the timeline reuse the last entry.
  static Topology timeline_graph(int n, std::vector<EdgeList> steps);
  /// Edges supplied by a callback of the time step (geometry-driven topologies).
  static Topology callback_graph(int n, std::function<EdgeList(int)> edges_at);

  int agent_count() const { return n_; }
  bool is_static() const { return static_; }

  const std::vector<int>& in_neighbors(int i, int k) const;
  const std::vector<int>& out_neighbors(int i, int k) const;
  bool has_edge(int j, int i, int k) const;

  NeighborhoodSets neighborhoods(int i, int k) const;
  PairSet phi(int i, int k) const;
  PairSet psi(int i, int k) const;

  SparsityPattern sparsity(int k) const;

  /// Diagnostic only: whether the undirected version of the step-k graph is
  /// connected. Disconnected graphs are legal inputs.
  bool weakly_connected(int k) const;

 private:
  struct Snapshot {
    std::vector<std::vector<int>> in;   // sorted, self included
    std::vector<std::vector<int>> out;  // sorted, self included
  };

  struct Cache {
    std::mutex mutex;
    std::map<int, std::shared_ptr<const Snapshot>> by_step;
  };

  static Snapshot make_snapshot(int n, const EdgeList& edges);
  const Snapshot& at(int k) const;

  int n_ = 0;
  bool static_ = true;
  std::function<EdgeList(int)> edges_at_;
  std::vector<EdgeList> timeline_;
  std::shared_ptr<const Snapshot> static_snapshot_;
  std::shared_ptr<Cache> cache_;
};

PairSet pair_product(const std::vector<int>& a, const std::vector<int>& b);
PairSet pair_union(const PairSet& a, const PairSet& b);
bool pair_contains(const PairSet& s, const AgentPair& p);
std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace ddrhc
