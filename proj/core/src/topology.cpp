#include "ddrhc/topology.hpp"

#include <algorithm>
#include <set>

namespace ddrhc {

bool SparsityPattern::all_ones() const {
  return std::all_of(mask.begin(), mask.end(), [](uint8_t v) { return v != 0; });
}

bool SparsityPattern::block_diagonal() const {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && allowed(i, j)) return false;
  return true;
}

PairSet pair_product(const std::vector<int>& a, const std::vector<int>& b) {
  PairSet out;
  out.reserve(a.size() * b.size());
  for (int p : a)
    for (int q : b) out.emplace_back(p, q);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PairSet pair_union(const PairSet& a, const PairSet& b) {
  PairSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool pair_contains(const PairSet& s, const AgentPair& p) {
  return std::binary_search(s.begin(), s.end(), p);
}

std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Topology::Snapshot Topology::make_snapshot(int n, const EdgeList& edges) {
  std::vector<std::set<int>> in(n), out(n);
  for (const auto& [j, i] : edges) {
    if (j < 0 || j >= n || i < 0 || i >= n)
      throw ValidationError("topology edge (" + std::to_string(j) + "," + std::to_string(i) +
                            ") has an endpoint outside [0," + std::to_string(n - 1) + "]");
    in[i].insert(j);
    out[j].insert(i);
  }
  for (int i = 0; i < n; ++i) {  // self-loops are implied
    in[i].insert(i);
    out[i].insert(i);
  }
  Snapshot s;
  s.in.reserve(n);
  s.out.reserve(n);
  for (int i = 0; i < n; ++i) {
    s.in.emplace_back(in[i].begin(), in[i].end());
    s.out.emplace_back(out[i].begin(), out[i].end());
  }
  return s;
}

Topology Topology::static_graph(int n, EdgeList edges) {
  if (n <= 0) throw ValidationError("topology needs at least one agent");
  Topology t;
  t.n_ = n;
  t.static_ = true;
  t.static_snapshot_ = std::make_shared<const Snapshot>(make_snapshot(n, edges));
  return t;
}

Topology Topology::timeline_graph(int n, std::vector<EdgeList> steps) {
  if (n <= 0) throw ValidationError("topology needs at least one agent");
  if (steps.empty()) throw ValidationError("timeline topology needs at least one step");
  Topology t;
  t.n_ = n;
  t.static_ = steps.size() == 1;
  t.timeline_ = std::move(steps);
  t.cache_ = std::make_shared<Cache>();
  for (const auto& e : t.timeline_) make_snapshot(n, e);  // validate endpoints up front
  if (t.static_) t.static_snapshot_ = std::make_shared<const Snapshot>(make_snapshot(n, t.timeline_[0]));
  return t;
}

Topology Topology::callback_graph(int n, std::function<EdgeList(int)> edges_at) {
  if (n <= 0) throw ValidationError("topology needs at least one agent");
  if (!edges_at) throw ValidationError("callback topology needs an edge callback");
  Topology t;
  t.n_ = n;
  t.static_ = false;
  t.edges_at_ = std::move(edges_at);
  t.cache_ = std::make_shared<Cache>();
  return t;
}

const Topology::Snapshot& Topology::at(int k) const {
  if (static_snapshot_) return *static_snapshot_;
  if (!timeline_.empty()) {
    const int step = std::clamp<int>(k, 0, static_cast<int>(timeline_.size()) - 1);
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->by_step.find(step);
    if (it == cache_->by_step.end())
      it = cache_->by_step.emplace(step, std::make_shared<const Snapshot>(make_snapshot(n_, timeline_[step]))).first;
    return *it->second;
  }
  std::lock_guard lock(cache_->mutex);
  auto it = cache_->by_step.find(k);
  if (it == cache_->by_step.end())
    it = cache_->by_step.emplace(k, std::make_shared<const Snapshot>(make_snapshot(n_, edges_at_(k)))).first;
  return *it->second;
}

const std::vector<int>& Topology::in_neighbors(int i, int k) const {
  if (i < 0 || i >= n_) throw ValidationError("agent index out of range");
  return at(k).in[i];
}

const std::vector<int>& Topology::out_neighbors(int i, int k) const {
  if (i < 0 || i >= n_) throw ValidationError("agent index out of range");
  return at(k).out[i];
}

bool Topology::has_edge(int j, int i, int k) const {
  const auto& in = in_neighbors(i, k);
  return std::binary_search(in.begin(), in.end(), j);
}

PairSet Topology::phi(int i, int k) const {
  const auto& out = out_neighbors(i, k);
  return pair_product(out, out);
}

PairSet Topology::psi(int i, int k) const {
  PairSet acc;
  for (int j : out_neighbors(i, k)) acc = pair_union(acc, phi(j, k));
  return acc;
}

NeighborhoodSets Topology::neighborhoods(int i, int k) const {
  NeighborhoodSets s;
  s.d_minus = in_neighbors(i, k);
  s.d_plus = out_neighbors(i, k);
  s.phi = phi(i, k);
  s.psi = psi(i, k);
  return s;
}

SparsityPattern Topology::sparsity(int k) const {
  SparsityPattern p;
  p.n = n_;
  p.mask.assign(static_cast<size_t>(n_) * n_, 0);
  const auto& snap = at(k);
  for (int i = 0; i < n_; ++i)
    for (int j : snap.in[i]) p.mask[static_cast<size_t>(i) * n_ + j] = 1;
  return p;
}

bool Topology::weakly_connected(int k) const {
  const auto& snap = at(k);
  std::vector<uint8_t> seen(n_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    auto visit = [&](int w) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    };
    for (int w : snap.in[v]) visit(w);
    for (int w : snap.out[v]) visit(w);
  }
  return count == n_;
}

}  // namespace ddrhc
