// Test-only reference implementations, kept independent of the library's
// synthesis path: brute-force set enumeration on raw edge lists and a dense
// (message-free) re-implementation of the masked block recursion.
#pragma once

#include "ddrhc/block_ops.hpp"
#include "ddrhc/centralized.hpp"
#include "ddrhc/network.hpp"

#include <map>
#include <set>
#include <vector>

namespace oracle {

using ddrhc::AgentPair;
using ddrhc::GainSchedule;
using ddrhc::Mat;
using ddrhc::Network;

struct BruteSets {
  std::vector<std::set<int>> din, dout;
  std::vector<std::set<AgentPair>> phi, psi;
};

/// Neighborhood sets enumerated directly from an edge list with self-loops.
inline BruteSets brute_sets(int n, const std::vector<AgentPair>& edges) {
  BruteSets s;
  s.din.resize(n);
  s.dout.resize(n);
  for (int v = 0; v < n; ++v) {
    s.din[v].insert(v);
    s.dout[v].insert(v);
  }
  for (const auto& [j, i] : edges) {
    s.din[i].insert(j);
    s.dout[j].insert(i);
  }
  s.phi.resize(n);
  s.psi.resize(n);
  for (int v = 0; v < n; ++v)
    for (int p : s.dout[v])
      for (int q : s.dout[v]) s.phi[v].insert({p, q});
  for (int v = 0; v < n; ++v)
    for (int j : s.dout[v]) s.psi[v].insert(s.phi[j].begin(), s.phi[j].end());
  return s;
}

struct MaskedOracleResult {
  GainSchedule gains;  // every K_{p,i}(tau)
  std::vector<std::map<AgentPair, Mat>> store;      // per unit, blocks at k+1
  std::vector<std::map<AgentPair, double>> loss;
};

/// Dense simulation of every unit's masked backward recursion with direct
/// model access (no rounds, no messages, no payload forwarding). Static
/// topologies only.
inline MaskedOracleResult masked_dense_oracle(const Network& net, int k, int H) {
  using ddrhc::Vec;
  const int N = net.agent_count();
  const auto& topo = net.topology;

  auto dims = [&](int j) { return net.agents[j].state_dim; };
  std::vector<std::map<AgentPair, Mat>> store(N);
  std::vector<std::map<AgentPair, double>> loss(N);

  const int tH = k + H;
  for (int i = 0; i < N; ++i) {
    for (int p : topo.out_neighbors(i, tH - 1)) {
      for (int q : topo.out_neighbors(i, tH - 1)) {
        Mat blk = Mat::Zero(dims(p), dims(q));
        for (int r : ddrhc::sorted_intersection(topo.out_neighbors(p, tH),
                                                topo.out_neighbors(q, tH)))
          blk += net.agents[r].H(p, tH).transpose() * net.agents[r].Q(tH) *
                 net.agents[r].H(q, tH);
        store[i][{p, q}] = blk;
        loss[i][{p, q}] = 0.0;
      }
    }
  }

  MaskedOracleResult res;
  res.gains = GainSchedule(k, H, H);

  for (int tau = k + H - 1; tau >= k; --tau) {
    // Gains from the time-(tau+1) stores.
    std::map<AgentPair, Mat> K;  // (p, i)
    for (int i = 0; i < N; ++i) {
      const auto dplus = topo.out_neighbors(i, tau);
      std::vector<int> off(dplus.size() + 1, 0);
      for (size_t a = 0; a < dplus.size(); ++a)
        off[a + 1] = off[a] + net.agents[dplus[a]].input_dim;
      Mat S(off.back(), off.back()), P(off.back(), dims(i));
      for (size_t a = 0; a < dplus.size(); ++a) {
        const Mat Bp = net.agents[dplus[a]].B(tau);
        for (size_t b = 0; b < dplus.size(); ++b) {
          Mat blk = Bp.transpose() * store[i].at({dplus[a], dplus[b]}) *
                    net.agents[dplus[b]].B(tau);
          if (a == b) blk += net.agents[dplus[b]].R(tau);
          S.block(off[a], off[b], blk.rows(), blk.cols()) = blk;
        }
        P.block(off[a], 0, Bp.cols(), dims(i)) =
            Bp.transpose() * store[i].at({dplus[a], i}) * net.agents[i].A(tau);
      }
      const Mat Kt = S.ldlt().solve(P);
      for (size_t a = 0; a < dplus.size(); ++a) {
        K[{dplus[a], i}] = Kt.block(off[a], 0, off[a + 1] - off[a], dims(i));
        res.gains.set(dplus[a], i, tau, K[{dplus[a], i}], i);
      }
    }
    if (tau == k) break;

    // Propagate every store simultaneously from the time-(tau+1) snapshot.
    std::vector<std::map<AgentPair, Mat>> next(N);
    std::vector<std::map<AgentPair, double>> next_loss(N);
    for (int i = 0; i < N; ++i) {
      const ddrhc::PairSet psi = topo.psi(i, tau);
      for (int p : topo.out_neighbors(i, tau - 1)) {
        for (int q : topo.out_neighbors(i, tau - 1)) {
          if (p > q) continue;
          const auto dp = topo.out_neighbors(p, tau);
          const auto dq = topo.out_neighbors(q, tau);
          Mat acc = Mat::Zero(dims(p), dims(q));
          for (int r : ddrhc::sorted_intersection(dp, dq)) {
            acc += net.agents[r].H(p, tau).transpose() * net.agents[r].Q(tau) *
                   net.agents[r].H(q, tau);
            acc += K.at({r, p}).transpose() * net.agents[r].R(tau) * K.at({r, q});
          }
          std::vector<int> offp(dp.size() + 1, 0), offq(dq.size() + 1, 0);
          for (size_t a = 0; a < dp.size(); ++a) offp[a + 1] = offp[a] + dims(dp[a]);
          for (size_t b = 0; b < dq.size(); ++b) offq[b + 1] = offq[b] + dims(dq[b]);
          Mat Wp = Mat::Zero(offp.back(), dims(p)), Wq = Mat::Zero(offq.back(), dims(q));
          for (size_t a = 0; a < dp.size(); ++a) {
            Mat blk = -net.agents[dp[a]].B(tau) * K.at({dp[a], p});
            if (dp[a] == p) blk += net.agents[p].A(tau);
            Wp.block(offp[a], 0, blk.rows(), blk.cols()) = blk;
          }
          for (size_t b = 0; b < dq.size(); ++b) {
            Mat blk = -net.agents[dq[b]].B(tau) * K.at({dq[b], q});
            if (dq[b] == q) blk += net.agents[q].A(tau);
            Wq.block(offq[b], 0, blk.rows(), blk.cols()) = blk;
          }
          double L = 0.0;
          Mat Pt = Mat::Zero(offp.back(), offq.back());
          for (size_t a = 0; a < dp.size(); ++a) {
            for (size_t b = 0; b < dq.size(); ++b) {
              const AgentPair key{dp[a], dq[b]};
              if (!ddrhc::pair_contains(psi, key)) {
                L += 1.0;
                continue;
              }
              // Average of the minimum-loss candidates among the holders.
              Mat sum;
              double best = 0.0;
              int count = 0;
              auto consider = [&](int holder) {
                auto it = store[holder].find(key);
                if (it == store[holder].end()) return;
                const double l = loss[holder].at(key);
                if (count == 0 || l < best) {
                  best = l;
                  sum = it->second;
                  count = 1;
                } else if (l == best) {
                  sum += it->second;
                  ++count;
                }
              };
              consider(i);
              for (int j : topo.out_neighbors(i, tau))
                if (j != i) consider(j);
              if (count == 0) {
                L += 1.0;
                continue;
              }
              Pt.block(offp[a], offq[b], dims(key.first), dims(key.second)) = sum / count;
            }
          }
          if (p == q) Pt = ddrhc::psd_repair(0.5 * (Pt + Pt.transpose()));
          acc += Wp.transpose() * Pt * Wq;
          if (p == q) {
            next[i][{p, q}] = 0.5 * (acc + acc.transpose());
            next_loss[i][{p, q}] = L;
          } else {
            next[i][{p, q}] = acc;
            next[i][{q, p}] = acc.transpose();
            next_loss[i][{p, q}] = L;
            next_loss[i][{q, p}] = L;
          }
        }
      }
    }
    store = std::move(next);
    loss = std::move(next_loss);
  }
  res.store = std::move(store);
  res.loss = std::move(loss);
  return res;
}

}  // namespace oracle
