#include "ddrhc/verification.hpp"

#include <algorithm>
#include <cmath>

namespace ddrhc::verify {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Mat seeded_matrix(uint64_t seed, uint64_t tag, int rows, int cols, double scale) {
  Mat m(rows, cols);
  uint64_t state = mix64(seed ^ mix64(tag));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      state = mix64(state);
      const double u = static_cast<double>(state >> 11) / 9007199254740992.0;  // [0,1)
      m(r, c) = scale * (2.0 * u - 1.0);
    }
  }
  return m;
}

Topology chain_topology(int n) {
  Topology::EdgeList e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Topology::static_graph(n, e);
}

Topology ring_topology(int n) {
  Topology::EdgeList e;
  for (int i = 0; i < n; ++i) e.emplace_back((i + n - 1) % n, i);
  return Topology::static_graph(n, e);
}

Topology binary_tree_topology(int n) {
  Topology::EdgeList e;
  for (int i = 1; i < n; ++i) e.emplace_back((i - 1) / 2, i);
  return Topology::static_graph(n, e);
}

Topology random_topology(int n, uint64_t seed, double edge_prob) {
  Topology::EdgeList e;
  uint64_t state = mix64(seed ^ 0xabcdef12345ull);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      state = mix64(state);
      const double u = static_cast<double>(state >> 11) / 9007199254740992.0;
      if (u < edge_prob) e.emplace_back(j, i);
    }
  }
  return Topology::static_graph(n, e);
}

Topology all_to_all_topology(int n) {
  Topology::EdgeList e;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j) e.emplace_back(j, i);
  return Topology::static_graph(n, e);
}

Topology covered_chain(int n) {
  Topology::EdgeList e;
  for (int v = 0; v < n; v += 2) {
    if (v - 1 >= 0) e.emplace_back(v, v - 1);
    if (v + 1 < n) e.emplace_back(v, v + 1);
  }
  return Topology::static_graph(n, e);
}

Topology covered_ring(int n) {
  if (n % 2 != 0) throw ValidationError("the alternating ring needs an even vertex count");
  Topology::EdgeList e;
  for (int v = 0; v < n; v += 2) {
    e.emplace_back(v, (v + 1) % n);
    e.emplace_back(v, (v + n - 1) % n);
  }
  return Topology::static_graph(n, e);
}

Topology covered_tree(int n) {
  auto depth = [](int v) {
    int d = 0;
    while (v > 0) {
      v = (v - 1) / 2;
      ++d;
    }
    return d;
  };
  Topology::EdgeList e;
  for (int v = 1; v < n; ++v) {
    const int parent = (v - 1) / 2;
    if (depth(v) % 2 == 1)
      e.emplace_back(parent, v);  // odd depth: sink, fed by its even-depth parent
    else
      e.emplace_back(v, parent);  // even depth: source, feeds its odd-depth parent
  }
  return Topology::static_graph(n, e);
}

bool exactness_coverage_holds(const Topology& t, int k) {
  for (int i = 0; i < t.agent_count(); ++i) {
    const PairSet psi = t.psi(i, k);
    for (int p : t.out_neighbors(i, k))
      for (int q : t.out_neighbors(i, k))
        for (int r : t.out_neighbors(p, k))
          for (int s : t.out_neighbors(q, k))
            if (!pair_contains(psi, {r, s})) return false;
  }
  return true;
}

Network random_network(const Topology& topo, uint64_t seed, int n_max, int m_max, int o_max) {
  const int N = topo.agent_count();
  auto state_dims = std::make_shared<std::vector<int>>(N);
  std::vector<int> input_dims(N), output_dims(N);
  for (int i = 0; i < N; ++i) {
    const uint64_t si = mix64(seed ^ (0x1000ull + i));
    (*state_dims)[i] = 2 + static_cast<int>(si % static_cast<uint64_t>(std::max(1, n_max - 1)));
    input_dims[i] = 1 + static_cast<int>(mix64(si) % static_cast<uint64_t>(m_max));
    output_dims[i] = 1 + static_cast<int>(mix64(si ^ 7) % static_cast<uint64_t>(o_max));
  }

  Network net;
  net.topology = topo;
  net.agents.reserve(N);
  for (int i = 0; i < N; ++i) {
    const int n = (*state_dims)[i], m = input_dims[i], o = output_dims[i];
    AgentModel a;
    a.state_dim = n;
    a.input_dim = m;
    a.A = [seed, i, n](int tau) {
      Mat raw = seeded_matrix(seed, mix64(0xAull ^ (uint64_t(i) << 20) ^ uint64_t(tau)), n, n);
      return Mat(raw * (0.95 / std::max(1.0, raw.norm())));
    };
    a.B = [seed, i, n, m](int tau) {
      return seeded_matrix(seed, mix64(0xBull ^ (uint64_t(i) << 20) ^ uint64_t(tau)), n, m);
    };
    a.Q = [seed, i, o](int tau) {
      Mat g = seeded_matrix(seed, mix64(0xCull ^ (uint64_t(i) << 20) ^ uint64_t(tau)), o, o);
      return Mat(g.transpose() * g / o);
    };
    a.R = [seed, i, m](int tau) {
      Mat g = seeded_matrix(seed, mix64(0xDull ^ (uint64_t(i) << 20) ^ uint64_t(tau)), m, m);
      return Mat(g.transpose() * g / m + 0.2 * Mat::Identity(m, m));
    };
    a.H = [seed, i, o, state_dims](int j, int tau) {
      return seeded_matrix(seed, mix64(0xEull ^ (uint64_t(i) << 20) ^ (uint64_t(j) << 40) ^
                                       uint64_t(tau)),
                           o, (*state_dims)[j]);
    };
    net.agents.push_back(std::move(a));
  }
  return net;
}

GainSchedule random_sparse_gains(const Network& net, int k, int H, uint64_t seed, double scale) {
  GainSchedule g(k, H, H);
  for (int tau = k; tau < k + H; ++tau)
    for (int i = 0; i < net.agent_count(); ++i)
      for (int j : net.topology.in_neighbors(i, tau))
        g.set(i, j, tau,
              seeded_matrix(seed, mix64(0xF00ull ^ (uint64_t(i) << 16) ^ (uint64_t(j) << 32) ^
                                        uint64_t(tau)),
                            net.agents[i].input_dim, net.agents[j].state_dim, scale));
  return g;
}

GainSchedule reference_lqr(const Network& net, int k, int H) {
  GainSchedule gains(k, H, H);
  const GlobalMatrices gT = assemble_global(net, k + H);
  Mat P = gT.H.transpose() * gT.Q * gT.H;
  for (int tau = k + H - 1; tau >= k; --tau) {
    const GlobalMatrices g = assemble_global(net, tau);
    const Mat S = g.B.transpose() * P * g.B + g.R;
    const Mat K = S.inverse() * g.B.transpose() * P * g.A;
    P = g.H.transpose() * g.Q * g.H + g.A.transpose() * P * (g.A - g.B * K);
    P = 0.5 * (P + P.transpose());
    for (int i = 0; i < net.agent_count(); ++i)
      for (int j = 0; j < net.agent_count(); ++j)
        gains.set(i, j, tau,
                  K.block(g.u_off[i], g.x_off[j], net.agents[i].input_dim,
                          net.agents[j].state_dim));
  }
  return gains;
}

namespace {

double rel_frobenius(const Mat& a, const Mat& ref) {
  const double denom = std::max(ref.norm(), 1e-12);
  return (a - ref).norm() / denom;
}

}  // namespace

CheckReport check_exactness(int seeds, int H, double tol) {
  CheckReport rep{"exactness", true, 0.0, {}};
  const std::vector<std::pair<std::string, Topology>> topologies = {
      {"chain-5", covered_chain(5)},
      {"ring-6", covered_ring(6)},
      {"tree-7", covered_tree(7)},
  };
  for (const auto& [name, topo] : topologies) {
    if (!exactness_coverage_holds(topo)) {
      rep.pass = false;
      rep.detail = name + " does not satisfy the coverage condition";
      return rep;
    }
  }
  for (const auto& [name, topo] : topologies) {
    for (int s = 0; s < seeds; ++s) {
      const Network net = random_network(topo, 1000 + s);
      const WindowSpec w{0, H, std::max(1, H / 4)};
      const CentralizedResult central = synthesize_window(net, w.k, w.H, w.d);
      RoundHarness h(net.agent_count(), window_link_predicate(net.topology, w), w.H + 2);
      h.set_trace_enabled(false);
      const DistributedResult dist = synthesize_window_ti(net, w, h);
      for (int tau = w.k; tau < w.k + w.H; ++tau) {
        for (int i = 0; i < net.agent_count(); ++i) {
          for (int p : net.topology.out_neighbors(i, tau)) {
            const Mat* Kd = dist.combined.find(p, i, tau);
            const Mat* Kc = central.gains.find(p, i, tau);
            if (!Kd || !Kc) {
              rep.pass = false;
              rep.detail = name + ": missing block at tau=" + std::to_string(tau);
              return rep;
            }
            const double err = rel_frobenius(*Kd, *Kc);
            if (err > rep.worst) {
              rep.worst = err;
              rep.detail = name + " seed " + std::to_string(s);
            }
          }
        }
      }
    }
  }
  rep.pass = rep.worst <= tol;
  return rep;
}

CheckReport check_cost_identity(int seeds, double tol) {
  CheckReport rep{"cost-identity", true, 0.0, {}};
  for (int s = 0; s < seeds; ++s) {
    const int N = 2 + static_cast<int>(mix64(s) % 5);       // N <= 6
    const int H = 3 + static_cast<int>(mix64(s ^ 99) % 18);  // H <= 20
    const Topology topo = random_topology(N, 500 + s);
    const Network net = random_network(topo, 2000 + s);
    const GainSchedule gains = random_sparse_gains(net, 0, H, 3000 + s);
    const CostToGo ctg = propagate_cost(net, gains);
    const Vec x0 = seeded_matrix(4000 + s, 0x5eedull, net.global_state_dim(), 1);
    const double J = evaluate_cost(net, gains, x0);
    const double quad = x0.dot(ctg.at(0) * x0);
    const double err = std::abs(J - quad) / std::max(std::abs(J), 1e-9);
    if (err > rep.worst) {
      rep.worst = err;
      rep.detail = "seed " + std::to_string(s) + " N=" + std::to_string(N) +
                   " H=" + std::to_string(H);
    }
  }
  rep.pass = rep.worst <= tol;
  return rep;
}

CheckReport check_lqr_equivalence(int seeds, double tol) {
  CheckReport rep{"lqr-equivalence", true, 0.0, {}};
  for (int s = 0; s < seeds; ++s) {
    const int N = 2 + static_cast<int>(mix64(s ^ 0x777) % 3);  // N <= 4
    const int H = 8;
    const Network net = random_network(all_to_all_topology(N), 6000 + s);
    const CentralizedResult central = synthesize_window(net, 0, H);
    const GainSchedule ref = reference_lqr(net, 0, H);
    for (int tau = 0; tau < H; ++tau) {
      const auto offs = net.input_offsets();
      const auto xoffs = net.state_offsets();
      const Mat Kc = central.gains.dense(tau, offs, xoffs);
      const Mat Kr = ref.dense(tau, offs, xoffs);
      const double err = rel_frobenius(Kc, Kr);
      if (err > rep.worst) {
        rep.worst = err;
        rep.detail = "seed " + std::to_string(s) + " tau=" + std::to_string(tau);
      }
    }
  }
  rep.pass = rep.worst <= tol;
  return rep;
}

CheckReport check_scheduling_arithmetic() {
  CheckReport rep{"scheduling-arithmetic", true, 0.0, {}};
  const TvAdmissibility a = check_tv_constraints(10.0, 1.0, 1320.0, 360.0);
  bool ok = true;
  ok = ok && a.d_bound == Rational(359, 11);                  // d < 32.63...
  ok = ok && a.d_min_offset == Rational(1, 5);                // d >= 0.2 + H/10
  ok = ok && a.d_min_slope == Rational(1, 10);
  ok = ok && a.H_bound == Rational(1318, 11);                 // H < 119.81... (see below)
  ok = ok && a.admissible(100, 25);
  ok = ok && !a.admissible(130, 25);
  // The quoted worked example states H < 120.7, which equals the bound for
  // dt_max = 1330 s; with dt_max = 1320 s the same formula yields 1318/11.
  const TvAdmissibility b = check_tv_constraints(10.0, 1.0, 1330.0, 360.0);
  ok = ok && b.H_bound == Rational(1328, 11);
  ok = ok && std::abs(b.H_bound.value() - 120.7272727272727) < 1e-12;

  const SchedulePlan plan = plan_schedule({10.0, 1.0, 100, 25});
  ok = ok && plan.rounds == 102 && std::abs(plan.delta_minus - 102.0) < 1e-12 &&
       !plan.overlapping;
  const SchedulePlan tight = plan_schedule({1.0, 1.0, 10, 5});
  ok = ok && tight.rounds == 12 && tight.overlapping;

  rep.pass = ok;
  if (!ok) rep.detail = "scheduling arithmetic deviates from the pinned values";
  return rep;
}

CheckReport check_sparsity(bool inject_violation) {
  CheckReport rep{"gain-sparsity", true, 0.0, {}};
  const Topology topo = chain_topology(5);
  const Network net = random_network(topo, 123);
  const WindowSpec w{0, 10, 2};
  RoundHarness h(net.agent_count(), window_link_predicate(topo, w), w.H + 2);
  h.set_trace_enabled(false);
  DistributedResult dist = synthesize_window_ti(net, w, h);
  if (inject_violation)
    dist.combined.set(0, 4, 3, Mat::Ones(net.agents[0].input_dim, net.agents[4].state_dim));
  if (!dist.combined.respects(topo)) {
    rep.pass = false;
    rep.detail = "gain block outside the sparsity pattern E_D";
  }
  return rep;
}

std::vector<CheckReport> run_verification_suite(const VerifyOptions& opt) {
  std::vector<CheckReport> out;
  out.push_back(check_exactness(opt.exactness_seeds, 15, 1e-9));
  out.push_back(check_cost_identity(opt.cost_seeds, 1e-9));
  out.push_back(check_lqr_equivalence(opt.lqr_seeds, 1e-10));
  out.push_back(check_scheduling_arithmetic());
  out.push_back(check_sparsity(opt.inject_sparsity_violation));
  return out;
}

}  // namespace ddrhc::verify
