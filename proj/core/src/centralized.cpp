#include "ddrhc/centralized.hpp"

#include <Eigen/Cholesky>

namespace ddrhc {

namespace {

// Solve S~ K~ = P~ for one column agent and scatter the K_{p,i} blocks.
void solve_column(const Network& net, const GlobalMatrices& g, const Mat& P_next, int i, int tau,
                  GainSchedule* gains) {
  const auto& dplus = net.topology.out_neighbors(i, tau);
  int stacked = 0;
  for (int p : dplus) stacked += net.agents[p].input_dim;

  Mat S_tilde(stacked, stacked);
  Mat P_tilde(stacked, net.agents[i].state_dim);
  const Mat Ai = net.agents[i].A(tau);

  int row = 0;
  for (int p : dplus) {
    const int mp = net.agents[p].input_dim;
    const Mat Bp = net.agents[p].B(tau);
    int col = 0;
    for (int q : dplus) {
      const int mq = net.agents[q].input_dim;
      const Mat Bq = net.agents[q].B(tau);
      Mat S_pq = Bp.transpose() *
                 P_next.block(g.x_off[p], g.x_off[q], net.agents[p].state_dim,
                              net.agents[q].state_dim) *
                 Bq;
      if (p == q) S_pq += net.agents[q].R(tau);
      S_tilde.block(row, col, mp, mq) = S_pq;
      col += mq;
    }
    P_tilde.block(row, 0, mp, net.agents[i].state_dim) =
        Bp.transpose() *
        P_next.block(g.x_off[p], g.x_off[i], net.agents[p].state_dim, net.agents[i].state_dim) *
        Ai;
    row += mp;
  }

  Eigen::LDLT<Mat> ldlt(S_tilde);
  const Mat K_tilde = ldlt.solve(P_tilde);
  const double residual = (S_tilde * K_tilde - P_tilde).norm();
  const double scale = S_tilde.norm() * K_tilde.norm() + P_tilde.norm() + 1.0;
  if (ldlt.info() != Eigen::Success || !(residual <= 1e-8 * scale))
    throw SynthesisError("stacked gain system is singular for agent " + std::to_string(i) +
                         " at tau=" + std::to_string(tau));

  row = 0;
  for (int p : dplus) {
    const int mp = net.agents[p].input_dim;
    gains->set(p, i, tau, K_tilde.block(row, 0, mp, net.agents[i].state_dim));
    row += mp;
  }
}

Mat cost_update(const GlobalMatrices& g, const Mat& P_next, const Mat& K) {
  const Mat closed = g.A - g.B * K;
  Mat P = g.H.transpose() * g.Q * g.H + K.transpose() * g.R * K +
          closed.transpose() * P_next * closed;
  return 0.5 * (P + P.transpose());  // keep the symmetry invariant under fp drift
}

}  // namespace

CentralizedResult synthesize_window(const Network& net, int k, int H, int used_prefix) {
  if (H < 1) throw ValidationError("window length must be at least 1");
  validate_weights(net, k, H);
  if (used_prefix <= 0) used_prefix = H;

  CentralizedResult res;
  res.gains = GainSchedule(k, H, used_prefix);
  res.cost_to_go.window_start = k;
  res.cost_to_go.horizon = H;
  res.cost_to_go.P.assign(static_cast<size_t>(H) + 1, Mat());

  {
    const GlobalMatrices gT = assemble_global(net, k + H);
    Mat PT = gT.H.transpose() * gT.Q * gT.H;
    res.cost_to_go.P[H] = 0.5 * (PT + PT.transpose());
  }

  for (int tau = k + H - 1; tau >= k; --tau) {
    const GlobalMatrices g = assemble_global(net, tau);
    const Mat& P_next = res.cost_to_go.P[tau - k + 1];
    for (int i = 0; i < net.agent_count(); ++i) solve_column(net, g, P_next, i, tau, &res.gains);
    const Mat K = res.gains.dense(tau, g.u_off, g.x_off);
    res.cost_to_go.P[tau - k] = cost_update(g, P_next, K);
  }
  return res;
}

CostToGo propagate_cost(const Network& net, const GainSchedule& gains) {
  const int k = gains.window_start(), H = gains.horizon();
  CostToGo ctg;
  ctg.window_start = k;
  ctg.horizon = H;
  ctg.P.assign(static_cast<size_t>(H) + 1, Mat());
  {
    const GlobalMatrices gT = assemble_global(net, k + H);
    Mat PT = gT.H.transpose() * gT.Q * gT.H;
    ctg.P[H] = 0.5 * (PT + PT.transpose());
  }
  for (int tau = k + H - 1; tau >= k; --tau) {
    const GlobalMatrices g = assemble_global(net, tau);
    const Mat K = gains.dense(tau, g.u_off, g.x_off);
    ctg.P[tau - k] = cost_update(g, ctg.P[tau - k + 1], K);
  }
  return ctg;
}

double evaluate_cost(const Network& net, const GainSchedule& gains, const Vec& x0) {
  const int k = gains.window_start(), H = gains.horizon();
  Vec x = x0;
  double J = 0.0;
  for (int tau = k; tau < k + H; ++tau) {
    const GlobalMatrices g = assemble_global(net, tau);
    const Mat K = gains.dense(tau, g.u_off, g.x_off);
    const Vec z = g.H * x;
    const Vec u = -K * x;
    J += z.dot(g.Q * z) + u.dot(g.R * u);
    x = g.A * x + g.B * u;
  }
  const GlobalMatrices gT = assemble_global(net, k + H);
  const Vec zT = gT.H * x;
  J += zT.dot(gT.Q * zT);
  return J;
}

Rollout closed_loop_rollout(const Network& net, const GainSchedule& gains, const Vec& x0,
                            int steps) {
  const int k = gains.window_start();
  Rollout r;
  r.x.reserve(steps + 1);
  r.u.reserve(steps);
  r.z.reserve(steps + 1);
  Vec x = x0;
  for (int s = 0; s < steps; ++s) {
    const int tau = k + s;
    if (tau >= k + gains.horizon())
      throw SchedulingError("no gains scheduled for step tau=" + std::to_string(tau));
    const GlobalMatrices g = assemble_global(net, tau);
    const Mat K = gains.dense(tau, g.u_off, g.x_off);
    r.x.push_back(x);
    r.z.push_back(g.H * x);
    const Vec u = -K * x;
    r.u.push_back(u);
    x = g.A * x + g.B * u;
  }
  const GlobalMatrices gT = assemble_global(net, k + steps);
  r.x.push_back(x);
  r.z.push_back(gT.H * x);
  return r;
}

}  // namespace ddrhc
