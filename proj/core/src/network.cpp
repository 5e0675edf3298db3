#include "ddrhc/network.hpp"

#include <Eigen/Cholesky>

#include <numeric>

namespace ddrhc {

namespace {

std::vector<int> offsets_of(const std::vector<AgentModel>& agents, int AgentModel::*dim) {
  std::vector<int> off(agents.size() + 1, 0);
  for (size_t i = 0; i < agents.size(); ++i) off[i + 1] = off[i] + agents[i].*dim;
  return off;
}

}  // namespace

int Network::global_state_dim() const {
  return std::accumulate(agents.begin(), agents.end(), 0,
                         [](int acc, const AgentModel& m) { return acc + m.state_dim; });
}

int Network::global_input_dim() const {
  return std::accumulate(agents.begin(), agents.end(), 0,
                         [](int acc, const AgentModel& m) { return acc + m.input_dim; });
}

std::vector<int> Network::state_offsets() const { return offsets_of(agents, &AgentModel::state_dim); }
std::vector<int> Network::input_offsets() const { return offsets_of(agents, &AgentModel::input_dim); }

GlobalMatrices assemble_global(const Network& net, int tau) {
  const int N = net.agent_count();
  if (N == 0) throw ValidationError("network has no agents");
  if (net.topology.agent_count() != N)
    throw ValidationError("topology size does not match agent list");

  GlobalMatrices g;
  g.x_off = net.state_offsets();
  g.u_off = net.input_offsets();
  g.z_off.assign(N + 1, 0);
  for (int i = 0; i < N; ++i) g.z_off[i + 1] = g.z_off[i] + net.agents[i].output_dim(tau);

  const int n = g.x_off[N], m = g.u_off[N], o = g.z_off[N];
  g.A = Mat::Zero(n, n);
  g.B = Mat::Zero(n, m);
  g.H = Mat::Zero(o, n);
  g.Q = Mat::Zero(o, o);
  g.R = Mat::Zero(m, m);

  for (int i = 0; i < N; ++i) {
    const AgentModel& mi = net.agents[i];
    const Mat Ai = mi.A(tau), Bi = mi.B(tau), Qi = mi.Q(tau), Ri = mi.R(tau);
    const int ni = mi.state_dim, mi_dim = mi.input_dim, oi = g.z_off[i + 1] - g.z_off[i];
    if (Ai.rows() != ni || Ai.cols() != ni)
      throw ValidationError("agent " + std::to_string(i) + ": A(tau) dimension mismatch");
    if (Bi.rows() != ni || Bi.cols() != mi_dim)
      throw ValidationError("agent " + std::to_string(i) + ": B(tau) dimension mismatch");
    if (Ri.rows() != mi_dim || Ri.cols() != mi_dim)
      throw ValidationError("agent " + std::to_string(i) + ": R(tau) dimension mismatch");
    g.A.block(g.x_off[i], g.x_off[i], ni, ni) = Ai;
    g.B.block(g.x_off[i], g.u_off[i], ni, mi_dim) = Bi;
    g.Q.block(g.z_off[i], g.z_off[i], oi, oi) = Qi;
    g.R.block(g.u_off[i], g.u_off[i], mi_dim, mi_dim) = Ri;
    for (int j : net.topology.in_neighbors(i, tau)) {
      const Mat Hij = mi.H(j, tau);
      const int nj = net.agents[j].state_dim;
      if (Hij.rows() != oi || Hij.cols() != nj)
        throw ValidationError("agent " + std::to_string(i) + ": H(" + std::to_string(j) +
                              ", tau) dimension mismatch");
      g.H.block(g.z_off[i], g.x_off[j], oi, nj) = Hij;
    }
  }
  return g;
}

void validate_weights(const Network& net, int k, int H) {
  for (int i = 0; i < net.agent_count(); ++i) {
    const AgentModel& m = net.agents[i];
    for (int tau = k; tau <= k + H; ++tau) {
      const Mat Q = m.Q(tau);
      if (!Q.isApprox(Q.transpose(), 1e-10))
        throw ValidationError("agent " + std::to_string(i) + ": Q(" + std::to_string(tau) +
                              ") is not symmetric");
      if (tau == k + H) break;  // R not needed at the terminal step
      const Mat R = m.R(tau);
      if (!R.isApprox(R.transpose(), 1e-10))
        throw ValidationError("agent " + std::to_string(i) + ": R(" + std::to_string(tau) +
                              ") is not symmetric");
      Eigen::LLT<Mat> llt(R);
      if (llt.info() != Eigen::Success)
        throw ValidationError("agent " + std::to_string(i) + ": R(" + std::to_string(tau) +
                              ") is not positive definite");
    }
  }
}

}  // namespace ddrhc
