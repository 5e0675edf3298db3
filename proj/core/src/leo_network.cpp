#include "ddrhc/leo.hpp"

#include <cmath>
#include <memory>

namespace ddrhc::leo {

std::vector<Vec3> nominal_positions(const ConstellationConfig& cfg, const Anchor& anchor,
                                    double t) {
  std::vector<Vec3> p;
  p.reserve(cfg.total);
  for (int s = 0; s < cfg.total; ++s)
    p.push_back(elements_to_position(walker_nominal(cfg, anchor, t, s)));
  return p;
}

Topology nominal_topology(const ConstellationConfig& cfg, const Anchor& anchor, double Tc) {
  cfg.validate();
  return Topology::callback_graph(cfg.total, [cfg, anchor, Tc](int k) {
    const auto positions = nominal_positions(cfg, anchor, k * Tc);
    // Recover the edge list from the snapshot topology builder.
    Topology snap = coupling_topology(positions, cfg);
    Topology::EdgeList edges;
    for (int i = 0; i < cfg.total; ++i)
      for (int j : snap.in_neighbors(i, 0))
        if (j != i) edges.emplace_back(j, i);
    return edges;
  });
}

Network build_network(const ConstellationConfig& cfg, const Anchor& anchor, double Tc) {
  cfg.validate();
  Network net;
  net.topology = nominal_topology(cfg, anchor, Tc);
  auto topo = std::make_shared<Topology>(net.topology);  // shares the snapshot cache

  const Mat A_const = stm(cfg, Tc);
  const Mat R_const = weight_r(cfg);
  const double drift = u_drift_rate(cfg.a_bar, cfg.inclination, cfg.j2);

  net.agents.reserve(cfg.total);
  for (int i = 0; i < cfg.total; ++i) {
    AgentModel m;
    m.state_dim = 6;
    m.input_dim = 3;
    m.A = [A_const](int) { return A_const; };
    m.R = [R_const](int) { return R_const; };
    const double u_slot = anchor.u0 + slot_u(cfg, i);
    const double t0 = anchor.t0;
    m.B = [cfg, u_slot, drift, t0, Tc](int tau) {
      return conv_matrix(cfg, u_slot + drift * (tau * Tc - t0), Tc);
    };
    m.Q = [cfg, topo, i](int tau) {
      return weight_q(cfg, static_cast<int>(topo->in_neighbors(i, tau).size()));
    };
    m.H = [cfg, topo, i](int j, int tau) {
      return output_block(cfg, topo->in_neighbors(i, tau), i, j);
    };
    m.Q_for = [cfg](const std::vector<int>& din, int) {
      return weight_q(cfg, static_cast<int>(din.size()));
    };
    m.H_for = [cfg, i](const std::vector<int>& din, int j, int) {
      return output_block(cfg, din, i, j);
    };
    net.agents.push_back(std::move(m));
  }
  return net;
}

LinkFeasibilityPredicate los_feasibility(const ConstellationConfig& cfg, const Anchor& anchor) {
  return [cfg, anchor](int i, int j, double t) {
    const Vec3 pi = elements_to_position(walker_nominal(cfg, anchor, t, i));
    const Vec3 pj = elements_to_position(walker_nominal(cfg, anchor, t, j));
    return los_feasible(pi, pj, cfg.a_bar);
  };
}

ConstellationPlant::ConstellationPlant(const ConstellationConfig& cfg, const Anchor& anchor,
                                       double Tc, TruthMode mode,
                                       std::vector<SatelliteState> fleet)
    : cfg_(cfg), anchor_(anchor), Tc_(Tc), mode_(mode), fleet_(std::move(fleet)) {
  if (static_cast<int>(fleet_.size()) != cfg_.total)
    throw ValidationError("fleet size does not match the constellation config");
}

Vec ConstellationPlant::model_state(int i, int k) const {
  const MeanElements nom = walker_nominal(cfg_, anchor_, time_of(k), i);
  return relative_elements(fleet_[i].elements, nom).vec();
}

Vec ConstellationPlant::shape_input(int i, const Vec& raw, int /*k*/) {
  Vec u = fleet_[i].mass * raw;
  for (int axis = 0; axis < 3; ++axis)
    u[axis] = std::clamp(u[axis], -cfg_.max_thrust, cfg_.max_thrust);
  return u;
}

void ConstellationPlant::apply(const std::vector<Vec>& u, int k) {
  for (int i = 0; i < agent_count(); ++i) {
    const Vec3 thrust = u[i];
    if (mode_ == TruthMode::kNonlinearMeanElement) {
      fleet_[i] = truth_step(fleet_[i], thrust, Tc_, cfg_);
      continue;
    }
    // Linear-model truth: the plant equals the synthesis model exactly.
    const double dm = thrust.lpNorm<1>() * Tc_ / (cfg_.isp * kConstants.g0);
    if (fleet_[i].mass - dm <= 0.0) throw PropellantError("propellant exhausted");
    const double u_bar = walker_nominal(cfg_, anchor_, time_of(k), i).u;
    const Vec dx = model_state(i, k);
    const Vec dx_next =
        stm(cfg_, Tc_) * dx + conv_matrix(cfg_, u_bar, Tc_) * (thrust / fleet_[i].mass);
    fleet_[i].elements = apply_relative(walker_nominal(cfg_, anchor_, time_of(k + 1), i),
                                        RelativeElements::from_vec(dx_next));
    fleet_[i].mass -= dm;
  }
}

std::vector<SatelliteState> perturbed_fleet(const ConstellationConfig& cfg, const Anchor& anchor,
                                            double du_m, double da_m, uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<SatelliteState> fleet;
  fleet.reserve(cfg.total);
  for (int s = 0; s < cfg.total; ++s) {
    MeanElements x = walker_nominal(cfg, anchor, anchor.t0, s);
    x.u = wrap_angle(x.u + unit(rng) * du_m / cfg.a_bar);
    x.a += unit(rng) * da_m;
    fleet.push_back({x, cfg.initial_mass});
  }
  return fleet;
}

}  // namespace ddrhc::leo
