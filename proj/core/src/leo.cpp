#include "ddrhc/leo.hpp"

#include <algorithm>
#include <cmath>

namespace ddrhc::leo {

void ConstellationConfig::validate() const {
  if (total <= 0 || planes <= 0) throw ValidationError("constellation needs T > 0 and P > 0");
  if (total % planes != 0) throw ValidationError("T must be a multiple of P");
  if (phasing < 0 || phasing >= total) throw ValidationError("phasing must satisfy 0 <= F < T");
  if (a_bar <= kConstants.Re_eq) throw ValidationError("semi-major axis must exceed Earth radius");
  if (max_in_neighborhood < 1) throw ValidationError("|D-|_max must be at least 1");
  if (max_thrust <= 0.0 || isp <= 0.0 || initial_mass <= 0.0)
    throw ValidationError("thruster parameters must be positive");
}

double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * M_PI);
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

Vec RelativeElements::vec() const {
  Vec v(6);
  v << da, du, dex, dey, di, dOmega;
  return v;
}

RelativeElements RelativeElements::from_vec(const Vec& v) {
  if (v.size() != 6) throw ValidationError("relative element vector must have 6 entries");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

double mean_motion(double a) { return std::sqrt(kConstants.mu / (a * a * a)); }

double orbital_period(double a) { return 2.0 * M_PI / mean_motion(a); }

namespace {

// K = (3/4) n Re^2 J2 / a^2, the common factor of the J2 secular rates.
double j2_factor(double a, double j2) {
  const double ratio = kConstants.Re_eq / a;
  return 0.75 * mean_motion(a) * j2 * ratio * ratio;
}

}  // namespace

SecularRates secular_rates(double a, double i, double j2) {
  if (a <= kConstants.Re_eq) throw ValidationError("semi-major axis must exceed Earth radius");
  const double K = j2_factor(a, j2);
  const double s2 = std::sin(i) * std::sin(i);
  SecularRates r;
  r.M_dot = K * (2.0 - 3.0 * s2);
  r.omega_dot = K * (4.0 - 5.0 * s2);
  r.Omega_dot = -2.0 * K * std::cos(i);
  return r;
}

double u_drift_rate(double a, double i, double j2) {
  const SecularRates r = secular_rates(a, i, j2);
  return mean_motion(a) + r.M_dot + r.omega_dot;
}

double slot_u(const ConstellationConfig& cfg, int sat) {
  const int per_plane = cfg.total / cfg.planes;
  const int in_plane = sat % per_plane;
  const int plane = sat / per_plane;
  return in_plane * 2.0 * M_PI * cfg.planes / cfg.total +
         plane * 2.0 * M_PI * cfg.phasing / cfg.total;
}

double slot_Omega(const ConstellationConfig& cfg, int sat) {
  const int per_plane = cfg.total / cfg.planes;
  const int plane = sat / per_plane;
  return plane * 2.0 * M_PI / cfg.planes;
}

MeanElements walker_nominal(const ConstellationConfig& cfg, const Anchor& anchor, double t,
                            int sat) {
  if (sat < 0 || sat >= cfg.total) throw ValidationError("satellite index out of range");
  const double dt = t - anchor.t0;
  const SecularRates r = secular_rates(cfg.a_bar, cfg.inclination, cfg.j2);
  MeanElements x;
  x.a = cfg.a_bar;
  x.u = wrap_angle(anchor.u0 + slot_u(cfg, sat) + u_drift_rate(cfg.a_bar, cfg.inclination, cfg.j2) * dt);
  x.ex = 0.0;
  x.ey = 0.0;
  x.i = cfg.inclination;
  x.Omega = wrap_angle(anchor.Omega0 + slot_Omega(cfg, sat) + r.Omega_dot * dt);
  return x;
}

Anchor compute_anchor(const std::vector<MeanElements>& fleet, const ConstellationConfig& cfg,
                      double t0) {
  if (fleet.empty()) throw ValidationError("anchor fit needs a nonempty fleet");
  double su = 0.0, sO = 0.0;
  for (size_t s = 0; s < fleet.size(); ++s) {
    su += wrap_angle(fleet[s].u - slot_u(cfg, static_cast<int>(s)));
    sO += wrap_angle(fleet[s].Omega - slot_Omega(cfg, static_cast<int>(s)));
  }
  Anchor a;
  a.t0 = t0;
  a.u0 = wrap_angle(su / static_cast<double>(fleet.size()));
  a.Omega0 = wrap_angle(sO / static_cast<double>(fleet.size()));
  return a;
}

RelativeElements relative_elements(const MeanElements& x, const MeanElements& x_bar) {
  RelativeElements r;
  const double dOmega_raw = wrap_angle(x.Omega - x_bar.Omega);
  r.da = x.a / x_bar.a - 1.0;
  r.du = wrap_angle(x.u - x_bar.u) + dOmega_raw * std::cos(x_bar.i);
  r.dex = x.ex - x_bar.ex;
  r.dey = x.ey - x_bar.ey;
  r.di = x.i - x_bar.i;
  r.dOmega = dOmega_raw * std::sin(x_bar.i);
  return r;
}

MeanElements apply_relative(const MeanElements& x_bar, const RelativeElements& rel) {
  MeanElements x;
  const double dOmega_raw = rel.dOmega / std::sin(x_bar.i);
  x.a = x_bar.a * (1.0 + rel.da);
  x.Omega = wrap_angle(x_bar.Omega + dOmega_raw);
  x.u = wrap_angle(x_bar.u + rel.du - dOmega_raw * std::cos(x_bar.i));
  x.ex = x_bar.ex + rel.dex;
  x.ey = x_bar.ey + rel.dey;
  x.i = x_bar.i + rel.di;
  return x;
}

Mat stm(const ConstellationConfig& cfg, double Tc) {
  const double n = mean_motion(cfg.a_bar);
  const double K = j2_factor(cfg.a_bar, cfg.j2);
  const double ci = std::cos(cfg.inclination), si = std::sin(cfg.inclination);
  const double lambda = 1.5 * n + 3.5 * K * (3.0 * ci * ci - 1.0);
  const double domega = K * (5.0 * ci * ci - 1.0) * Tc;
  const double s2i = 2.0 * si * ci;  // sin(2i)

  Mat A = Mat::Identity(6, 6);
  A(1, 0) = -lambda * Tc;
  A(1, 4) = -4.0 * K * Tc * s2i;
  A(2, 2) = std::cos(domega);
  A(2, 3) = -std::sin(domega);
  A(3, 2) = std::sin(domega);
  A(3, 3) = std::cos(domega);
  A(5, 0) = 3.5 * K * Tc * s2i;
  A(5, 4) = 2.0 * K * Tc * si * si;
  return A;
}

Mat conv_matrix(double a, double incl, double u_k, double Tc, double j2) {
  const double n = mean_motion(a);
  const double K = j2_factor(a, j2);
  const double ci = std::cos(incl), si = std::sin(incl);
  const double s2i = 2.0 * si * ci;
  const double W = n + K * (8.0 * ci * ci - 2.0);
  const double lambda = 1.5 * n + 3.5 * K * (3.0 * ci * ci - 1.0);
  const double C = K * (5.0 * ci * ci - 1.0) / W;
  const double du = W * Tc;
  const double u_k1 = u_k + du;
  const double naw = n * a * W;
  const double naw2 = n * a * W * W;

  const double psi23 = (4.0 * K * s2i / naw2) * (std::cos(u_k1) - std::cos(u_k) + std::sin(u_k) * du);
  const double psi32 = (std::cos(u_k1) - std::cos(u_k + C * du)) / (n * a * (1.0 - C) * W);
  const double psi42 = (std::sin(u_k1) - std::sin(u_k + C * du)) / (n * a * (1.0 - C) * W);
  const double psi53 = (std::sin(u_k1) - std::sin(u_k)) / naw;
  const double psi63 = -((W + 2.0 * K * si * si) / naw2) * (std::cos(u_k1) - std::cos(u_k)) -
                       2.0 * K * si * si * std::sin(u_k) * du / naw2;

  Mat B = Mat::Zero(6, 3);
  B(0, 0) = 2.0 * du / naw;
  B(1, 0) = -lambda * du * du / naw2;
  B(1, 1) = 2.0 * du / naw;
  B(1, 2) = psi23;
  B(2, 0) = 2.0 * psi42;
  B(2, 1) = psi32;
  B(3, 0) = -2.0 * psi32;
  B(3, 1) = psi42;
  B(4, 2) = psi53;
  B(5, 0) = 3.5 * K * du * du * s2i / naw2;
  B(5, 2) = psi63;
  return B;
}

Mat conv_matrix(const ConstellationConfig& cfg, double u_bar_k, double Tc) {
  return conv_matrix(cfg.a_bar, cfg.inclination, u_bar_k, Tc, cfg.j2);
}

Vec3 elements_to_position(const MeanElements& x) {
  const double cu = std::cos(x.u), su = std::sin(x.u);
  const double cO = std::cos(x.Omega), sO = std::sin(x.Omega);
  const double ci = std::cos(x.i), si = std::sin(x.i);
  return Vec3(x.a * (cO * cu - sO * su * ci), x.a * (sO * cu + cO * su * ci), x.a * su * si);
}

double los_range(double a_bar) {
  const double graze = kConstants.Re_mean + 80.0e3;
  return 2.0 * std::sqrt(a_bar * a_bar - graze * graze);
}

bool los_feasible(const Vec3& p_i, const Vec3& p_j, double a_bar) {
  return (p_i - p_j).norm() <= los_range(a_bar);
}

namespace {

Topology::EdgeList coupling_edges(const std::vector<Vec3>& positions,
                                  const ConstellationConfig& cfg) {
  const int N = static_cast<int>(positions.size());
  const double R2 = cfg.tracking_range * cfg.tracking_range;
  Topology::EdgeList edges;
  std::vector<std::pair<double, int>> in_range;
  for (int i = 0; i < N; ++i) {
    in_range.clear();
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      const double d2 = (positions[i] - positions[j]).squaredNorm();
      if (d2 <= R2) in_range.emplace_back(d2, j);
    }
    std::sort(in_range.begin(), in_range.end());  // ties fall back to ascending index
    const size_t cap = static_cast<size_t>(cfg.max_in_neighborhood - 1);
    if (in_range.size() > cap) in_range.resize(cap);
    for (const auto& [d2, j] : in_range) edges.emplace_back(j, i);
  }
  return edges;
}

}  // namespace

Topology coupling_topology(const std::vector<Vec3>& positions, const ConstellationConfig& cfg) {
  return Topology::static_graph(static_cast<int>(positions.size()),
                                coupling_edges(positions, cfg));
}

Mat h_rel(const ConstellationConfig& cfg) {
  Mat H = Mat::Zero(2, 6);
  H(0, 1) = 1.0;
  H(0, 5) = -1.0 / std::tan(cfg.inclination);
  H(1, 5) = 1.0 / std::sin(cfg.inclination);
  return H;
}

Mat h_in(const ConstellationConfig& cfg) {
  Mat H = Mat::Zero(4, 6);
  H(0, 0) = cfg.a_bar;
  H(1, 2) = 1.0;
  H(2, 3) = 1.0;
  H(3, 4) = 1.0;
  return H;
}

Mat output_block(const ConstellationConfig& cfg, const std::vector<int>& din, int i, int p) {
  if (!std::binary_search(din.begin(), din.end(), i))
    throw ValidationError("in-neighborhood must contain the agent itself");
  std::vector<int> others;
  for (int j : din)
    if (j != i) others.push_back(j);
  const int kappa = static_cast<int>(others.size());
  const int o = 2 * kappa + 4;
  Mat H = Mat::Zero(o, 6);
  const Mat Hr = h_rel(cfg);
  if (p == i) {
    for (int l = 0; l < kappa; ++l) H.block(2 * l, 0, 2, 6) = Hr;
    H.block(2 * kappa, 0, 4, 6) = h_in(cfg);
    return H;
  }
  auto it = std::find(others.begin(), others.end(), p);
  if (it == others.end())
    throw ValidationError("output block requested for a non-neighbor");
  const int l = static_cast<int>(it - others.begin());
  H.block(2 * l, 0, 2, 6) = -Hr;
  return H;
}

Mat weight_q(const ConstellationConfig& cfg, int din_size) {
  if (din_size < 1) throw ValidationError("in-neighborhood size must be at least 1");
  const int kappa = din_size - 1;
  const int o = 2 * kappa + 4;
  Vec diag(o);
  const double q_rel = 1.0 / (1.0e-4 * 1.0e-4);
  for (int l = 0; l < 2 * kappa; ++l) diag[l] = q_rel;
  const double wa = 1.0 / (cfg.a_bar * 1.0e-4);
  diag[2 * kappa + 0] = wa * wa;
  diag[2 * kappa + 1] = 1.0 / (0.5e-2 * 0.5e-2);
  diag[2 * kappa + 2] = 1.0 / (0.5e-2 * 0.5e-2);
  diag[2 * kappa + 3] = 1.0 / (1.0e-2 * 1.0e-2);
  return diag.asDiagonal();
}

Mat weight_r(const ConstellationConfig& cfg) {
  return (1.0 / (cfg.max_thrust * cfg.max_thrust)) * Mat::Identity(3, 3);
}

Vec3 thrust_feedback(const std::vector<std::pair<const Mat*, Vec>>& gain_state_pairs, double mass,
                     double max_thrust) {
  Vec3 acc = Vec3::Zero();
  for (const auto& [K, dx] : gain_state_pairs) {
    if (!K) throw SchedulingError("thrust feedback gain unavailable");
    acc += (*K) * dx;
  }
  Vec3 u = -mass * acc;
  for (int axis = 0; axis < 3; ++axis) u[axis] = std::clamp(u[axis], -max_thrust, max_thrust);
  return u;
}

SatelliteState truth_step(const SatelliteState& s, const Vec3& u_thrust, double Tc,
                          const ConstellationConfig& cfg) {
  const double dm = u_thrust.lpNorm<1>() * Tc / (cfg.isp * kConstants.g0);
  if (s.mass - dm <= 0.0)
    throw PropellantError("propellant exhausted: mass would drop to " +
                          std::to_string(s.mass - dm) + " kg");

  const MeanElements& x = s.elements;
  MeanElements next = x;
  const SecularRates r = secular_rates(x.a, x.i, cfg.j2);
  next.u = wrap_angle(x.u + (mean_motion(x.a) + r.M_dot + r.omega_dot) * Tc);
  next.Omega = wrap_angle(x.Omega + r.Omega_dot * Tc);

  if (u_thrust.squaredNorm() > 0.0) {
    // Convolution structure evaluated at the actual elements, mapped back from
    // relative-element increments to element increments.
    const Mat B = conv_matrix(x.a, x.i, x.u, Tc, cfg.j2);
    const Vec dd = B * (u_thrust / s.mass);
    const double dOmega = dd[5] / std::sin(x.i);
    next.a += x.a * dd[0];
    next.u = wrap_angle(next.u + dd[1] - dOmega * std::cos(x.i));
    next.ex += dd[2];
    next.ey += dd[3];
    next.i += dd[4];
    next.Omega = wrap_angle(next.Omega + dOmega);
  }
  return {next, s.mass - dm};
}

FleetMetrics metrics(const std::vector<SatelliteState>& fleet, const ConstellationConfig& cfg,
                     double t) {
  if (fleet.empty()) throw ValidationError("metrics need a nonempty fleet");
  std::vector<MeanElements> elements;
  elements.reserve(fleet.size());
  for (const auto& s : fleet) elements.push_back(s.elements);
  // Instantaneous hypothetical anchor at t: post-processing only.
  const Anchor inst = compute_anchor(elements, cfg, t);

  FleetMetrics m;
  for (size_t s = 0; s < fleet.size(); ++s) {
    const MeanElements& x = fleet[s].elements;
    const MeanElements nom = walker_nominal(cfg, inst, t, static_cast<int>(s));
    m.mae_a += std::abs(x.a - cfg.a_bar);
    m.mae_e += std::hypot(x.ex, x.ey);
    m.mae_i += std::abs(x.i - cfg.inclination);
    m.mae_u += std::abs(wrap_angle(x.u - nom.u));
    m.mae_Omega += std::abs(wrap_angle(x.Omega - nom.Omega));
  }
  const double T = static_cast<double>(fleet.size());
  m.mae_a /= T;
  m.mae_e /= T;
  m.mae_i /= T;
  m.mae_u /= T;
  m.mae_Omega /= T;
  return m;
}

}  // namespace ddrhc::leo
