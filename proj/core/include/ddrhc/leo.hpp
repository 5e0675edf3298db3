#pragma once

#include "ddrhc/closed_loop.hpp"
#include "ddrhc/network.hpp"
#include "ddrhc/schedule.hpp"
#include "ddrhc/types.hpp"

#include <array>
#include <optional>
#include <random>

namespace ddrhc::leo {

// Physical constants pinned for reproducibility. The equatorial radius feeds
// the J2 secular formulas; the mean radius feeds the spherical line-of-sight
// range (2*sqrt(a^2 - (Re_mean + 80 km)^2) = 5014 km at a = 6921 km).
struct Constants {
  double mu = 3.986004418e14;        // m^3/s^2
  double Re_eq = 6378.137e3;         // m, equatorial radius
  double Re_mean = 6371.0e3;         // m, mean radius (LOS geometry)
  double J2 = 1.08262668e-3;
  double g0 = 9.80665;               // m/s^2
};
inline constexpr Constants kConstants{};

struct ConstellationConfig {
  double inclination = 0.0;      // rad
  int total = 0;                 // T satellites
  int planes = 0;                // P
  int phasing = 0;               // F
  double a_bar = 0.0;            // m, nominal semi-major axis
  double tracking_range = 0.0;   // m, coupling range R
  int max_in_neighborhood = 6;   // |D-|_max
  double max_thrust = 0.068;     // N per axis
  double isp = 1640.0;           // s
  double initial_mass = 260.0;   // kg
  double j2 = kConstants.J2;     // overridable for two-body sanity checks

  void validate() const;
};

/// Non-singular mean elements for near-circular inclined orbits; angles are
/// kept wrapped to (-pi, pi].
struct MeanElements {
  double a = 0.0;   // m
  double u = 0.0;   // rad, mean argument of latitude
  double ex = 0.0;
  double ey = 0.0;
  double i = 0.0;   // rad
  double Omega = 0.0;  // rad
};

struct Anchor {
  double t0 = 0.0;      // s
  double u0 = 0.0;      // rad
  double Omega0 = 0.0;  // rad
};

struct RelativeElements {
  double da = 0.0;  // a/a_bar - 1, dimensionless
  double du = 0.0;
  double dex = 0.0;
  double dey = 0.0;
  double di = 0.0;
  double dOmega = 0.0;

  Vec vec() const;
  static RelativeElements from_vec(const Vec& v);
};

struct SatelliteState {
  MeanElements elements;
  double mass = 0.0;  // kg
};

double wrap_angle(double x);  // to (-pi, pi]

struct SecularRates {
  double M_dot = 0.0;      // J2 secular rate on the mean anomaly (excludes n)
  double omega_dot = 0.0;  // J2 secular rate on the argument of perigee
  double Omega_dot = 0.0;  // J2 secular rate on the ascending node
};

SecularRates secular_rates(double a, double i, double j2 = kConstants.J2);
double mean_motion(double a);
/// Full drift rate of the mean argument of latitude: n + M_dot + omega_dot.
double u_drift_rate(double a, double i, double j2 = kConstants.J2);
double orbital_period(double a);

/// Nominal slot offsets of satellite `sat` (0-based) in the Walker grid.
double slot_u(const ConstellationConfig& cfg, int sat);
double slot_Omega(const ConstellationConfig& cfg, int sat);

MeanElements walker_nominal(const ConstellationConfig& cfg, const Anchor& anchor, double t,
                            int sat);

/// Least-squares anchor fit: circular mean of the de-slotted fleet angles.
Anchor compute_anchor(const std::vector<MeanElements>& fleet, const ConstellationConfig& cfg,
                      double t0);

RelativeElements relative_elements(const MeanElements& x, const MeanElements& x_bar);
/// Inverse of relative_elements around the same nominal.
MeanElements apply_relative(const MeanElements& x_bar, const RelativeElements& rel);

/// State transition matrix of the J2-linearized relative dynamics; constant
/// over time and across satellites.
Mat stm(const ConstellationConfig& cfg, double Tc);
/// Convolution matrix for TNW thrust over one step, at nominal mean argument
/// of latitude u_bar_k. Generic in (a, i) so the truth propagator can evaluate
/// it at the actual elements.
Mat conv_matrix(double a, double incl, double u_k, double Tc, double j2 = kConstants.J2);
Mat conv_matrix(const ConstellationConfig& cfg, double u_bar_k, double Tc);

Vec3 elements_to_position(const MeanElements& x);

double los_range(double a_bar);
bool los_feasible(const Vec3& p_i, const Vec3& p_j, double a_bar);

/// Range-gated coupling digraph: D-_i = {i} plus the closest others within
/// the tracking range, capped at max_in_neighborhood - 1; ties broken by
/// ascending index. Symmetric before the cap, possibly asymmetric after.
Topology coupling_topology(const std::vector<Vec3>& positions, const ConstellationConfig& cfg);

/// Output blocks H_{i,p} for the given ordered in-neighborhood: the self block
/// stacks one H_rel row pair per neighbor over H_in; neighbor blocks carry
/// -H_rel in their slot. o_i = 2(|D-_i|-1) + 4.
Mat output_block(const ConstellationConfig& cfg, const std::vector<int>& din, int i, int p);
Mat h_rel(const ConstellationConfig& cfg);
Mat h_in(const ConstellationConfig& cfg);

/// Empirically tuned weights: Q_rel = (1e4)^2 I2, Q_in = diag(1/(a_bar*1e-4)^2,
/// (1/0.5e-2)^2 I2, (1e2)^2), R = (1/C_t1)^2 I3.
Mat weight_q(const ConstellationConfig& cfg, int din_size);
Mat weight_r(const ConstellationConfig& cfg);

/// Feedback law u_i = -m * sum_j K_{i,j} dx_j with a per-axis clamp to the
/// thrust limit.
Vec3 thrust_feedback(const std::vector<std::pair<const Mat*, Vec>>& gain_state_pairs, double mass,
                     double max_thrust);

/// Surrogate nonlinear truth: Kepler + J2 secular drift evaluated at the
/// actual elements, thrust injected through the convolution structure at the
/// actual elements, mass depleted by the 1-norm law.
SatelliteState truth_step(const SatelliteState& s, const Vec3& u_thrust, double Tc,
                          const ConstellationConfig& cfg);

struct FleetMetrics {
  double mae_a = 0.0;      // m
  double mae_e = 0.0;
  double mae_i = 0.0;      // rad
  double mae_u = 0.0;      // rad, against the instantaneous-anchor nominal
  double mae_Omega = 0.0;  // rad
};

FleetMetrics metrics(const std::vector<SatelliteState>& fleet, const ConstellationConfig& cfg,
                     double t);

// ---------------------------------------------------------------------------
// Application network: the constellation as a coupled-agent LTV system.

/// Nominal fleet positions at continuous time t.
std::vector<Vec3> nominal_positions(const ConstellationConfig& cfg, const Anchor& anchor,
                                    double t);

/// Coupling topology predicted from the nominal constellation geometry at
/// step k (time k*Tc).
Topology nominal_topology(const ConstellationConfig& cfg, const Anchor& anchor, double Tc);

/// The constellation as a Network: A constant, B at the nominal u_bar_i(tau),
/// H/Q built from the (possibly restricted) in-neighborhood.
Network build_network(const ConstellationConfig& cfg, const Anchor& anchor, double Tc);

/// Line-of-sight feasibility predicate on the nominal geometry.
LinkFeasibilityPredicate los_feasibility(const ConstellationConfig& cfg, const Anchor& anchor);

enum class TruthMode { kLinearModel, kNonlinearMeanElement };

/// Fleet plant for closed-loop runs. Model-space state is the relative
/// element vector against the nominal; shape_input applies the mass scaling
/// and thrust clamp; apply advances either the linear model or the nonlinear
/// mean-element truth.
class ConstellationPlant final : public TruthPlant {
 public:
  ConstellationPlant(const ConstellationConfig& cfg, const Anchor& anchor, double Tc,
                     TruthMode mode, std::vector<SatelliteState> fleet);

  int agent_count() const override { return static_cast<int>(fleet_.size()); }
  Vec model_state(int i, int k) const override;
  Vec shape_input(int i, const Vec& raw, int k) override;
  void apply(const std::vector<Vec>& u, int k) override;

  const std::vector<SatelliteState>& fleet() const { return fleet_; }
  double time_of(int k) const { return k * Tc_; }

 private:
  ConstellationConfig cfg_;
  Anchor anchor_;
  double Tc_;
  TruthMode mode_;
  std::vector<SatelliteState> fleet_;
};

/// Uniform zero-mean initial perturbations: up to du_m meters along-track
/// (a_bar * delta_u) and da_m meters in semi-major axis.
std::vector<SatelliteState> perturbed_fleet(const ConstellationConfig& cfg, const Anchor& anchor,
                                            double du_m, double da_m, uint64_t seed);

}  // namespace ddrhc::leo
