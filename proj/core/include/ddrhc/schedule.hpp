#pragma once

#include "ddrhc/types.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace ddrhc {

struct ScheduleConfig {
  double Tc = 1.0;  // control discretization time (s)
  double Tt = 1.0;  // interval between allowed communication instants (s)
  int H = 1;        // window length (steps)
  int d = 1;        // gains used per window (steps)
};

struct SchedulePlan {
  double delta_minus = 0.0;  // lead time (H+2)*Tt (s)
  int rounds = 0;            // H+2 transmission instants
  bool overlapping = false;  // d*Tc < delta_minus: consecutive windows overlap

  double Tc = 0.0, Tt = 0.0;
  double start_time(int k) const { return k * Tc - delta_minus; }
};

/// Window scheduling arithmetic: the synthesis for window {k,...,k+H-1} runs
/// H+2 transmissions at rate 1/Tt and must start delta_minus before k*Tc.
SchedulePlan plan_schedule(const ScheduleConfig& cfg);

/// Exact rational value (long long num/den, normalized, den > 0).
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  static Rational from_seconds(double s);  // exact for millisecond-resolution inputs

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

/// Admissible (H, d) region under a time-varying topology with bounded
/// line-of-sight windows: H < (dt_max - 2Tt)/(Tt + Tc), d < (dt_min - Tt)/(Tt + Tc),
/// and the non-overlap condition d >= (H + 2) Tt / Tc.
struct TvAdmissibility {
  Rational H_bound;        // H must be strictly below this
  Rational d_bound;        // d must be strictly below this
  Rational d_min_offset;   // d >= d_min_offset + d_min_slope * H
  Rational d_min_slope;

  bool admissible(int H, int d) const;
  std::string violated(int H, int d) const;  // empty when admissible
};

TvAdmissibility check_tv_constraints(double Tc, double Tt, double dt_max, double dt_min);

/// Feasibility sets C_i(tau) for the time-varying algorithm: the predicate is
/// evaluated at the wall-clock instant t = k*Tc - (tau - k + 2)*Tt at which
/// the data exchange concerning step tau happens. The unit itself is always
/// a member.
using LinkFeasibilityPredicate = std::function<bool(int i, int j, double t_wallclock)>;

std::vector<int> feasibility_set(const LinkFeasibilityPredicate& pred, int unit_count, int i,
                                 int tau, int k, const ScheduleConfig& cfg);

}  // namespace ddrhc
