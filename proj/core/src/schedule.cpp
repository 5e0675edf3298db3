#include "ddrhc/schedule.hpp"

#include <cmath>
#include <numeric>

namespace ddrhc {

SchedulePlan plan_schedule(const ScheduleConfig& cfg) {
  if (cfg.Tc <= 0.0 || cfg.Tt <= 0.0) throw ValidationError("Tc and Tt must be positive");
  if (cfg.H < 1 || cfg.d < 1 || cfg.d > cfg.H)
    throw ValidationError("schedule must satisfy 1 <= d <= H");
  SchedulePlan p;
  p.Tc = cfg.Tc;
  p.Tt = cfg.Tt;
  p.rounds = cfg.H + 2;
  p.delta_minus = p.rounds * cfg.Tt;
  p.overlapping = cfg.d * cfg.Tc < p.delta_minus;
  return p;
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(std::llabs(num), den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::from_seconds(double s) {
  const double scaled = s * 1000.0;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-6)
    throw ValidationError("schedule times must have millisecond resolution for exact arithmetic");
  return Rational(static_cast<long long>(rounded), 1000);
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw ValidationError("rational division by zero");
  return Rational(num * o.den, den * o.num);
}
bool Rational::operator<(const Rational& o) const { return num * o.den < o.num * den; }

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

bool TvAdmissibility::admissible(int H, int d) const { return violated(H, d).empty(); }

std::string TvAdmissibility::violated(int H, int d) const {
  const Rational rH(H, 1), rd(d, 1);
  if (!(rH < H_bound))
    return "H < " + H_bound.str() + " violated by H=" + std::to_string(H);
  if (!(rd < d_bound))
    return "d < " + d_bound.str() + " violated by d=" + std::to_string(d);
  const Rational d_min = d_min_offset + d_min_slope * rH;
  if (rd < d_min)
    return "d >= " + d_min_offset.str() + " + " + d_min_slope.str() +
           "*H violated by (H,d)=(" + std::to_string(H) + "," + std::to_string(d) + ")";
  return {};
}

TvAdmissibility check_tv_constraints(double Tc, double Tt, double dt_max, double dt_min) {
  if (!(dt_max > dt_min) || !(dt_min > 0.0))
    throw ValidationError("check_tv_constraints needs dt_max > dt_min > 0");
  const Rational rTc = Rational::from_seconds(Tc);
  const Rational rTt = Rational::from_seconds(Tt);
  const Rational rMax = Rational::from_seconds(dt_max);
  const Rational rMin = Rational::from_seconds(dt_min);
  const Rational two(2, 1);

  TvAdmissibility a;
  a.H_bound = (rMax - two * rTt) / (rTt + rTc);  // (H+2)Tt + H*Tc < dt_max
  a.d_bound = (rMin - rTt) / (rTt + rTc);        // (d+1)Tt + d*Tc < dt_min
  a.d_min_slope = rTt / rTc;                     // d >= (H+2)Tt/Tc (non-overlap)
  a.d_min_offset = two * rTt / rTc;
  return a;
}

std::vector<int> feasibility_set(const LinkFeasibilityPredicate& pred, int unit_count, int i,
                                 int tau, int k, const ScheduleConfig& cfg) {
  const double t = k * cfg.Tc - (tau - k + 2) * cfg.Tt;
  std::vector<int> c;
  c.reserve(unit_count);
  for (int j = 0; j < unit_count; ++j) {
    if (j == i || pred(i, j, t)) c.push_back(j);
  }
  return c;
}

}  // namespace ddrhc
