#include "dpsyn/wind_curve.hpp"

#include <algorithm>
#include <stdexcept>

namespace dpsyn {

namespace {

// Piecewise-linear (speed m/s, power p.u.) table; interpolated below.
constexpr double kCurve[][2] = {
    {0.0, 0.0},  {3.0, 0.0},  {4.0, 0.043}, {5.0, 0.116}, {6.0, 0.225},
    {7.0, 0.373}, {8.0, 0.557}, {9.0, 0.752}, {10.0, 0.905}, {11.0, 0.978},
    {12.0, 1.0},
};
constexpr int kCurvePoints = static_cast<int>(sizeof(kCurve) / sizeof(kCurve[0]));

}  // namespace

double wind_power_pu(double speed_ms) {
  if (speed_ms <= kCurve[0][0]) return kCurve[0][1];
  if (speed_ms >= kCurve[kCurvePoints - 1][0]) return kCurve[kCurvePoints - 1][1];
  for (int i = 1; i < kCurvePoints; ++i) {
    if (speed_ms <= kCurve[i][0]) {
      const double s0 = kCurve[i - 1][0], p0 = kCurve[i - 1][1];
      const double s1 = kCurve[i][0], p1 = kCurve[i][1];
      return p0 + (p1 - p0) * (speed_ms - s0) / (s1 - s0);
    }
  }
  return kCurve[kCurvePoints - 1][1];
}

WindDataset generate_wind_dataset(int m, double speed_lo, double speed_hi, double noise_sd,
                                  Rng& rng) {
  if (m < 1) throw std::invalid_argument("dataset size must be at least 1");
  if (!(speed_lo < speed_hi)) throw std::invalid_argument("speed range is empty");
  WindDataset d;
  d.speeds = Eigen::VectorXd(m);
  d.power = Eigen::VectorXd(m);
  for (int i = 0; i < m; ++i) {
    d.speeds[i] = rng.uniform(speed_lo, speed_hi);
    d.power[i] = std::clamp(wind_power_pu(d.speeds[i]) + rng.gaussian(0.0, noise_sd), 0.0, 1.0);
  }
  return d;
}

}  // namespace dpsyn
