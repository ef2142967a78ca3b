#pragma once

#include <Eigen/Dense>

#include "dpsyn/regression.hpp"
#include "dpsyn/rng.hpp"

namespace dpsyn {

// Normalized power output of a ~2.75 MW class turbine at the given hub-height
// wind speed, from a piecewise-linear approximation of the public curve:
// cut-in near 3 m/s, rated (1.0 p.u.) near 12 m/s. Monotone non-decreasing.
double wind_power_pu(double speed_ms);

// Synthesizes a measurement dataset: m speeds uniform on [speed_lo, speed_hi],
// power from the curve plus N(0, noise_sd) perturbation, clipped to [0, 1].
WindDataset generate_wind_dataset(int m, double speed_lo, double speed_hi, double noise_sd,
                                  Rng& rng);

}  // namespace dpsyn
