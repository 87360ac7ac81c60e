#pragma once

#include <cmath>

namespace polyharm {

// exp(-1/t) for t > 0, extended by 0: smooth, flat to all orders at t = 0.
inline double smooth_switch(double t) {
  return t > 0.0 ? std::exp(-1.0 / t) : 0.0;
}

// C-infinity step: 0 on (-inf, 0], 1 on [1, inf), strictly increasing
// between, all derivatives vanishing at both knots.
inline double smoothstep_exp(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double up = smooth_switch(t);
  const double down = smooth_switch(1.0 - t);
  return up / (up + down);
}

// Radial plateau psi: 1 on [0, 1], 0 on [2, inf), smooth in between.
inline double plateau_psi(double t) { return smoothstep_exp(2.0 - t); }

// psi(r/R): identically 1 on B_R, supported in B_2R.
inline double plateau_cutoff(double r, double R) {
  return plateau_psi(r / R);
}

}  // namespace polyharm
