#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "recoherence/constants.hpp"

namespace recoherence {

enum class Branch { upper, lower };

// Two mirror-symmetric electron trajectories forming the closed contour
// of an interference experiment:
//
//   z(t) = +- (R/T^4) [(t - t0 - T)^2 - T^2]^2,    t in [t0, t0 + 2T].
//
// Both branches leave z = 0 at t0, reach +-R at t0 + T and rejoin at
// t0 + 2T.  Times outside the flight interval are a domain error, not
// zero-extended.
struct PathFamily {
  double R;  // maximum half-separation
  double T;  // half flight time
  double t0; // emission time

  PathFamily(double R_, double T_, double t0_) : R(R_), T(T_), t0(t0_) {
    if (!(R > 0.0) || !std::isfinite(R))
      throw std::domain_error("PathFamily: R must be positive");
    if (!(T > 0.0) || !std::isfinite(T))
      throw std::domain_error("PathFamily: T must be positive");
    if (!std::isfinite(t0))
      throw std::domain_error("PathFamily: t0 must be finite");
    if (peak_speed() >= 1.0)
      throw std::domain_error("PathFamily: peak speed " +
                              std::to_string(peak_speed()) +
                              " reaches the speed of light; need T >> R");
  }

  double start_time() const { return t0; }
  double end_time() const { return t0 + 2.0 * T; }

  double peak_speed() const { return peak_speed_coefficient * R / T; }

  // True when the motion is fast enough that the non-relativistic
  // treatment becomes questionable.
  bool relativistic_flag() const {
    return peak_speed() >= relativistic_warning_speed;
  }
};

struct ContourSample {
  double t;
  double z_upper;
  double z_lower;
  double zdot_upper;
  double zdot_lower;
};

namespace detail {
inline void require_in_flight(const PathFamily& p, double t) {
  if (t < p.start_time() || t > p.end_time())
    throw std::domain_error("path evaluated outside the flight interval [t0, t0+2T]");
}
} // namespace detail

inline double position(const PathFamily& p, double t, Branch branch) {
  detail::require_in_flight(p, t);
  const double s = t - p.t0 - p.T;
  const double q = s * s - p.T * p.T;
  const double z = p.R / (p.T * p.T * p.T * p.T) * q * q;
  return branch == Branch::upper ? z : -z;
}

inline double velocity(const PathFamily& p, double t, Branch branch) {
  detail::require_in_flight(p, t);
  const double s = t - p.t0 - p.T;
  const double v = 4.0 * p.R / (p.T * p.T * p.T * p.T) * s * (s * s - p.T * p.T);
  return branch == Branch::upper ? v : -v;
}

// Equispaced samples of both branches over the full flight interval,
// endpoints included; suitable for composite rules and for inspection.
inline std::vector<ContourSample> sample_contour(const PathFamily& p,
                                                 int n_points) {
  if (n_points < 2)
    throw std::invalid_argument("sample_contour: n_points must be >= 2");
  std::vector<ContourSample> samples;
  samples.reserve(n_points);
  const double span = 2.0 * p.T;
  for (int i = 0; i < n_points; ++i) {
    // clamp the last node onto the endpoint to keep it in-domain
    double t = p.t0 + span * static_cast<double>(i) / (n_points - 1);
    if (i == n_points - 1) t = p.end_time();
    ContourSample s;
    s.t = t;
    s.z_upper = position(p, t, Branch::upper);
    s.z_lower = -s.z_upper;
    s.zdot_upper = velocity(p, t, Branch::upper);
    s.zdot_lower = -s.zdot_upper;
    samples.push_back(s);
  }
  return samples;
}

} // namespace recoherence
