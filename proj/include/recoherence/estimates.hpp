#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "recoherence/coherence.hpp"
#include "recoherence/constants.hpp"
#include "recoherence/geometry.hpp"
#include "recoherence/photon_state.hpp"

namespace recoherence {

// Order-of-magnitude feasibility numbers for the window-averaged
// recoherence.  The coefficients are kept literal; these answer "is the
// effect measurable" and are not interchangeable with the exact closed
// forms.

// Factors above this stop counting as "small compared to unity" and the
// result is flagged.
inline constexpr double smallness_threshold = 0.3;

struct EstimateResult {
  double value = 0.0;
  bool valid = true;
  std::vector<std::string> warnings;

  void warn(std::string msg) {
    valid = false;
    warnings.push_back(std::move(msg));
  }
};

struct CavityEstimateInput {
  double lambda3_over_V;  // mode wavelength cubed over cavity volume
  double R_over_T;
  double lambda_over_T;

  CavityEstimateInput(double l3v, double rt, double lt)
      : lambda3_over_V(l3v), R_over_T(rt), lambda_over_T(lt) {
    if (!(l3v >= 0.0) || !(rt >= 0.0) || !(lt >= 0.0))
      throw std::invalid_argument(
          "CavityEstimateInput: factors must be finite and >= 0");
  }
};

struct BandwidthSpec {
  double delta_omega_over_omega;  // fractional bandwidth of excited modes
  double delta_Omega;             // solid angle of excited directions, sr

  BandwidthSpec(double dw, double dO)
      : delta_omega_over_omega(dw), delta_Omega(dO) {
    if (!(dw >= 0.0) || dw >= 1.0)
      throw std::invalid_argument("BandwidthSpec: need 0 <= dw/w < 1");
    if (!(dO >= 0.0) || dO > 4.0 * pi)
      throw std::invalid_argument("BandwidthSpec: need 0 <= dOmega <= 4 pi");
  }
};

// Single excited mode in a box: 8e-4 (lambda^3/V) (R/T)^2 (lambda/T)^2.
inline EstimateResult single_mode_estimate(const CavityEstimateInput& i) {
  EstimateResult res;
  res.value = 8e-4 * i.lambda3_over_V * i.R_over_T * i.R_over_T *
              i.lambda_over_T * i.lambda_over_T;
  if (i.R_over_T >= 1.0)
    res.warn("R/T >= 1: path speed is relativistic");
  if (res.value >= smallness_threshold)
    res.warn("estimate is not small compared to unity");
  return res;
}

// Lowest cavity mode with lambda ~ R: 1e-3 (R/T)^4 on 0 < R/T <= 1.
inline double cavity_estimate(double R_over_T) {
  if (!(R_over_T > 0.0) || R_over_T > 1.0)
    throw std::invalid_argument("cavity_estimate: need 0 < R/T <= 1");
  const double x2 = R_over_T * R_over_T;
  return 1e-3 * x2 * x2;
}

// Band of excited modes: 1e-2 (R/T)^2 (dw/w) dOmega.
inline EstimateResult bandwidth_estimate(double R_over_T,
                                         const BandwidthSpec& b) {
  if (!(R_over_T >= 0.0))
    throw std::invalid_argument("bandwidth_estimate: R/T must be >= 0");
  EstimateResult res;
  res.value = 1e-2 * R_over_T * R_over_T * b.delta_omega_over_omega *
              b.delta_Omega;
  if (R_over_T >= 1.0)
    res.warn("R/T >= 1: path speed is relativistic");
  if (b.delta_omega_over_omega >= smallness_threshold)
    res.warn("fractional bandwidth is not small");
  if (b.delta_Omega >= smallness_threshold)
    res.warn("solid angle is not small");
  if (res.value >= smallness_threshold)
    res.warn("estimate is not small compared to unity");
  return res;
}

struct CavityCrossCheck {
  double estimate;        // literal 1e-3 (R/T)^4
  double exact_max;       // averaged magnitude at the -1/3 bound, best omega T
  double ratio;           // estimate / exact_max
  double omega_bar_T_max; // arg max
};

// Exact counterpart of cavity_estimate: the averaged recoherence
// magnitude with the window average pinned at its -1/3 bound and
// V = lambda^3, maximized over omega*T.  Reported as a ratio only; the
// literal estimate rounds coefficients and ties lambda to R, so no
// tolerance is meaningful.
inline CavityCrossCheck cavity_cross_check(double R_over_T) {
  const double est = cavity_estimate(R_over_T);
  const PathFamily path(R_over_T, 1.0, 0.0);
  auto magnitude = [&](double x) {
    const double lambda = two_pi / x;
    const ModeSpec mode(x, lambda * lambda * lambda);
    return coupling_prefactor(mode) * mode_overlap_M(path, mode) / 3.0;
  };
  // golden-section maximum; the overlap peak sits between the origin and
  // the first j2 zero, where the magnitude is unimodal
  double a = 1.0, b = 5.5;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = magnitude(c), fd = magnitude(d);
  while (b - a > 1e-12) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = magnitude(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = magnitude(d);
    }
  }
  CavityCrossCheck out;
  out.omega_bar_T_max = 0.5 * (a + b);
  out.exact_max = magnitude(out.omega_bar_T_max);
  out.estimate = est;
  out.ratio = est / out.exact_max;
  return out;
}

} // namespace recoherence
