#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>

#include "recoherence/constants.hpp"
#include "recoherence/geometry.hpp"
#include "recoherence/photon_state.hpp"
#include "recoherence/special.hpp"

namespace recoherence {

// Closed forms for the renormalized coherence functional of the quartic
// two-path contour coupled to one excited mode:
//
//   W_R      = -(8 pi alpha_fs / (V omega)) * M * g
//   W0_mode  = -(4 pi alpha_fs / (V omega)) * M          (vacuum reference)
//   W_total  = W0_mode * (1 + 2 g)
//
// with the overlap M depending only on omega*T and R, and the state
// factor g on the squeeze parameters and emission time.  g >= -1/2
// guarantees W_total <= 0 for every state, so recoherence can never
// overcome the vacuum dephasing.

struct CoherenceResult {
  double W0_mode;      // per-mode vacuum coherence functional, <= 0
  double WR;           // renormalized coherence functional
  double W_total_mode; // W0_mode + WR, <= 0
  double contrast_factor; // exp(W_total_mode), in (0, 1]
};

struct RecoherenceWindow {
  double t_i;
  double t_f;
  double delta_t; // t_f - t_i = arccos(tanh r) / omega
  double g_min;   // -(1 - e^{-2r})/2
  double g_avg;   // sinh^2 r - sinh r / arccos(tanh r)
};

// Squared overlap of the contour velocity profile with the mode's time
// dependence:
//
//   M = (16 R / (omega^4 T^4))^2 [ (omega^2 T^2 - 3) sin(omega T)
//                                  + 3 omega T cos(omega T) ]^2.
//
// Independent of t0 and nonnegative; vanishes exactly at the zeros of
// the spherical Bessel function j2(omega T).  The bracket is evaluated
// through j2 to keep the small-argument cancellation under control.
inline double mode_overlap_M(const PathFamily& p, const ModeSpec& m) {
  const double x = m.omega_bar * p.T;
  // bracket = -x^3 j2(x)
  const double bracket = -x * x * x * spherical_j2(x);
  const double pref = 16.0 * p.R / (x * x * x * x);
  return pref * pref * bracket * bracket;
}

inline double phase_alpha(const SqueezedVacuum& s, const PathFamily& p,
                          const ModeSpec& m) {
  return m.omega_bar * p.T - s.theta;
}

inline double phase_beta(const ModeSpec& m) { return 2.0 * m.omega_bar; }

// Sign factor of W_R for a squeezed vacuum:
//
//   g = eta [ mu cos(alpha + beta t0) + eta ],  mu = cosh r, eta = sinh r,
//   alpha = omega T - theta,  beta = 2 omega.
//
// Negative g (possible only below cos = -tanh r) means recoherence.
// Evaluated as eta [ mu (1 + cos c) - e^{-r} ]: near the minimum the
// direct form subtracts mu from eta and loses half the digits at large
// r, while here the small e^{-r} enters exactly.
inline double g_function(const SqueezedVacuum& s, const PathFamily& p,
                         const ModeSpec& m) {
  const double eta = std::sinh(s.r);
  const double mu = std::cosh(s.r);
  const double c = phase_alpha(s, p, m) + phase_beta(m) * p.t0;
  return eta * (mu * (1.0 + std::cos(c)) - std::exp(-s.r));
}

// Pointwise minimum of g over t0: -(1 - e^{-2r})/2, always above -1/2.
inline double g_min_closed_form(double r) {
  return -0.5 * (1.0 - std::exp(-2.0 * r));
}

// Half-width of the g < 0 interval in phase units, arccos(tanh r).
// Computed as arctan(csch r), the same angle: the direct form loses
// precision once tanh r rounds onto 1, and arcsin(sech r) loses it at
// the other end where sech r rounds onto 1, while atan and sinh stay
// well conditioned over the whole range.
inline double window_half_width_phase(double r) {
  return std::atan(1.0 / std::sinh(r));
}

// Average of g over one recoherence window.  Bounded below by -1/3.
inline double g_avg_closed_form(double r) {
  if (r <= 0.0) throw std::domain_error("g_avg_closed_form: r must be > 0");
  return std::sinh(r) * std::sinh(r) - std::sinh(r) / window_half_width_phase(r);
}

inline double coupling_prefactor(const ModeSpec& m) {
  return 8.0 * pi * fine_structure_constant / (m.V * m.omega_bar);
}

inline CoherenceResult assemble_result(double M, double g_state,
                                       const ModeSpec& m) {
  CoherenceResult res;
  res.W0_mode = -0.5 * coupling_prefactor(m) * M;
  res.WR = -coupling_prefactor(m) * M * g_state;
  res.W_total_mode = res.W0_mode + res.WR;
  res.contrast_factor = std::exp(res.W_total_mode);
  return res;
}

// Full per-mode coherence budget for a quantum state of the excited
// mode.  The state factor is g for a squeezed vacuum, nbar for a
// thermal state and 0 for the vacuum.
inline CoherenceResult coherence_functional(const PhotonState& s,
                                            const PathFamily& p,
                                            const ModeSpec& m) {
  const double M = mode_overlap_M(p, m);
  struct Visitor {
    const PathFamily& p;
    const ModeSpec& m;
    double M;
    CoherenceResult operator()(const Vacuum&) const {
      return assemble_result(M, 0.0, m);
    }
    CoherenceResult operator()(const SqueezedVacuum& sq) const {
      return assemble_result(M, g_function(sq, p, m), m);
    }
    CoherenceResult operator()(const Thermal& th) const {
      return assemble_result(M, th.nbar, m);
    }
    CoherenceResult operator()(const ClassicalCoherent&) const {
      throw std::invalid_argument(
          "coherence_functional: classical fields shift the phase instead of "
          "dephasing; use classical_averaged_contrast");
    }
  };
  return std::visit(Visitor{p, m, M}, s);
}

// Earliest emission-time interval at or after t0 = 0 in which g < 0,
// solved in closed form from cos(alpha + beta t0) < -tanh r.  Empty for
// r = 0 (g vanishes identically).
inline std::optional<RecoherenceWindow> recoherence_window(
    const SqueezedVacuum& s, const PathFamily& p, const ModeSpec& m) {
  if (s.r == 0.0) return std::nullopt;
  const double alpha = phase_alpha(s, p, m);
  const double beta = phase_beta(m);
  const double half_width = window_half_width_phase(s.r);
  // window in c = alpha + beta t0 is (pi - half_width, pi + half_width) mod 2 pi
  const double k = std::ceil((alpha + half_width - pi) / two_pi);
  RecoherenceWindow w;
  w.t_i = (pi - half_width - alpha + two_pi * k) / beta;
  w.t_f = (pi + half_width - alpha + two_pi * k) / beta;
  w.delta_t = half_width / m.omega_bar;
  w.g_min = g_min_closed_form(s.r);
  w.g_avg = g_avg_closed_form(s.r);
  return w;
}

// Window-averaged recoherence magnitude, -(8 pi alpha_fs/(V omega)) M g_avg;
// positive, since g_avg < 0 inside the window.
inline double averaged_WR(const SqueezedVacuum& s, const PathFamily& p,
                          const ModeSpec& m) {
  if (s.r <= 0.0)
    throw std::domain_error("averaged_WR: window degenerates at r = 0");
  return -coupling_prefactor(m) * mode_overlap_M(p, m) * g_avg_closed_form(s.r);
}

// Contrast multiplier left after averaging over emission times under a
// classical single-mode field.  The field turns the interference phase
// into phi(t0) = A cos(alpha' + beta t0); a uniform average of e^{i phi}
// over a full period gives |J0(A)|.  `amplitude` already carries the
// contour overlap, so only Bessel averaging remains.
inline double classical_averaged_contrast(const ClassicalCoherent& s,
                                          const PathFamily& p,
                                          const ModeSpec& m) {
  (void)p;
  (void)m;
  return std::abs(bessel_j0(s.amplitude));
}

} // namespace recoherence
