#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "recoherence/constants.hpp"
#include "recoherence/geometry.hpp"
#include "recoherence/photon_state.hpp"
#include "recoherence/quadrature.hpp"
#include "recoherence/rng.hpp"

namespace recoherence {

// Numerical cross-checks that bypass every closed form: the coherence
// functional is recomputed by brute-force quadrature of the double
// contour integral, and the contrast law is recomputed by Monte Carlo
// sampling of the interference pattern.

struct QuadratureSpec {
  int n_panels = 4;           // starting panels per time axis
  int points_per_panel = 12;  // Gauss-Legendre order inside each panel
  int refinement_factor = 2;
  double rel_tol = 1e-8;
  int max_panels = 1 << 20;

  void validate() const {
    if (n_panels < 1 || points_per_panel < 2 || refinement_factor < 2 ||
        max_panels < n_panels)
      throw std::invalid_argument("QuadratureSpec: degenerate refinement plan");
    if (!(rel_tol > 0.0))
      throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
  }
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string what, double prev, double curr, int panels)
      : std::runtime_error(std::move(what)),
        previous(prev),
        current(curr),
        panels_tried(panels) {}
  double previous;
  double current;
  int panels_tried;
};

struct QuadratureOutcome {
  double value;
  int panels; // panels per axis at which the gate closed
};

namespace detail {

// One resolution level of -2 pi alpha_fs oint oint dz dz' D(t, t').
// The closed contour is the upper branch minus the time-reversed lower
// branch, so each line element contributes (zdot_u - zdot_l) dt = 2 v dt.
template <class Correlator>
double contour_double_integral(const PathFamily& p, Correlator&& D, int panels,
                               int points) {
  const PanelNodes grid =
      panel_nodes(p.start_time(), p.end_time(), panels, points);
  const std::size_t n = grid.t.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i)
    u[i] = 2.0 * grid.w[i] * velocity(p, grid.t[i], Branch::upper);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += u[j] * D(grid.t[i], grid.t[j]);
    acc += u[i] * row;
  }
  return -2.0 * pi * fine_structure_constant * acc;
}

// Magnitude the integral would have if the correlator sat at its
// envelope 1/(2 omega V) the whole flight; |oint dz| = 2 * 2R.  Used as
// the scale for the convergence gate so that results compatible with
// zero stop refining instead of chasing a relative target on roundoff.
inline double integral_scale(const PathFamily& p, const ModeSpec& m) {
  const double path = 4.0 * p.R;
  return 2.0 * pi * fine_structure_constant * path * path /
         (2.0 * m.omega_bar * m.V);
}

template <class Correlator>
QuadratureOutcome converge_contour_integral(const PathFamily& p,
                                            const ModeSpec& m, Correlator&& D,
                                            const QuadratureSpec& q) {
  q.validate();
  const double floor = integral_scale(p, m);
  double prev = 0.0, curr = 0.0;
  bool have_prev = false;
  int panels = q.n_panels;
  for (;; panels *= q.refinement_factor) {
    curr = contour_double_integral(p, D, panels, q.points_per_panel);
    if (have_prev) {
      const double scale = std::max(std::abs(curr), floor);
      if (std::abs(curr - prev) <= q.rel_tol * scale) return {curr, panels};
    }
    if (panels > q.max_panels / q.refinement_factor) break;
    prev = curr;
    have_prev = true;
  }
  throw ConvergenceError("contour quadrature failed to converge", prev, curr,
                         panels);
}

} // namespace detail

inline QuadratureOutcome numeric_WR_detailed(const PhotonState& s,
                                             const PathFamily& p,
                                             const ModeSpec& m,
                                             const QuadratureSpec& q = {}) {
  if (std::holds_alternative<ClassicalCoherent>(s))
    throw std::invalid_argument(
        "numeric_WR: classical fields carry no quantum correlator");
  return detail::converge_contour_integral(
      p, m, [&](double t, double tp) { return renormalized_correlator(s, m, t, tp); },
      q);
}

inline double numeric_WR(const PhotonState& s, const PathFamily& p,
                         const ModeSpec& m, const QuadratureSpec& q = {}) {
  return numeric_WR_detailed(s, p, m, q).value;
}

inline QuadratureOutcome numeric_W0_mode_detailed(const PathFamily& p,
                                                  const ModeSpec& m,
                                                  const QuadratureSpec& q = {}) {
  return detail::converge_contour_integral(
      p, m, [&](double t, double tp) { return vacuum_mode_correlator(m, t, tp); },
      q);
}

inline double numeric_W0_mode(const PathFamily& p, const ModeSpec& m,
                              const QuadratureSpec& q = {}) {
  return numeric_W0_mode_detailed(p, m, q).value;
}

// The time-domain correlator quotes the squeeze phase against the mode
// function at t = 0; the closed form quotes it against the flight
// midpoint, which shifts theta by omega*T.  Apply this before comparing
// the two routes on the same inputs.
inline SqueezedVacuum phase_aligned_state(const SqueezedVacuum& s,
                                          const PathFamily& p,
                                          const ModeSpec& m) {
  return SqueezedVacuum{s.r, s.theta - m.omega_bar * p.T};
}

// Monte Carlo interference pattern.  Each electron lands with phase
// phi = mean_phase + Normal(0, sigma_sq) + A cos(angle), angle uniform,
// the last term modeling a classical single-mode field averaged over
// emission time.  Contrast falls out either as |<e^{i phi}>| or from
// the extrema of the binned screen pattern; both are reported.
struct FringeExperiment {
  std::uint64_t n_samples = 100000;
  double sigma_sq = 0.0;
  double mean_phase = 0.0;
  std::uint64_t seed = 1;
  int n_screen_bins = 64;
  double classical_amplitude = 0.0;

  void validate() const {
    if (n_samples < 1000)
      throw std::invalid_argument("FringeExperiment: need at least 1000 samples");
    if (!(sigma_sq >= 0.0))
      throw std::invalid_argument("FringeExperiment: sigma_sq must be >= 0");
    if (n_screen_bins < 2)
      throw std::invalid_argument("FringeExperiment: need at least 2 screen bins");
    if (!std::isfinite(mean_phase) || !std::isfinite(classical_amplitude))
      throw std::invalid_argument("FringeExperiment: phases must be finite");
  }
};

struct FringeResult {
  double contrast;        // |sample mean of e^{i phi}|
  double stat_error;      // standard error of contrast (delta method)
  double binned_contrast; // (max - min)/(max + min) of the screen pattern
  std::vector<double> screen; // mean intensity per screen-phase bin
};

inline FringeResult fringe_contrast(const FringeExperiment& f) {
  f.validate();
  SplitMix64 rng(f.seed);
  const double sigma = std::sqrt(f.sigma_sq);
  double sc = 0.0, ss = 0.0, scc = 0.0, sss = 0.0, scs = 0.0;
  for (std::uint64_t k = 0; k < f.n_samples; ++k) {
    double phi = f.mean_phase;
    if (sigma > 0.0) phi += sigma * rng.next_normal();
    if (f.classical_amplitude != 0.0)
      phi += f.classical_amplitude * std::cos(rng.next_uniform(0.0, two_pi));
    const double c = std::cos(phi), s = std::sin(phi);
    sc += c;
    ss += s;
    scc += c * c;
    sss += s * s;
    scs += c * s;
  }
  const double n = static_cast<double>(f.n_samples);
  const double mc = sc / n, ms = ss / n;
  const double r = std::hypot(mc, ms);

  FringeResult out;
  out.contrast = r;
  // variance of the two sample means, then project along the gradient
  // of sqrt(mc^2 + ms^2)
  const double var_c = (scc / n - mc * mc) / n;
  const double var_s = (sss / n - ms * ms) / n;
  const double cov = (scs / n - mc * ms) / n;
  out.stat_error =
      r > 0.0 ? std::sqrt(std::max(0.0, mc * mc * var_c + 2.0 * mc * ms * cov +
                                            ms * ms * var_s)) /
                    r
              : std::sqrt(std::max({var_c, var_s, 0.0}));

  // screen intensity accumulated per bin: sum over samples of
  // 1 + cos(x_b + phi) collapses onto the two sums above
  out.screen.resize(static_cast<std::size_t>(f.n_screen_bins));
  double imax = -1.0, imin = 3.0;
  for (int b = 0; b < f.n_screen_bins; ++b) {
    const double x = two_pi * (b + 0.5) / f.n_screen_bins;
    const double val = 1.0 + std::cos(x) * mc - std::sin(x) * ms;
    out.screen[static_cast<std::size_t>(b)] = val;
    imax = std::max(imax, val);
    imin = std::min(imin, val);
  }
  out.binned_contrast = (imax - imin) / (imax + imin);
  return out;
}

} // namespace recoherence
