#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

#include "recoherence/constants.hpp"

namespace recoherence {

// Single excited plane-wave mode in a box with periodic boundary
// conditions.  The wave travels along y with linear polarization along
// z; the electron paths live on the z axis, where the mode function
// carries no spatial phase, so correlators depend on time only.
struct ModeSpec {
  double omega_bar; // angular frequency of the excited mode
  double V;         // quantization volume
  std::array<double, 3> propagation_axis{0.0, 1.0, 0.0};
  std::array<double, 3> polarization_axis{0.0, 0.0, 1.0};

  ModeSpec(double omega_bar_, double V_) : omega_bar(omega_bar_), V(V_) {
    if (!(omega_bar > 0.0) || !std::isfinite(omega_bar))
      throw std::domain_error("ModeSpec: omega_bar must be positive");
    if (!(V > 0.0) || !std::isfinite(V))
      throw std::domain_error("ModeSpec: V must be positive");
    const double dot = propagation_axis[0] * polarization_axis[0] +
                       propagation_axis[1] * polarization_axis[1] +
                       propagation_axis[2] * polarization_axis[2];
    if (std::abs(dot) > 1e-12)
      throw std::domain_error("ModeSpec: propagation and polarization axes must be orthogonal");
  }

  double wavelength() const { return two_pi / omega_bar; }
};

struct Vacuum {};

struct SqueezedVacuum {
  double r;     // squeeze magnitude >= 0
  double theta; // squeeze phase

  SqueezedVacuum(double r_, double theta_) : r(r_), theta(theta_) {
    if (!(r >= 0.0) || !std::isfinite(r))
      throw std::domain_error("SqueezedVacuum: r must be >= 0");
    if (!std::isfinite(theta))
      throw std::domain_error("SqueezedVacuum: theta must be finite");
  }
};

struct Thermal {
  double nbar; // mean occupation >= 0

  explicit Thermal(double nbar_) : nbar(nbar_) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar))
      throw std::domain_error("Thermal: nbar must be >= 0");
  }
};

// A classical (non-fluctuating) single-mode field.  `amplitude` is the
// peak Aharonov-Bohm phase it imprints, in radians, with the contour
// overlap already folded in; see classical_averaged_contrast.
struct ClassicalCoherent {
  double amplitude;
  double phase;

  ClassicalCoherent(double amplitude_, double phase_)
      : amplitude(amplitude_), phase(phase_) {
    if (!std::isfinite(amplitude) || !std::isfinite(phase))
      throw std::domain_error("ClassicalCoherent: amplitude and phase must be finite");
  }
};

using PhotonState = std::variant<Vacuum, SqueezedVacuum, Thermal, ClassicalCoherent>;

inline const char* state_kind(const PhotonState& s) {
  struct Visitor {
    const char* operator()(const Vacuum&) const { return "vacuum"; }
    const char* operator()(const SqueezedVacuum&) const { return "squeezed"; }
    const char* operator()(const Thermal&) const { return "thermal"; }
    const char* operator()(const ClassicalCoherent&) const { return "classical"; }
  };
  return std::visit(Visitor{}, s);
}

struct SecondMoments {
  std::complex<double> m_aa; // <a^2>
  double n_occ;              // <a^dag a>
};

// Gaussian second moments of the excited mode.  The squeezed-vacuum
// convention is <a^2> = -e^{i theta} sinh r cosh r; every phase-sensitive
// result in the library traces back to this one line.
inline SecondMoments second_moments(const PhotonState& s) {
  struct Visitor {
    SecondMoments operator()(const Vacuum&) const { return {{0.0, 0.0}, 0.0}; }
    SecondMoments operator()(const SqueezedVacuum& sq) const {
      const double eta = std::sinh(sq.r);
      const double mu = std::cosh(sq.r);
      return {-std::polar(eta * mu, sq.theta), eta * eta};
    }
    SecondMoments operator()(const Thermal& th) const {
      return {{0.0, 0.0}, th.nbar};
    }
    SecondMoments operator()(const ClassicalCoherent&) const {
      throw std::invalid_argument(
          "second_moments: classical fields carry no quantum moments");
    }
  };
  return std::visit(Visitor{}, s);
}

// Symmetrized two-time correlator of the z component of the potential at
// the interferometer origin, with the vacuum value subtracted:
//
//   D_R(t, t') = 1/(2 omega V) [ 2 Re(<a^2> e^{-i omega (t+t')})
//                                + 2 <a^dag a> cos(omega (t-t')) ].
//
// Vanishes identically for the vacuum.
inline double renormalized_correlator(const PhotonState& s, const ModeSpec& m,
                                      double t, double t_prime) {
  if (std::holds_alternative<ClassicalCoherent>(s))
    throw std::invalid_argument(
        "renormalized_correlator: classical fields have no fluctuation correlator; "
        "use classical_averaged_contrast");
  const SecondMoments mom = second_moments(s);
  const double w = m.omega_bar;
  const std::complex<double> sum_phase = std::polar(1.0, -w * (t + t_prime));
  return (2.0 * std::real(mom.m_aa * sum_phase) +
          2.0 * mom.n_occ * std::cos(w * (t - t_prime))) /
         (2.0 * w * m.V);
}

// Vacuum piece of the same single-mode correlator (not renormalized);
// this is what the excited-state value is measured against.
inline double vacuum_mode_correlator(const ModeSpec& m, double t,
                                     double t_prime) {
  return std::cos(m.omega_bar * (t - t_prime)) / (2.0 * m.omega_bar * m.V);
}

} // namespace recoherence
