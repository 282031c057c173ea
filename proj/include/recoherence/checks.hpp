#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "recoherence/coherence.hpp"
#include "recoherence/estimates.hpp"
#include "recoherence/geometry.hpp"
#include "recoherence/io.hpp"
#include "recoherence/oracle.hpp"
#include "recoherence/quadrature.hpp"
#include "recoherence/rng.hpp"
#include "recoherence/special.hpp"

namespace recoherence {

// Self-contained invariant suite behind the `check` subcommand.  Every
// library-level property that can be verified in milliseconds lives
// here; the slower statistical cross-checks stay in the test suite.

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail; // empty on success
};

namespace checks_detail {

struct Failure {
  std::ostringstream msg;
};

template <class Fn>
CheckResult run_one(const std::string& name, Fn&& fn) {
  CheckResult res{name, true, ""};
  try {
    std::ostringstream detail;
    if (!fn(detail)) {
      res.pass = false;
      res.detail = detail.str();
    }
  } catch (const std::exception& e) {
    res.pass = false;
    res.detail = std::string("exception: ") + e.what();
  }
  return res;
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

} // namespace checks_detail

inline std::vector<CheckResult> run_all_checks() {
  using checks_detail::close_rel;
  using checks_detail::run_one;
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, auto fn) {
    out.push_back(run_one(name, fn));
  };

  const PathFamily path(0.05, 1.0, 0.3);
  const ModeSpec mode(3.0, 8.0);

  add("path-endpoints-return-to-origin", [&](std::ostringstream& d) {
    for (Branch b : {Branch::upper, Branch::lower}) {
      const double za = position(path, path.start_time(), b);
      const double zb = position(path, path.end_time(), b);
      if (std::abs(za) > 1e-15 || std::abs(zb) > 1e-15) {
        d << "endpoint displacement " << za << ", " << zb;
        return false;
      }
    }
    return true;
  });

  add("path-peak-displacement", [&](std::ostringstream& d) {
    const double mid = path.t0 + path.T;
    const double zu = position(path, mid, Branch::upper);
    const double zl = position(path, mid, Branch::lower);
    if (std::abs(zu - path.R) > 1e-15 * path.R || std::abs(zl + path.R) > 1e-15 * path.R) {
      d << "midpoint " << zu << ", " << zl << " expected +-" << path.R;
      return false;
    }
    return true;
  });

  add("branch-mirror-symmetry", [&](std::ostringstream& d) {
    for (const auto& s : sample_contour(path, 257)) {
      if (std::abs(s.z_upper + s.z_lower) > 1e-16 ||
          std::abs(s.zdot_upper + s.zdot_lower) > 1e-16) {
        d << "asymmetry at t = " << s.t;
        return false;
      }
    }
    return true;
  });

  add("peak-speed-formula", [&](std::ostringstream& d) {
    double vmax = 0.0;
    for (const auto& s : sample_contour(path, 20001))
      vmax = std::max(vmax, std::abs(s.zdot_upper));
    const double expected = peak_speed_coefficient * path.R / path.T;
    if (!close_rel(vmax, expected, 1e-6)) {
      d << "grid max " << vmax << " vs formula " << expected;
      return false;
    }
    return true;
  });

  add("gauss-legendre-exactness", [&](std::ostringstream& d) {
    const QuadratureRule rule = gauss_legendre(8);
    // degree 15 polynomial integrates exactly on [-1, 1]
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i];
      double p = 0.0;
      for (int k = 0; k <= 15; ++k) p += std::pow(x, k);
      acc += rule.weights[i] * p;
    }
    double exact = 0.0;
    for (int k = 0; k <= 15; k += 2) exact += 2.0 / (k + 1);
    if (std::abs(acc - exact) > 1e-13) {
      d << "sum " << acc << " vs " << exact;
      return false;
    }
    return true;
  });

  add("panel-rule-convergence-order", [&](std::ostringstream& d) {
    // 2-point Gauss panels carry order 4; halving h must shrink the
    // error by ~16 on a smooth integrand
    auto integrate = [](int panels) {
      return panel_integrate([](double x) { return std::cos(x); }, 0.0, 1.0,
                             panels, 2);
    };
    const double exact = std::sin(1.0);
    const double e1 = std::abs(integrate(4) - exact);
    const double e2 = std::abs(integrate(8) - exact);
    const double order = std::log2(e1 / e2);
    if (!(order > 3.5 && order < 4.5)) {
      d << "observed order " << order;
      return false;
    }
    return true;
  });

  add("spherical-j2-zeros", [&](std::ostringstream& d) {
    const double expected[3] = {5.7634591968945498, 9.0950113304763551,
                                12.322940970566582};
    for (int n = 1; n <= 3; ++n) {
      const double z = spherical_j2_zero(n);
      if (std::abs(z - expected[n - 1]) > 1e-10) {
        d << "zero " << n << " = " << z;
        return false;
      }
    }
    return true;
  });

  add("j2-series-seam", [&](std::ostringstream& d) {
    // series and closed form must agree where the evaluation switches
    for (double x : {0.49, 0.4999999, 0.5000001, 0.51}) {
      const double closed =
          (3.0 / (x * x) - 1.0) * std::sin(x) / x - 3.0 * std::cos(x) / (x * x);
      if (!close_rel(spherical_j2(x), closed, 1e-11)) {
        d << "mismatch at x = " << x;
        return false;
      }
    }
    const double at_pi = spherical_j2(pi);
    if (!close_rel(at_pi, 3.0 / (pi * pi), 1e-13)) {
      d << "j2(pi) = " << at_pi;
      return false;
    }
    return true;
  });

  add("g-minimum-bound", [&](std::ostringstream& d) {
    for (double r : {0.3, 1.0, 2.0}) {
      const double gm = g_min_closed_form(r);
      double lowest = 1e300;
      for (int i = 0; i < 2000; ++i) {
        PathFamily p(path.R, path.T, i * 0.001 * pi / mode.omega_bar);
        lowest = std::min(lowest, g_function(SqueezedVacuum(r, 0.7), p, mode));
      }
      if (lowest < gm - 1e-12 || !(gm > -0.5)) {
        d << "r = " << r << ": scan min " << lowest << " vs " << gm;
        return false;
      }
    }
    return true;
  });

  add("g-periodicity", [&](std::ostringstream& d) {
    const SqueezedVacuum s(1.3, 2.1);
    const double period = pi / mode.omega_bar;
    for (int i = 0; i < 50; ++i) {
      const double t0 = 0.13 * i;
      const double a = g_function(s, PathFamily(path.R, path.T, t0), mode);
      const double b =
          g_function(s, PathFamily(path.R, path.T, t0 + period), mode);
      if (std::abs(a - b) > 1e-11 * std::max(1.0, std::abs(a))) {
        d << "t0 = " << t0 << ": " << a << " vs " << b;
        return false;
      }
    }
    return true;
  });

  add("unitarity-fuzz", [&](std::ostringstream& d) {
    SplitMix64 rng(20260822ULL);
    for (int i = 0; i < 2000; ++i) {
      const double r = rng.next_uniform(0.0, 4.0);
      const double theta = rng.next_uniform(0.0, two_pi);
      const double t0 = rng.next_uniform(0.0, 3.0);
      const double wT = rng.next_uniform(0.5, 6.0);
      const double RT = rng.next_uniform(0.01, 0.1);
      const PathFamily p(RT, 1.0, t0);
      const ModeSpec m(wT, rng.next_uniform(0.5, 20.0));
      const CoherenceResult res =
          coherence_functional(SqueezedVacuum(r, theta), p, m);
      if (res.W_total_mode > 1e-18) {
        d << "tuple " << i << ": W_total = " << res.W_total_mode;
        return false;
      }
    }
    return true;
  });

  add("g-avg-monotone-bounded", [&](std::ostringstream& d) {
    double prev = 0.0;
    bool first = true;
    for (int i = 0; i < 60; ++i) {
      const double r = 0.05 * std::pow(8.0 / 0.05, i / 59.0);
      const double ga = g_avg_closed_form(r);
      if (!(ga > -1.0 / 3.0)) {
        d << "r = " << r << ": g_avg = " << ga << " at or below -1/3";
        return false;
      }
      if (!first && !(ga < prev)) {
        d << "not decreasing at r = " << r;
        return false;
      }
      prev = ga;
      first = false;
    }
    return true;
  });

  add("overlap-nonnegative-with-j2-zeros", [&](std::ostringstream& d) {
    for (int i = 1; i <= 1200; ++i) {
      const double wT = 0.01 * i;
      const double M = mode_overlap_M(PathFamily(0.05, 1.0, 0.0), ModeSpec(wT, 1.0));
      if (M < 0.0) {
        d << "M < 0 at omega T = " << wT;
        return false;
      }
    }
    for (int n = 1; n <= 3; ++n) {
      const double z = spherical_j2_zero(n);
      const double M = mode_overlap_M(PathFamily(0.05, 1.0, 0.0), ModeSpec(z, 1.0));
      if (M > 1e-22) {
        d << "M at j2 zero " << n << " = " << M;
        return false;
      }
    }
    return true;
  });

  add("thermal-contrast-monotonicity", [&](std::ostringstream& d) {
    double prev = 2.0;
    for (double nbar : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      const double c =
          coherence_functional(Thermal(nbar), path, mode).contrast_factor;
      if (!(c < prev)) {
        d << "contrast did not fall at nbar = " << nbar;
        return false;
      }
      prev = c;
    }
    return true;
  });

  add("g-full-period-average", [&](std::ostringstream& d) {
    const SqueezedVacuum s(1.5, 0.4);
    const int n = 720;
    const double period = pi / mode.omega_bar;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += g_function(s, PathFamily(path.R, path.T, i * period / n), mode);
    const double mean = acc / n;
    const double eta = std::sinh(s.r);
    if (std::abs(mean - eta * eta) > 1e-10) {
      d << "period mean " << mean << " vs sinh^2 r = " << eta * eta;
      return false;
    }
    return true;
  });

  add("window-boundaries-and-extremum", [&](std::ostringstream& d) {
    for (double r : {0.4, 1.0, 3.0}) {
      const SqueezedVacuum s(r, 1.9);
      const auto w = recoherence_window(s, path, mode);
      if (!w) {
        d << "no window at r = " << r;
        return false;
      }
      const double scale = std::sinh(r) * std::cosh(r);
      const double gi = g_function(s, PathFamily(path.R, path.T, w->t_i), mode);
      const double gf = g_function(s, PathFamily(path.R, path.T, w->t_f), mode);
      const double gm = g_function(
          s, PathFamily(path.R, path.T, 0.5 * (w->t_i + w->t_f)), mode);
      if (std::abs(gi) > 1e-10 * scale || std::abs(gf) > 1e-10 * scale) {
        d << "r = " << r << ": edge g " << gi << ", " << gf;
        return false;
      }
      if (std::abs(gm - w->g_min) > 1e-12 * std::max(1.0, std::abs(w->g_min))) {
        d << "r = " << r << ": center g " << gm << " vs " << w->g_min;
        return false;
      }
      if (w->t_i < 0.0 || !(w->delta_t > 0.0)) {
        d << "r = " << r << ": window [" << w->t_i << ", " << w->t_f << "]";
        return false;
      }
    }
    return true;
  });

  add("window-average-two-routes", [&](std::ostringstream& d) {
    for (double r : {0.5, 1.0, 2.0}) {
      const SqueezedVacuum s(r, 0.0);
      const auto w = recoherence_window(s, path, mode);
      const double numeric = panel_integrate(
          [&](double t0) {
            return g_function(s, PathFamily(path.R, path.T, t0), mode);
          },
          w->t_i, w->t_f, 8, 12) / (w->t_f - w->t_i);
      if (!close_rel(numeric, w->g_avg, 1e-9)) {
        d << "r = " << r << ": quadrature " << numeric << " vs closed "
          << w->g_avg;
        return false;
      }
    }
    return true;
  });

  add("oracle-ratio-one-tuple", [&](std::ostringstream& d) {
    const PathFamily p(0.07, 1.0, 0.8);
    const ModeSpec m(2.6, 5.0);
    const SqueezedVacuum s(1.1, 0.9);
    const double numeric = numeric_WR(SqueezedVacuum(s.r, s.theta), p, m);
    const CoherenceResult closed =
        coherence_functional(phase_aligned_state(s, p, m), p, m);
    if (!close_rel(numeric, closed.WR, 1e-7)) {
      d << "numeric " << numeric << " vs closed " << closed.WR;
      return false;
    }
    return true;
  });

  add("oracle-thermal-linearity", [&](std::ostringstream& d) {
    const PathFamily p(0.07, 1.0, 0.8);
    const ModeSpec m(2.6, 5.0);
    const double unit = numeric_WR(Thermal(1.0), p, m);
    const double scaled = numeric_WR(Thermal(0.7), p, m);
    if (!close_rel(scaled, 0.7 * unit, 1e-8)) {
      d << "ratio " << scaled / unit;
      return false;
    }
    return true;
  });

  add("oracle-t0-period-shift", [&](std::ostringstream& d) {
    const ModeSpec m(2.6, 5.0);
    const SqueezedVacuum s(0.9, 2.2);
    const double a = numeric_WR(s, PathFamily(0.07, 1.0, 0.5), m);
    const double b =
        numeric_WR(s, PathFamily(0.07, 1.0, 0.5 + pi / m.omega_bar), m);
    if (!close_rel(a, b, 1e-8)) {
      d << a << " vs shifted " << b;
      return false;
    }
    return true;
  });

  add("fringe-determinism", [&](std::ostringstream& d) {
    FringeExperiment f;
    f.n_samples = 5000;
    f.sigma_sq = 0.4;
    f.seed = 99;
    const FringeResult a = fringe_contrast(f);
    const FringeResult b = fringe_contrast(f);
    if (a.contrast != b.contrast || a.stat_error != b.stat_error) {
      d << "same seed diverged";
      return false;
    }
    f.seed = 100;
    if (fringe_contrast(f).contrast == a.contrast) {
      d << "different seeds coincided";
      return false;
    }
    return true;
  });

  add("estimate-monotonicity", [&](std::ostringstream& d) {
    const double base =
        single_mode_estimate(CavityEstimateInput(1.0, 0.05, 0.2)).value;
    if (!(single_mode_estimate(CavityEstimateInput(2.0, 0.05, 0.2)).value > base) ||
        !(single_mode_estimate(CavityEstimateInput(1.0, 0.10, 0.2)).value > base) ||
        !(single_mode_estimate(CavityEstimateInput(1.0, 0.05, 0.4)).value > base)) {
      d << "single-mode estimate not increasing in a factor";
      return false;
    }
    if (!(cavity_estimate(0.2) > cavity_estimate(0.1))) {
      d << "cavity estimate not increasing";
      return false;
    }
    const BandwidthSpec narrow(0.01, 0.1), wide(0.02, 0.1);
    if (!(bandwidth_estimate(0.1, wide).value >
          bandwidth_estimate(0.1, narrow).value)) {
      d << "bandwidth estimate not increasing";
      return false;
    }
    return true;
  });

  add("estimate-coefficient-consistency", [&](std::ostringstream& d) {
    // single excited mode with V = lambda^3 and lambda = R against the
    // rounded cavity coefficient: exact ratio 0.8
    const double rt = 0.07;
    const double single =
        single_mode_estimate(CavityEstimateInput(1.0, rt, rt)).value;
    const double cavity = cavity_estimate(rt);
    if (!close_rel(single / cavity, 0.8, 1e-12)) {
      d << "ratio " << single / cavity;
      return false;
    }
    return true;
  });

  add("estimate-smallness-flags", [&](std::ostringstream& d) {
    if (single_mode_estimate(CavityEstimateInput(1.0, 0.05, 0.2)).warnings
            .size() != 0) {
      d << "small input flagged";
      return false;
    }
    if (single_mode_estimate(CavityEstimateInput(1.0, 1.5, 0.2)).valid) {
      d << "relativistic input not flagged";
      return false;
    }
    if (bandwidth_estimate(0.1, BandwidthSpec(0.5, 0.1)).valid) {
      d << "wide bandwidth not flagged";
      return false;
    }
    return true;
  });

  add("csv-round-trip", [&](std::ostringstream& d) {
    Table t;
    t.meta.config_json = "{\"probe\":1}";
    t.meta.seed = 7;
    t.meta.rng = SplitMix64::name();
    t.columns = {"a", "b"};
    t.rows = {{0.1, -3.0e-17}, {1.0 / 3.0, 2304.0 / std::pow(pi, 6)}};
    std::ostringstream os;
    write_table_csv(os, t);
    std::istringstream is(os.str());
    const Table back = read_table_csv(is);
    if (back.columns != t.columns || back.rows != t.rows ||
        back.meta.seed != t.meta.seed) {
      d << "round trip altered the table";
      return false;
    }
    return true;
  });

  return out;
}

} // namespace recoherence
