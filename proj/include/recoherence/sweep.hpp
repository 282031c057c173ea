#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "recoherence/coherence.hpp"
#include "recoherence/geometry.hpp"
#include "recoherence/io.hpp"
#include "recoherence/photon_state.hpp"

namespace recoherence {

// A complete dimensionless problem statement: geometry and mode are
// specified by ratios, with the flight time T = 1 fixing the scale.
struct Scenario {
  double R_over_T = 0.05;
  double t0_over_T = 0.0;
  double omega_bar_T = 3.0;
  double V_over_lambda3 = 1.0;
  std::string state_kind = "squeezed"; // vacuum | squeezed | thermal | classical
  double r = 1.0;
  double theta = 0.0;
  double nbar = 0.0;
  double amplitude = 1.0; // classical peak phase, radians
  double phase = 0.0;

  PathFamily path() const { return PathFamily(R_over_T, 1.0, t0_over_T); }

  ModeSpec mode() const {
    const double lambda = two_pi / omega_bar_T;
    if (!(V_over_lambda3 > 0.0))
      throw std::domain_error("Scenario: V/lambda^3 must be positive");
    return ModeSpec(omega_bar_T, V_over_lambda3 * lambda * lambda * lambda);
  }

  PhotonState photon_state() const {
    if (state_kind == "vacuum") return Vacuum{};
    if (state_kind == "squeezed") return SqueezedVacuum(r, theta);
    if (state_kind == "thermal") return Thermal(nbar);
    if (state_kind == "classical") return ClassicalCoherent(amplitude, phase);
    throw std::invalid_argument("Scenario: unknown state '" + state_kind + "'");
  }
};

enum class SweepParam { r, theta, t0_over_T, omega_bar_T, R_over_T, nbar };

inline std::optional<SweepParam> parse_sweep_param(const std::string& name) {
  if (name == "r") return SweepParam::r;
  if (name == "theta") return SweepParam::theta;
  if (name == "t0_over_T" || name == "t0-over-T") return SweepParam::t0_over_T;
  if (name == "omega_bar_T" || name == "omega-bar-T")
    return SweepParam::omega_bar_T;
  if (name == "R_over_T" || name == "R-over-T") return SweepParam::R_over_T;
  if (name == "nbar") return SweepParam::nbar;
  return std::nullopt;
}

inline const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::r: return "r";
    case SweepParam::theta: return "theta";
    case SweepParam::t0_over_T: return "t0_over_T";
    case SweepParam::omega_bar_T: return "omega_bar_T";
    case SweepParam::R_over_T: return "R_over_T";
    case SweepParam::nbar: return "nbar";
  }
  return "?";
}

inline void set_sweep_param(Scenario& s, SweepParam p, double v) {
  switch (p) {
    case SweepParam::r: s.r = v; break;
    case SweepParam::theta: s.theta = v; break;
    case SweepParam::t0_over_T: s.t0_over_T = v; break;
    case SweepParam::omega_bar_T: s.omega_bar_T = v; break;
    case SweepParam::R_over_T: s.R_over_T = v; break;
    case SweepParam::nbar: s.nbar = v; break;
  }
}

struct GridAxis {
  SweepParam param;
  double start;
  double stop;
  int count;
  bool log_scale = false;

  std::vector<double> values() const {
    if (count < 1) throw std::invalid_argument("GridAxis: count must be >= 1");
    if (log_scale && (!(start > 0.0) || !(stop > 0.0)))
      throw std::invalid_argument("GridAxis: log scale needs positive bounds");
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
      v[0] = start;
      return v;
    }
    if (log_scale) {
      const double la = std::log(start), lb = std::log(stop);
      for (int i = 0; i < count; ++i)
        v[static_cast<std::size_t>(i)] =
            std::exp(la + (lb - la) * i / (count - 1));
    } else {
      for (int i = 0; i < count; ++i)
        v[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
    }
    return v;
  }
};

// Runs f(0..n-1) on `jobs` threads; work is handed out through a shared
// counter and each result lands at its own index, so output order never
// depends on scheduling.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& f) {
  if (jobs < 1) jobs = 1;
  const std::size_t hw = std::thread::hardware_concurrency();
  if (hw > 0) jobs = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(jobs), std::max<std::size_t>(hw, 1)));
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    });
  for (auto& th : pool) th.join();
}

// One evaluated grid point, in the fixed column order used by emitted
// tables.
inline std::vector<std::string> sweep_columns(
    const std::vector<SweepParam>& axes) {
  std::vector<std::string> cols;
  for (auto a : axes) cols.emplace_back(sweep_param_name(a));
  for (const char* c :
       {"M", "g", "WR", "W0_mode", "W_total", "Gamma", "in_window"})
    cols.emplace_back(c);
  return cols;
}

inline std::vector<double> evaluate_sweep_point(const Scenario& sc) {
  if (sc.state_kind == "classical")
    throw std::invalid_argument("sweep: classical fields have no coherence row; "
                                "use the contrast operations instead");
  const PathFamily p = sc.path();
  const ModeSpec m = sc.mode();
  const PhotonState st = sc.photon_state();
  const CoherenceResult res = coherence_functional(st, p, m);
  double g = 0.0;
  if (sc.state_kind == "squeezed")
    g = g_function(SqueezedVacuum(sc.r, sc.theta), p, m);
  else if (sc.state_kind == "thermal")
    g = sc.nbar;
  const bool in_window = g < 0.0;
  return {mode_overlap_M(p, m), g,           res.WR,
          res.W0_mode,          res.W_total_mode, res.contrast_factor,
          in_window ? 1.0 : 0.0};
}

// Cartesian sweep over one or two axes; first axis varies slowest.
inline Table run_sweep(const Scenario& base, const std::vector<GridAxis>& axes,
                       int jobs) {
  if (axes.empty() || axes.size() > 2)
    throw std::invalid_argument("run_sweep: need one or two grid axes");
  std::vector<std::vector<double>> grids;
  for (const auto& a : axes) grids.push_back(a.values());
  const std::size_t n0 = grids[0].size();
  const std::size_t n1 = grids.size() == 2 ? grids[1].size() : 1;
  const std::size_t n = n0 * n1;

  Table t;
  std::vector<SweepParam> params;
  for (const auto& a : axes) params.push_back(a.param);
  t.columns = sweep_columns(params);
  t.rows.resize(n);

  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mu;
  parallel_for(n, jobs, [&](std::size_t i) {
    if (failed.load(std::memory_order_relaxed)) return;
    try {
      Scenario sc = base;
      const std::size_t i0 = i / n1, i1 = i % n1;
      set_sweep_param(sc, axes[0].param, grids[0][i0]);
      if (axes.size() == 2) set_sweep_param(sc, axes[1].param, grids[1][i1]);
      std::vector<double> row;
      row.push_back(grids[0][i0]);
      if (axes.size() == 2) row.push_back(grids[1][i1]);
      for (double v : evaluate_sweep_point(sc)) row.push_back(v);
      t.rows[i] = std::move(row);
    } catch (const std::exception& e) {
      failed.store(true, std::memory_order_relaxed);
      std::lock_guard<std::mutex> lock(error_mu);
      if (error.empty()) error = e.what();
    }
  });
  if (failed.load()) throw std::domain_error("run_sweep: " + error);
  return t;
}

} // namespace recoherence
