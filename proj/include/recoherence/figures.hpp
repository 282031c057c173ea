#pragma once

#include <string>
#include <vector>

#include "recoherence/coherence.hpp"
#include "recoherence/io.hpp"
#include "recoherence/sweep.hpp"

namespace recoherence {

// Tables behind the two standard plots: the oscillation of g with
// emission time for a few squeeze magnitudes, the envelope of its
// minimum, and the window average with the window width.

// Columns: omega_bar_t0, then one g column per requested r.  Two full
// oscillation periods (beta = 2 omega), theta fixed by the scenario.
inline Table fig2_g_table(const Scenario& base, const std::vector<double>& rs,
                          int points_per_period = 200) {
  if (rs.empty()) throw std::invalid_argument("fig2: need at least one r");
  Table t;
  t.columns.push_back("omega_bar_t0");
  for (double r : rs) t.columns.push_back("g_r=" + format_double(r));
  const PathFamily p = base.path();
  const ModeSpec m = base.mode();
  const int n = 2 * points_per_period;
  for (int i = 0; i < n; ++i) {
    // one g period spans pi in omega*t0; cover two
    const double wt0 = two_pi * i / points_per_period / 2.0;
    std::vector<double> row{wt0};
    for (double r : rs) {
      PathFamily shifted(p.R, p.T, wt0 / m.omega_bar);
      row.push_back(g_function(SqueezedVacuum(r, base.theta), shifted, m));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Columns: r, g_min.  Log-spaced r axis tracking the approach of the
// minimum toward -1/2.
inline Table fig2_gmin_table(double r_start = 0.05, double r_stop = 6.0,
                             int count = 60) {
  GridAxis axis{SweepParam::r, r_start, r_stop, count, true};
  Table t;
  t.columns = {"r", "g_min"};
  for (double r : axis.values())
    t.rows.push_back({r, g_min_closed_form(r)});
  return t;
}

// Columns: r, g_avg, delta_t_times_omega.  The window average heads to
// -1/3 while the window width shrinks to zero.
inline Table fig3_table(double r_start = 0.05, double r_stop = 6.0,
                        int count = 60) {
  GridAxis axis{SweepParam::r, r_start, r_stop, count, true};
  Table t;
  t.columns = {"r", "g_avg", "delta_t_times_omega"};
  for (double r : axis.values())
    t.rows.push_back({r, g_avg_closed_form(r), window_half_width_phase(r)});
  return t;
}

} // namespace recoherence
