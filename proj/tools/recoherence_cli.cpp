// Command-line front end: scalar evaluation, parameter sweeps, figure
// tables, independent numerical cross-checks, magnitude estimates, and
// the invariant suite.  Exit codes: 0 success, 2 configuration error,
// 3 domain/invariant violation, 4 quadrature non-convergence.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "recoherence/recoherence.hpp"

namespace {

using nlohmann::json;
using namespace recoherence;

// Config files use [path]/[mode]/[state]/[output] sections whose keys
// map onto dotted aliases of the top-level flags; [sweep] and [oracle]
// sections address the subcommands of the same name and pass through
// untouched.
class SectionedConfig : public CLI::ConfigBase {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& is) const override {
    auto items = CLI::ConfigBase::from_config(is);
    std::vector<CLI::ConfigItem> kept;
    kept.reserve(items.size());
    for (auto& item : items) {
      if (item.parents.size() == 1 &&
          (item.parents[0] == "path" || item.parents[0] == "mode" ||
           item.parents[0] == "state" || item.parents[0] == "output")) {
        // section enter/leave markers make sense only for subcommands
        if (item.name == "++" || item.name == "--") continue;
        item.name = item.parents[0] + "." + item.name;
        item.parents.clear();
      }
      kept.push_back(std::move(item));
    }
    return kept;
  }
};

struct CliOptions {
  Scenario scenario;
  std::string out;         // empty = stdout ("-" likewise)
  std::string format = "csv";
  int jobs = 0;            // 0 = all hardware threads

  // sweep axes
  std::string param, param2;
  double start = 0.0, stop = 0.0, start2 = 0.0, stop2 = 0.0;
  int count = 0, count2 = 0;
  std::string scale = "linear", scale2 = "linear";

  // oracle
  int tuples = 20;
  std::uint64_t seed = 1;
  std::uint64_t mc_samples = 100000;
  double sigma_sq = 0.5;
  double classical_amplitude = 1.0;
  int panels = 4;
  int max_panels = 1 << 20;
  double rel_tol = 1e-8;

  // figures
  std::vector<double> fig2_rs{0.5, 1.0, 2.0};
  std::string fig3_grid = "log:0.05:6:60";

  // estimate
  std::string estimate_kind;
  double lambda3_over_V = 1.0;
  double lambda_over_T = 0.1;
  double delta_omega_over_omega = 0.1;
  double delta_Omega = 0.1;

  // SI reporting
  double T_seconds = 0.0;
};

json scenario_json(const Scenario& s) {
  json j;
  j["path"]["R_over_T"] = s.R_over_T;
  j["path"]["t0_over_T"] = s.t0_over_T;
  j["mode"]["omega_bar_T"] = s.omega_bar_T;
  j["mode"]["V_over_lambda3"] = s.V_over_lambda3;
  j["state"]["kind"] = s.state_kind;
  if (s.state_kind == "squeezed") {
    j["state"]["r"] = s.r;
    j["state"]["theta"] = s.theta;
  } else if (s.state_kind == "thermal") {
    j["state"]["nbar"] = s.nbar;
  } else if (s.state_kind == "classical") {
    j["state"]["amplitude"] = s.amplitude;
    j["state"]["phase"] = s.phase;
  }
  return j;
}

// Output files are opened before any computation so an unwritable path
// fails fast.
std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  auto os = std::make_unique<std::ofstream>(path, std::ios::trunc);
  if (!os->good())
    throw std::domain_error("output path is not writable: " + path);
  return os;
}

void emit_table(const Table& t, const CliOptions& opt) {
  const bool to_stdout = opt.out.empty() || opt.out == "-";
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  if (!to_stdout) {
    file = open_output(opt.out);
    os = file.get();
  }
  if (opt.format == "json")
    write_table_json(*os, t);
  else
    write_table_csv(*os, t);
}

void report_si(const Scenario& s, double T_seconds) {
  const double c = 299792458.0; // m/s
  const double omega = s.omega_bar_T / T_seconds;
  const double lambda = two_pi * c / omega;
  std::cerr << "SI report for T = " << T_seconds << " s:\n"
            << "  omega_bar  = " << omega << " rad/s\n"
            << "  lambda     = " << lambda << " m\n"
            << "  R          = " << s.R_over_T * c * T_seconds << " m\n"
            << "  peak speed = " << peak_speed_coefficient * s.R_over_T
            << " c\n";
  if (s.state_kind == "squeezed" && s.r > 0.0) {
    const auto w = recoherence_window(SqueezedVacuum(s.r, s.theta), s.path(),
                                      s.mode());
    if (w)
      std::cerr << "  window     = [" << w->t_i * T_seconds << ", "
                << w->t_f * T_seconds << "] s, width "
                << w->delta_t * T_seconds << " s\n";
  }
}

int run_compute(const CliOptions& opt, const json& cfg) {
  const Scenario& sc = opt.scenario;
  Table t;
  t.meta.config_json = cfg.dump();
  if (sc.state_kind == "classical") {
    const ClassicalCoherent st(sc.amplitude, sc.phase);
    t.columns = {"amplitude", "phase", "contrast"};
    t.rows = {{st.amplitude, st.phase,
               classical_averaged_contrast(st, sc.path(), sc.mode())}};
    emit_table(t, opt);
    return 0;
  }
  t.columns = {"R_over_T", "t0_over_T", "omega_bar_T", "V_over_lambda3"};
  std::vector<double> row{sc.R_over_T, sc.t0_over_T, sc.omega_bar_T,
                          sc.V_over_lambda3};
  if (sc.state_kind == "squeezed") {
    t.columns.insert(t.columns.end(), {"r", "theta"});
    row.insert(row.end(), {sc.r, sc.theta});
  } else if (sc.state_kind == "thermal") {
    t.columns.push_back("nbar");
    row.push_back(sc.nbar);
  }
  for (const char* c :
       {"M", "g", "WR", "W0_mode", "W_total", "Gamma", "in_window"})
    t.columns.emplace_back(c);
  for (double v : evaluate_sweep_point(sc)) row.push_back(v);
  if (sc.state_kind == "squeezed" && sc.r > 0.0) {
    const auto w = recoherence_window(SqueezedVacuum(sc.r, sc.theta), sc.path(),
                                      sc.mode());
    t.columns.insert(t.columns.end(),
                     {"t_i", "t_f", "delta_t", "g_min", "g_avg"});
    row.insert(row.end(), {w->t_i, w->t_f, w->delta_t, w->g_min, w->g_avg});
  }
  t.rows.push_back(std::move(row));
  emit_table(t, opt);
  if (opt.T_seconds > 0.0) report_si(sc, opt.T_seconds);
  return 0;
}

GridAxis parse_axis(const std::string& param, double start, double stop,
                    int count, const std::string& scale) {
  const auto p = parse_sweep_param(param);
  if (!p)
    throw CLI::ValidationError("sweep", "unknown sweep parameter '" + param +
                                            "'");
  if (scale != "linear" && scale != "log")
    throw CLI::ValidationError("sweep", "scale must be linear or log");
  return GridAxis{*p, start, stop, count, scale == "log"};
}

int run_sweep_cmd(const CliOptions& opt, const json& cfg) {
  std::vector<GridAxis> axes;
  axes.push_back(
      parse_axis(opt.param, opt.start, opt.stop, opt.count, opt.scale));
  if (!opt.param2.empty())
    axes.push_back(
        parse_axis(opt.param2, opt.start2, opt.stop2, opt.count2, opt.scale2));
  Table t = run_sweep(opt.scenario, axes, opt.jobs);
  t.meta.config_json = cfg.dump();
  emit_table(t, opt);
  return 0;
}

int run_fig2(const CliOptions& opt, const json& cfg) {
  Table g = fig2_g_table(opt.scenario, opt.fig2_rs);
  Table gmin = fig2_gmin_table();
  g.meta.config_json = cfg.dump();
  gmin.meta.config_json = cfg.dump();
  const std::string dir = opt.out.empty() || opt.out == "-" ? "." : opt.out;
  std::filesystem::create_directories(dir);
  const std::string ext = opt.format == "json" ? ".json" : ".csv";
  const std::string g_path = dir + "/fig2_g" + ext;
  const std::string gmin_path = dir + "/fig2_gmin" + ext;
  auto g_os = open_output(g_path);
  auto gmin_os = open_output(gmin_path);
  if (opt.format == "json") {
    write_table_json(*g_os, g);
    write_table_json(*gmin_os, gmin);
  } else {
    write_table_csv(*g_os, g);
    write_table_csv(*gmin_os, gmin);
  }
  std::cout << g_path << "\n" << gmin_path << "\n";
  return 0;
}

int run_fig3(const CliOptions& opt, const json& cfg) {
  const auto parts = [&] {
    std::vector<std::string> out;
    std::stringstream ss(opt.fig3_grid);
    std::string piece;
    while (std::getline(ss, piece, ':')) out.push_back(piece);
    return out;
  }();
  if (parts.size() != 4)
    throw CLI::ValidationError("fig3",
                               "--r-grid expects scale:start:stop:count");
  if (parts[0] != "log" && parts[0] != "linear" && parts[0] != "lin")
    throw CLI::ValidationError("fig3", "grid scale must be log or linear");
  double start = 0.0, stop = 0.0;
  int count = 0;
  try {
    start = std::stod(parts[1]);
    stop = std::stod(parts[2]);
    count = std::stoi(parts[3]);
  } catch (const std::exception&) {
    throw CLI::ValidationError("fig3", "bad --r-grid numbers");
  }
  if (count < 2 || !(start > 0.0) || !(stop > start))
    throw CLI::ValidationError("fig3", "need 0 < start < stop and count >= 2");
  Table t = parts[0] == "log"
                ? fig3_table(start, stop, count)
                : [&] {
                    GridAxis axis{SweepParam::r, start, stop, count, false};
                    Table lin;
                    lin.columns = {"r", "g_avg", "delta_t_times_omega"};
                    for (double r : axis.values())
                      lin.rows.push_back({r, g_avg_closed_form(r),
                                          window_half_width_phase(r)});
                    return lin;
                  }();
  t.meta.config_json = cfg.dump();
  emit_table(t, opt);
  return 0;
}

// Deterministic tuple stream for the quadrature cross-check.  Tuples
// whose g sits at a sign change or whose overlap sits at a j2 zero are
// redrawn: both routes then divide two numbers near zero and the ratio
// loses digits for reasons that have nothing to do with correctness.
struct OracleTuple {
  double r, theta, t0, omega_bar_T, R_over_T;
};

OracleTuple draw_tuple(SplitMix64& rng) {
  for (;;) {
    OracleTuple t;
    t.r = rng.next_uniform(0.1, 3.0);
    t.theta = rng.next_uniform(0.0, two_pi);
    t.t0 = rng.next_uniform(0.0, 3.0);
    t.omega_bar_T = rng.next_uniform(0.5, 6.0);
    t.R_over_T = rng.next_uniform(0.01, 0.1);
    const double align = std::cos(2.0 * t.omega_bar_T - t.theta +
                                  2.0 * t.omega_bar_T * t.t0) +
                         std::tanh(t.r);
    if (std::abs(align) < 0.05) continue;
    if (std::abs(spherical_j2(t.omega_bar_T)) < 1e-3) continue;
    return t;
  }
}

int run_oracle(const CliOptions& opt, const json& cfg) {
  const bool to_stdout = opt.out.empty() || opt.out == "-";
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  if (!to_stdout) {
    file = open_output(opt.out);
    os = file.get();
  }
  std::ostream& report = to_stdout ? std::cerr : std::cout;

  json meta;
  meta["kind"] = "meta";
  meta["tool"] = std::string("recoherence-lab ") + version();
  meta["config"] = cfg;
  meta["seed"] = opt.seed;
  meta["rng"] = SplitMix64::name();
  *os << meta.dump() << "\n";

  QuadratureSpec q;
  q.n_panels = opt.panels;
  q.max_panels = opt.max_panels;
  q.rel_tol = opt.rel_tol;

  SplitMix64 rng(opt.seed);
  double ratio_min = 0.0, ratio_max = 0.0, ratio_sum = 0.0;
  double identity_worst = 0.0;
  for (int i = 0; i < opt.tuples; ++i) {
    const OracleTuple tu = draw_tuple(rng);
    const PathFamily p(tu.R_over_T, 1.0, tu.t0);
    const ModeSpec m(tu.omega_bar_T, 1.0 * std::pow(two_pi / tu.omega_bar_T, 3));
    const SqueezedVacuum state(tu.r, tu.theta);

    const QuadratureOutcome num = numeric_WR_detailed(state, p, m, q);
    const SqueezedVacuum aligned = phase_aligned_state(state, p, m);
    const double closed = coherence_functional(aligned, p, m).WR;
    const double ratio = num.value / closed;

    const double num_W0 = numeric_W0_mode(p, m, q);
    const double g_closed = g_function(aligned, p, m);
    const double identity = (num.value / num_W0) / (2.0 * g_closed);
    identity_worst = std::max(identity_worst, std::abs(identity - 1.0));

    json rec;
    rec["kind"] = "quadrature";
    rec["inputs"] = {{"r", tu.r},
                     {"theta", tu.theta},
                     {"t0_over_T", tu.t0},
                     {"omega_bar_T", tu.omega_bar_T},
                     {"R_over_T", tu.R_over_T},
                     {"V_over_lambda3", 1.0}};
    rec["numeric_WR"] = num.value;
    rec["closed_WR"] = closed;
    rec["ratio"] = ratio;
    rec["numeric_W0_mode"] = num_W0;
    rec["identity_WR_over_W0_vs_2g"] = identity;
    rec["panels"] = num.panels;
    rec["seed"] = opt.seed;
    *os << rec.dump() << "\n";

    ratio_sum += ratio;
    if (i == 0) {
      ratio_min = ratio_max = ratio;
    } else {
      ratio_min = std::min(ratio_min, ratio);
      ratio_max = std::max(ratio_max, ratio);
    }
  }
  const double mean = ratio_sum / opt.tuples;
  const double spread = (ratio_max - ratio_min) / std::abs(mean);

  FringeExperiment gauss;
  gauss.n_samples = opt.mc_samples;
  gauss.sigma_sq = opt.sigma_sq;
  gauss.seed = opt.seed;
  const FringeResult g_res = fringe_contrast(gauss);
  const double g_expect = std::exp(-0.5 * opt.sigma_sq);

  FringeExperiment classical;
  classical.n_samples = opt.mc_samples;
  classical.sigma_sq = 0.0;
  classical.classical_amplitude = opt.classical_amplitude;
  classical.seed = opt.seed + 1;
  const FringeResult c_res = fringe_contrast(classical);
  const double c_expect = std::abs(bessel_j0(opt.classical_amplitude));

  const auto emit_fringe = [&](const char* kind, const char* input_key,
                               double input_val, const FringeResult& res,
                               double expect, std::uint64_t seed) {
    json rec;
    rec["kind"] = kind;
    rec["inputs"] = {{"n_samples", opt.mc_samples}, {input_key, input_val}};
    rec["contrast"] = res.contrast;
    rec["stat_error"] = res.stat_error;
    rec["binned_contrast"] = res.binned_contrast;
    rec["expected"] = expect;
    rec["seed"] = seed;
    *os << rec.dump() << "\n";
  };
  emit_fringe("fringe_gaussian", "sigma_sq", opt.sigma_sq, g_res, g_expect,
              gauss.seed);
  emit_fringe("fringe_classical", "amplitude", opt.classical_amplitude, c_res,
              c_expect, classical.seed);

  report << "quadrature ratio: mean " << format_double(mean) << ", spread "
         << format_double(spread) << " over " << opt.tuples << " tuples\n"
         << "WR/W0 = 2g identity: worst deviation "
         << format_double(identity_worst) << "\n"
         << "gaussian fringe: " << format_double(g_res.contrast) << " +- "
         << format_double(g_res.stat_error) << " (expected "
         << format_double(g_expect) << ")\n"
         << "classical fringe: " << format_double(c_res.contrast) << " +- "
         << format_double(c_res.stat_error) << " (expected "
         << format_double(c_expect) << ")\n";
  return 0;
}

int run_estimate(const CliOptions& opt, const json& cfg) {
  json out;
  out["config"] = cfg;
  std::ostringstream text;
  const double rt = opt.scenario.R_over_T;
  if (opt.estimate_kind == "single") {
    const EstimateResult res = single_mode_estimate(
        CavityEstimateInput(opt.lambda3_over_V, rt, opt.lambda_over_T));
    out["kind"] = "single";
    out["inputs"] = {{"lambda3_over_V", opt.lambda3_over_V},
                     {"R_over_T", rt},
                     {"lambda_over_T", opt.lambda_over_T}};
    out["value"] = res.value;
    out["valid"] = res.valid;
    out["warnings"] = res.warnings;
    text << "single-mode averaged recoherence estimate: "
         << std::scientific << res.value;
    for (const auto& w : res.warnings) text << "\n  warning: " << w;
  } else if (opt.estimate_kind == "cavity") {
    const double v = cavity_estimate(rt);
    out["kind"] = "cavity";
    out["inputs"] = {{"R_over_T", rt}};
    out["value"] = v;
    out["valid"] = true;
    out["warnings"] = json::array();
    text << "cavity lowest-mode estimate: " << std::scientific << v;
  } else if (opt.estimate_kind == "bandwidth") {
    const EstimateResult res = bandwidth_estimate(
        rt, BandwidthSpec(opt.delta_omega_over_omega, opt.delta_Omega));
    out["kind"] = "bandwidth";
    out["inputs"] = {{"R_over_T", rt},
                     {"delta_omega_over_omega", opt.delta_omega_over_omega},
                     {"delta_Omega", opt.delta_Omega}};
    out["value"] = res.value;
    out["valid"] = res.valid;
    out["warnings"] = res.warnings;
    text << "excited-band estimate: " << std::scientific << res.value;
    for (const auto& w : res.warnings) text << "\n  warning: " << w;
  } else if (opt.estimate_kind == "crosscheck") {
    const CavityCrossCheck cc = cavity_cross_check(rt);
    out["kind"] = "crosscheck";
    out["inputs"] = {{"R_over_T", rt}};
    out["estimate"] = cc.estimate;
    out["exact_max"] = cc.exact_max;
    out["ratio"] = cc.ratio;
    out["omega_bar_T_max"] = cc.omega_bar_T_max;
    text << "cavity estimate " << std::scientific << cc.estimate
         << " vs exact bound maximum " << cc.exact_max << " (ratio "
         << cc.ratio << " at omega_bar_T = " << cc.omega_bar_T_max << ")";
  } else {
    throw CLI::ValidationError(
        "estimate", "--kind must be single, cavity, bandwidth, or crosscheck");
  }
  std::cout << text.str() << "\n" << out.dump() << "\n";
  if (!opt.out.empty() && opt.out != "-") {
    auto os = open_output(opt.out);
    *os << out.dump() << "\n";
  }
  return 0;
}

int run_check() {
  const std::vector<CheckResult> results = run_all_checks();
  int failed = 0;
  for (const auto& res : results) {
    if (res.pass) {
      std::cout << "PASS " << res.name << "\n";
    } else {
      ++failed;
      std::cout << "FAIL " << res.name << ": " << res.detail << "\n";
    }
  }
  std::cout << results.size() - failed << "/" << results.size()
            << " checks passed\n";
  return failed == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
  CliOptions opt;
  CLI::App app{"Electron interference contrast under a single excited "
               "field mode: closed forms, windows, estimates, and "
               "independent numerical cross-checks"};
  app.config_formatter(std::make_shared<SectionedConfig>());
  app.set_config("--config", "", "Key-value config file with [path] [mode] "
                                 "[state] [sweep] [oracle] [output] sections");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  Scenario& sc = opt.scenario;
  app.add_option("--R-over-T,--path.R-over-T", sc.R_over_T,
                 "Path depth over flight time (R/T)");
  app.add_option("--t0-over-T,--path.t0-over-T", sc.t0_over_T,
                 "Emission time over flight time");
  app.add_option("--omega-bar-T,--mode.omega-bar-T", sc.omega_bar_T,
                 "Mode angular frequency times flight time");
  app.add_option("--V-over-lambda3,--mode.V-over-lambda3", sc.V_over_lambda3,
                 "Quantization volume in cubic wavelengths");
  app.add_option("--state,--state.kind", sc.state_kind,
                 "Field state: vacuum | squeezed | thermal | classical");
  app.add_option("--r,--state.r", sc.r, "Squeeze magnitude");
  app.add_option("--theta,--state.theta", sc.theta, "Squeeze phase");
  app.add_option("--nbar,--state.nbar", sc.nbar, "Thermal mean occupation");
  app.add_option("--amplitude,--state.amplitude", sc.amplitude,
                 "Classical peak phase amplitude, radians");
  app.add_option("--phase,--state.phase", sc.phase, "Classical field phase");
  app.add_option("--out,--output.out", opt.out,
                 "Output file (fig2: output directory); default stdout");
  app.add_option("--format,--output.format", opt.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs,--output.jobs", opt.jobs,
                 "Worker threads for sweeps (0 = all cores)")
      ->envname("RECOHERENCE_LAB_JOBS");

  CLI::App* compute = app.add_subcommand(
      "compute", "Evaluate the coherence budget at one parameter point");
  compute->add_option("--T-seconds", opt.T_seconds,
                      "Report SI equivalents for this flight time (stderr)");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Tabulate the coherence budget over a parameter grid");
  sweep->configurable();
  sweep->add_option("--param,--sweep.param", opt.param,
                    "Grid parameter: r | theta | t0_over_T | omega_bar_T | "
                    "R_over_T | nbar")
      ->required();
  sweep->add_option("--start,--sweep.start", opt.start)->required();
  sweep->add_option("--stop,--sweep.stop", opt.stop)->required();
  sweep->add_option("--count,--sweep.count", opt.count)->required();
  sweep->add_option("--scale,--sweep.scale", opt.scale, "linear | log");
  sweep->add_option("--param2,--sweep.param2", opt.param2,
                    "Optional second grid parameter");
  sweep->add_option("--start2,--sweep.start2", opt.start2);
  sweep->add_option("--stop2,--sweep.stop2", opt.stop2);
  sweep->add_option("--count2,--sweep.count2", opt.count2);
  sweep->add_option("--scale2,--sweep.scale2", opt.scale2);

  CLI::App* fig2 = app.add_subcommand(
      "fig2", "Emit g vs emission time per squeeze magnitude, plus the "
              "envelope of its minimum");
  fig2->add_option("--r", opt.fig2_rs, "Squeeze magnitudes, one g column each")
      ->expected(-1);

  CLI::App* fig3 = app.add_subcommand(
      "fig3", "Emit window-averaged g and window width against squeeze "
              "magnitude");
  fig3->add_option("--r-grid", opt.fig3_grid, "scale:start:stop:count");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Cross-check closed forms by quadrature and Monte Carlo");
  oracle->configurable();
  oracle->add_option("--tuples,--oracle.tuples", opt.tuples,
                     "Random parameter tuples for the quadrature comparison")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--seed,--oracle.seed", opt.seed, "RNG seed");
  oracle->add_option("--mc-samples,--oracle.mc-samples", opt.mc_samples,
                     "Monte Carlo electrons per fringe experiment");
  oracle->add_option("--sigma-sq,--oracle.sigma-sq", opt.sigma_sq,
                     "Gaussian phase variance for the fringe experiment");
  oracle->add_option("--classical-amplitude,--oracle.classical-amplitude",
                     opt.classical_amplitude,
                     "Classical phase amplitude for the fringe experiment");
  oracle->add_option("--panels,--oracle.panels", opt.panels,
                     "Starting quadrature panels per axis");
  oracle->add_option("--max-panels,--oracle.max-panels", opt.max_panels,
                     "Refinement budget per axis before giving up");
  oracle->add_option("--rel-tol,--oracle.rel-tol", opt.rel_tol,
                     "Quadrature refinement gate");

  CLI::App* estimate = app.add_subcommand(
      "estimate", "Order-of-magnitude recoherence estimates");
  estimate->add_option("--kind", opt.estimate_kind,
                       "single | cavity | bandwidth | crosscheck")
      ->required();
  estimate->add_option("--lambda3-over-V", opt.lambda3_over_V,
                       "Wavelength cubed over cavity volume");
  estimate->add_option("--lambda-over-T", opt.lambda_over_T,
                       "Wavelength over flight time");
  estimate->add_option("--delta-omega-over-omega", opt.delta_omega_over_omega,
                       "Fractional bandwidth of excited modes");
  estimate->add_option("--delta-Omega", opt.delta_Omega,
                       "Excited solid angle, steradians");

  CLI::App* check = app.add_subcommand(
      "check", "Run the invariant suite; nonzero exit on any failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    json cfg = scenario_json(opt.scenario);
    cfg["output"]["format"] = opt.format;
    if (compute->parsed()) {
      cfg["action"] = "compute";
      return run_compute(opt, cfg);
    }
    if (sweep->parsed()) {
      cfg["action"] = "sweep";
      cfg["sweep"] = {{"param", opt.param}, {"start", opt.start},
                      {"stop", opt.stop},   {"count", opt.count},
                      {"scale", opt.scale}};
      if (!opt.param2.empty())
        cfg["sweep2"] = {{"param", opt.param2}, {"start", opt.start2},
                         {"stop", opt.stop2},   {"count", opt.count2},
                         {"scale", opt.scale2}};
      return run_sweep_cmd(opt, cfg);
    }
    if (fig2->parsed()) {
      cfg["action"] = "fig2";
      cfg["fig2"]["r"] = opt.fig2_rs;
      return run_fig2(opt, cfg);
    }
    if (fig3->parsed()) {
      cfg["action"] = "fig3";
      cfg["fig3"]["r_grid"] = opt.fig3_grid;
      return run_fig3(opt, cfg);
    }
    if (oracle->parsed()) {
      cfg["action"] = "oracle";
      cfg["oracle"] = {{"tuples", opt.tuples},
                       {"seed", opt.seed},
                       {"mc_samples", opt.mc_samples},
                       {"sigma_sq", opt.sigma_sq},
                       {"classical_amplitude", opt.classical_amplitude},
                       {"panels", opt.panels},
                       {"max_panels", opt.max_panels},
                       {"rel_tol", opt.rel_tol}};
      return run_oracle(opt, cfg);
    }
    if (estimate->parsed()) {
      cfg["action"] = "estimate";
      return run_estimate(opt, cfg);
    }
    if (check->parsed()) return run_check();
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (last refinements "
              << format_double(e.previous) << " -> "
              << format_double(e.current) << " at " << e.panels_tried
              << " panels)\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
