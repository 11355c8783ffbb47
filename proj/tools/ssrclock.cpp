// Command-line front end: rate prediction, Ramsey simulation, model fits,
// Allan-deviation statistics and the noise budget. All outputs are CSV plus
// plain-text summaries; no plotting dependencies.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssr/allan.hpp"
#include "ssr/budget.hpp"
#include "ssr/config.hpp"
#include "ssr/csv.hpp"
#include "ssr/energy_grid.hpp"
#include "ssr/errors.hpp"
#include "ssr/fringe.hpp"
#include "ssr/linear_fit.hpp"
#include "ssr/physics.hpp"
#include "ssr/spin_dynamics.hpp"
#include "ssr/ssr_fit.hpp"
#include "ssr/stability.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_physics = 3;
constexpr int exit_convergence = 4;

struct CommonOpts {
  std::string scenario;
  std::string config_path;
  std::string scenario_dir = "scenarios";
  std::string out_dir = "out";
  std::uint64_t seed = 12345;
};

fs::path resolve_scenario(const CommonOpts& o) {
  if (!o.config_path.empty()) return o.config_path;
  if (o.scenario.empty())
    throw ssr::input_error("give --scenario <name> or --config <path>");
  fs::path p = fs::path(o.scenario_dir) / (o.scenario + ".cfg");
  if (!fs::exists(p))
    throw ssr::input_error("scenario file not found: " + p.string());
  return p;
}

std::vector<double> scan_densities(const ssr::Scenario& sc) {
  if (!sc.scan_densities.empty()) return sc.scan_densities;
  return {sc.params.mean_density};
}

std::string density_tag(double density_si) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", density_si / ssr::constants::per_cm3_e12);
  return buf;
}

int cmd_predict(const CommonOpts& o) {
  ssr::Scenario sc = ssr::load_scenario(resolve_scenario(o));
  std::vector<double> ns = scan_densities(sc);
  std::vector<std::vector<double>> cols(8);
  for (double n : ns) {
    ssr::PhysicalParams p = sc.params;
    p.mean_density = n;
    const ssr::RateSet r = ssr::make_rates(p);
    const ssr::ConditionReport rep = ssr::ssr_conditions(r);
    std::printf("scenario %s, n = %s e12 cm^-3:\n", sc.name.c_str(), density_tag(n).c_str());
    std::printf("  Delta0     = %10.4f rad/s\n", r.delta0);
    std::printf("  omega_ex   = %10.4f rad/s\n", r.omega_ex);
    std::printf("  gamma_c    = %10.4f 1/s\n", r.gamma_c);
    std::printf("  mean_shift = %10.4f Hz\n", r.mean_shift);
    std::printf("  omega_ex/|Delta0|     = %8.3f  (condition i:  %s)\n",
                rep.exchange_to_dephasing, rep.dephasing_ok ? "met" : "not met");
    std::printf("  omega_ex/(pi gamma_c) = %8.3f  (condition ii: %s)\n",
                rep.exchange_to_collision, rep.mixing_ok ? "met" : "not met");
    cols[0].push_back(n / ssr::constants::per_cm3_e12);
    cols[1].push_back(r.delta0);
    cols[2].push_back(r.omega_ex);
    cols[3].push_back(r.gamma_c);
    cols[4].push_back(r.mean_shift);
    cols[5].push_back(rep.exchange_to_dephasing);
    cols[6].push_back(rep.exchange_to_collision);
    cols[7].push_back((rep.dephasing_ok && rep.mixing_ok) ? 1.0 : 0.0);
  }
  ssr::write_csv(fs::path(o.out_dir) / (sc.name + "_rates.csv"),
                 {"density_per_cm3_e12", "delta0_rad_s", "omega_ex_rad_s", "gamma_c_per_s",
                  "mean_shift_hz", "ratio_exchange_dephasing", "ratio_exchange_collision",
                  "ssr_conditions_met"},
                 cols);
  return exit_ok;
}

int cmd_simulate(const CommonOpts& o) {
  ssr::Scenario sc = ssr::load_scenario(resolve_scenario(o));
  if (!sc.has_sequence())
    throw ssr::input_error("scenario '" + sc.name + "' has no [sequence] section");
  const ssr::EnergyClassGrid grid = ssr::build_energy_grid(sc.n_classes, sc.epsilon_max);
  for (double n : scan_densities(sc)) {
    ssr::PhysicalParams p = sc.params;
    p.mean_density = n;
    ssr::RamseyConfig cfg;
    cfg.rates = ssr::make_rates(p);
    cfg.mw_detuning = sc.mw_detuning;
    cfg.pulse_model = sc.pulse_model;
    cfg.pulse_duration = sc.pulse_duration;
    cfg.dt = sc.dt;
    const ssr::RamseyRecord rec = ssr::ramsey_scan(cfg, sc.times, grid);
    const fs::path out =
        fs::path(o.out_dir) / (sc.name + "_n" + density_tag(n) + "_ramsey.csv");
    ssr::write_csv(out, {"t_s", "P", "contrast", "phase_rad"},
                   {rec.times, rec.transfer, rec.contrast, rec.phase});
    std::printf("wrote %s (%zu points, Delta0=%.3f omega_ex=%.3f gamma_c=%.3f)\n",
                out.string().c_str(), rec.times.size(), cfg.rates.delta0, cfg.rates.omega_ex,
                cfg.rates.gamma_c);
  }
  return exit_ok;
}

int cmd_fit(const CommonOpts& o, const std::string& model, const std::string& data,
            double t_min, double t_max) {
  const ssr::CsvTable table = ssr::read_csv(data);
  if (model == "fringe") {
    const int it = table.column_index("t_s");
    const int ip = table.column_index("P");
    if (it < 0 || ip < 0) throw ssr::input_error("fringe fit needs columns t_s,P");
    const ssr::FringeFit fit =
        ssr::fit_fringe(table.columns[it], table.columns[ip], {}, t_min, t_max);
    std::printf("fringe fit of %s:\n", data.c_str());
    std::printf("  frequency = %.6f Hz (period %.4f ms)\n", fit.frequency,
                1e3 / fit.frequency);
    std::printf("  contrast  = %.4f\n  offset    = %.4f\n  phase     = %.4f rad\n",
                fit.contrast, fit.offset, fit.phase);
    std::printf("  residual rms = %.3g\n", fit.residual_rms);
    ssr::write_csv(fs::path(o.out_dir) / "fringe_fit.csv",
                   {"frequency_hz", "phase_rad", "contrast", "offset", "residual_rms"},
                   {{fit.frequency}, {fit.phase}, {fit.contrast}, {fit.offset},
                    {fit.residual_rms}});
    return exit_ok;
  }
  if (model == "ssr") {
    const int it = table.column_index("t_s");
    if (it < 0) throw ssr::input_error("ssr fit needs column t_s");
    std::vector<double> times = table.columns[it], contrast;
    const int ic = table.column_index("contrast");
    if (ic >= 0) {
      contrast = table.columns[ic];
    } else {
      // Raw P(t) data: extract the envelope with sliding-window fringe fits.
      const int ip = table.column_index("P");
      if (ip < 0) throw ssr::input_error("ssr fit needs a contrast or P column");
      const ssr::FringeFit fringe = ssr::fit_fringe(times, table.columns[ip]);
      std::vector<double> centers;
      ssr::contrast_envelope(times, table.columns[ip], fringe.frequency, centers, contrast);
      times = centers;
    }
    ssr::Scenario sc = ssr::load_scenario(resolve_scenario(o));
    const ssr::EnergyClassGrid grid = ssr::build_energy_grid(sc.n_classes, sc.epsilon_max);
    const ssr::SsrFitResult fit = ssr::fit_ssr_model(times, contrast, grid);
    std::printf("rate fit of %s (%zu envelope points):\n", data.c_str(), times.size());
    std::printf("  Delta0   = %.4f +- %.4f rad/s\n", fit.rates.delta0,
                std::sqrt(fit.covariance[0]));
    std::printf("  omega_ex = %.4f +- %.4f rad/s\n", fit.rates.omega_ex,
                std::sqrt(fit.covariance[4]));
    std::printf("  gamma_c  = %.4f +- %.4f 1/s\n", fit.rates.gamma_c,
                std::sqrt(fit.covariance[8]));
    std::printf("  chi2 = %.4g, %d iterations%s\n", fit.chi2, fit.iterations,
                fit.weakly_identifiable
                    ? " (warning: no revival in data, Delta0/gamma_c weakly identifiable)"
                    : "");
    ssr::write_csv(fs::path(o.out_dir) / "ssr_fit.csv",
                   {"delta0_rad_s", "omega_ex_rad_s", "gamma_c_per_s", "delta0_sigma",
                    "omega_ex_sigma", "gamma_c_sigma", "chi2"},
                   {{fit.rates.delta0},
                    {fit.rates.omega_ex},
                    {fit.rates.gamma_c},
                    {std::sqrt(fit.covariance[0])},
                    {std::sqrt(fit.covariance[4])},
                    {std::sqrt(fit.covariance[8])},
                    {fit.chi2}});
    return exit_ok;
  }
  if (model == "shift-line" || model == "dls") {
    const int ix = table.column_index("x");
    const int is = table.column_index("shift_hz");
    const int ig = table.column_index("sigma_hz");
    if (ix < 0 || is < 0 || ig < 0)
      throw ssr::input_error("shift fit needs columns x,shift_hz,sigma_hz");
    std::vector<ssr::ShiftPoint> pts;
    for (std::size_t r = 0; r < table.rows(); ++r)
      pts.push_back({table.columns[ix][r], table.columns[is][r], table.columns[ig][r]});
    const ssr::LinearFitResult fit =
        model == "dls" ? ssr::extrapolate_dls(pts) : ssr::fit_shift_line(pts);
    std::printf("%s fit of %s:\n", model.c_str(), data.c_str());
    std::printf("  slope     = %.6f +- %.6f\n", fit.slope, fit.slope_sigma);
    std::printf("  intercept = %.6f +- %.6f Hz\n", fit.intercept, fit.intercept_sigma);
    std::printf("  chi2/dof  = %.4g\n", fit.chi2_reduced);
    ssr::write_csv(fs::path(o.out_dir) / (model == "dls" ? "dls_fit.csv" : "shift_fit.csv"),
                   {"slope", "intercept", "slope_sigma", "intercept_sigma", "chi2_reduced"},
                   {{fit.slope},
                    {fit.intercept},
                    {fit.slope_sigma},
                    {fit.intercept_sigma},
                    {fit.chi2_reduced}});
    return exit_ok;
  }
  throw ssr::input_error("unknown fit model '" + model + "' (fringe|ssr|shift-line|dls)");
}

int cmd_allan(const CommonOpts& o, const std::string& data, double cycle, bool synth,
              const std::string& noise_type) {
  ssr::StabilitySeries series;
  std::string stem = "allan";
  if (synth) {
    ssr::Scenario sc = ssr::load_scenario(resolve_scenario(o));
    if (!sc.stability)
      throw ssr::input_error("scenario '" + sc.name + "' has no [stability] section");
    const ssr::StabilityConfig& st = *sc.stability;
    series.cycle_time = st.cycle_time;
    series.y = noise_type == "random-walk"
                   ? ssr::synth_random_walk_fm(st.n_shots, st.shot_sigma_y, o.seed)
                   : ssr::synth_white_fm(st.n_shots, st.shot_sigma_y, o.seed);
    if (st.ac_amplitude_y > 0.0)
      ssr::add_sinusoid(series.y, st.ac_amplitude_y, st.ac_period, st.cycle_time);
    stem = sc.name + "_allan";
    std::vector<double> idx(series.y.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
    ssr::write_csv(fs::path(o.out_dir) / (sc.name + "_shots.csv"), {"shot_index", "y"},
                   {idx, series.y});
  } else {
    if (data.empty()) throw ssr::input_error("allan: give --data or --synth");
    const ssr::CsvTable table = ssr::read_csv(data);
    const int iy = table.column_index("y");
    if (iy >= 0) {
      series.y = table.columns[iy];
    } else {
      // P-column input is converted around its own mean with the supplied
      // cycle parameters unavailable here; require explicit y for now.
      throw ssr::input_error("allan: input needs a 'y' column (fractional frequency)");
    }
    if (!(cycle > 0.0)) throw ssr::input_error("allan: --cycle <seconds> required");
    series.cycle_time = cycle;
  }

  const std::vector<ssr::AdevPoint> pts = ssr::overlapping_adev(series);
  std::vector<std::vector<double>> cols(4);
  std::printf("%10s %12s %12s %12s\n", "tau_s", "adev", "ci_low", "ci_high");
  for (const ssr::AdevPoint& p : pts) {
    std::printf("%10.4g %12.5g %12.5g %12.5g\n", p.tau, p.adev, p.ci_low, p.ci_high);
    cols[0].push_back(p.tau);
    cols[1].push_back(p.adev);
    cols[2].push_back(p.ci_low);
    cols[3].push_back(p.ci_high);
  }
  if (pts.size() >= 2) {
    std::printf("white-noise fit: sigma_y(tau) = %.4g tau^(-1/2), log-log slope %.3f\n",
                ssr::fit_white_coefficient(pts), ssr::fit_loglog_slope(pts));
  }
  ssr::write_csv(fs::path(o.out_dir) / (stem + ".csv"), {"tau_s", "adev", "ci_low", "ci_high"},
                 cols);
  return exit_ok;
}

int cmd_budget(const CommonOpts& o) {
  ssr::Scenario sc = ssr::load_scenario(resolve_scenario(o));
  const ssr::BudgetReport rep = ssr::scenario_budget(sc);
  std::printf("noise budget, scenario %s:\n", sc.name.c_str());
  std::printf("  %-12s %12s %14s %12s %12s\n", "source", "level", "sens_hz_unit", "sigma_shot",
              "sigma_1s");
  std::vector<std::vector<double>> cols(5);
  std::vector<std::string> names;
  for (const ssr::BudgetEntry& e : rep.entries) {
    std::printf("  %-12s %12.4g %14.4g %12.4g %12.4g\n", e.name.c_str(), e.shot_level,
                e.sensitivity, e.sigma_y_shot, e.sigma_y_1s);
  }
  std::printf("  %-12s %12s %14s %12.4g %12.4g\n", "total (rss)", "", "", rep.total_shot,
              rep.total_1s);
  std::printf("  %-12s %12s %14s %12.4g %12.4g\n", "qpn floor", "", "", rep.qpn_shot,
              rep.qpn_1s);
  std::vector<std::vector<double>> out(4);
  std::vector<double> idx;
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    idx.push_back(static_cast<double>(i));
    out[0].push_back(rep.entries[i].shot_level);
    out[1].push_back(rep.entries[i].sensitivity);
    out[2].push_back(rep.entries[i].sigma_y_shot);
    out[3].push_back(rep.entries[i].sigma_y_1s);
  }
  // Totals appended as the last two rows (source_index -1: total, -2: qpn).
  idx.push_back(-1.0);
  out[0].push_back(0.0);
  out[1].push_back(0.0);
  out[2].push_back(rep.total_shot);
  out[3].push_back(rep.total_1s);
  idx.push_back(-2.0);
  out[0].push_back(0.0);
  out[1].push_back(0.0);
  out[2].push_back(rep.qpn_shot);
  out[3].push_back(rep.qpn_1s);
  ssr::write_csv(fs::path(o.out_dir) / (sc.name + "_budget.csv"),
                 {"source_index", "shot_level", "sensitivity_hz_per_unit", "sigma_y_shot",
                  "sigma_y_1s"},
                 {idx, out[0], out[1], out[2], out[3]});
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin self-rephasing clock toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string fit_model, data_path, noise_type = "white";
  double t_min = 0.0, t_max = -1.0, cycle = 0.0;
  bool synth = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", opts.scenario, "scenario name under --scenario-dir");
    cmd->add_option("--config", opts.config_path, "explicit scenario file path");
    cmd->add_option("--scenario-dir", opts.scenario_dir, "scenario directory");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "RNG seed for synthesis");
  };

  CLI::App* predict = app.add_subcommand("predict", "rates and SSR condition report");
  add_common(predict);
  CLI::App* simulate = app.add_subcommand("simulate", "Ramsey interrogation-time scans");
  add_common(simulate);
  CLI::App* fit = app.add_subcommand("fit", "model fits of measurement CSVs");
  add_common(fit);
  fit->add_option("--model", fit_model, "fringe|ssr|shift-line|dls")->required();
  fit->add_option("--data", data_path, "input CSV")->required();
  fit->add_option("--tmin", t_min, "fit window start (s)");
  fit->add_option("--tmax", t_max, "fit window end (s)");
  CLI::App* allan = app.add_subcommand("allan", "overlapping Allan deviation");
  add_common(allan);
  allan->add_option("--data", data_path, "shot CSV with a y column");
  allan->add_option("--cycle", cycle, "cycle time of --data input (s)");
  allan->add_flag("--synth", synth, "synthesize a series from the scenario [stability]");
  allan->add_option("--noise", noise_type, "white|random-walk (with --synth)");
  CLI::App* budget = app.add_subcommand("budget", "per-source noise budget");
  add_common(budget);

  CLI11_PARSE(app, argc, argv);

  try {
    if (predict->parsed()) return cmd_predict(opts);
    if (simulate->parsed()) return cmd_simulate(opts);
    if (fit->parsed()) return cmd_fit(opts, fit_model, data_path, t_min, t_max);
    if (allan->parsed()) return cmd_allan(opts, data_path, cycle, synth, noise_type);
    if (budget->parsed()) return cmd_budget(opts);
  } catch (const ssr::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const ssr::physics_error& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return exit_physics;
  } catch (const ssr::convergence_error& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return exit_convergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_ok;
}
