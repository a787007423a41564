#include "hypac/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hypac/csv.hpp"
#include "hypac/gridops.hpp"
#include "hypac/initial_data.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace hypac {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("config: bad boolean value '" + s + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "pde") return Mode::pde;
  if (s == "ode") return Mode::ode;
  if (s == "sweep") return Mode::sweep;
  if (s == "compare") return Mode::compare;
  if (s == "check") return Mode::check;
  throw std::invalid_argument("config: unknown mode '" + s + "'");
}

std::string num_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double time_scale_factor(const ExperimentConfig& c, double eps) {
  if (c.timescale == Timescale::fast) return 1.0;
  if (!(eps > 0.0))
    throw std::invalid_argument("timescale slow needs a positive eps");
  return 1.0 / (eps * eps);
}

struct PdeArtifacts {
  PdeParams params;
  RadialGrid grid;
  std::vector<SeriesSample> series;
  std::vector<FieldState> snapshots;
  FieldState final_state;
  PreparednessReport prep;
  std::optional<double> t_extinct;  // first series time without interface
  double E0 = 0.0;
};

PdeArtifacts run_pde_experiment(const ExperimentConfig& c, double eps,
                                double tau,
                                const std::vector<double>& snapshot_times) {
  PdeArtifacts art;
  art.params.n = c.n;
  art.params.eps = eps;
  art.params.tau = tau;
  art.params.potential = potential_from_spec(c.potential);
  art.params.damping = damping_from_spec(c.damping);
  art.params.t_end = c.t_end;
  art.params.boundary = c.boundary;
  validate_potential(art.params.potential);
  validate_damping(art.params.damping);
  validate(art.params);

  art.grid = build_grid(eps, c.points_per_eps);
  const WaveProfile profile = standing_wave(art.params.potential, 20.0, 4001);
  FieldState init = layer_initial_data(art.grid, eps, c.rho0, profile);
  art.prep = preparedness_report(init, art.grid, eps, tau, c.n, c.rho0,
                                 art.params.potential);

  SeriesRecorder rec(art.params, art.grid);
  RunResult rr = run(art.params, art.grid, std::move(init), snapshot_times,
                     std::ref(rec), c.series_stride);
  art.series = rec.samples();
  art.snapshots = std::move(rr.snapshots);
  art.final_state = std::move(rr.final);
  art.E0 = art.series.front().E;
  bool seen = false;
  for (const auto& s : art.series) {
    if (s.interface_rho) {
      seen = true;
    } else if (seen) {
      art.t_extinct = s.t;
      break;
    }
  }
  return art;
}

double max_interval_residual(const std::vector<SeriesSample>& series,
                             const std::vector<double>& marks) {
  double worst = 0.0;
  for (size_t k = 0; k + 1 < marks.size(); ++k) {
    const double t1 = marks[k], t2 = marks[k + 1];
    auto near = [&](double t) {
      const SeriesSample* best = &series.front();
      for (const auto& s : series)
        if (std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
      return best;
    };
    const auto* a = near(t1);
    const auto* b = near(t2);
    if (!(b->t > a->t)) continue;
    const double lhs = dissipation_lhs(series, a->t, b->t);
    const double rhs = a->E - b->E;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

std::vector<double> decile_marks(const std::vector<SeriesSample>& series) {
  std::vector<double> marks;
  const double t0 = series.front().t, t1 = series.back().t;
  for (int k = 0; k <= 10; ++k) marks.push_back(t0 + (t1 - t0) * k / 10.0);
  return marks;
}

void append_pde_checks(const PdeArtifacts& art,
                       const std::vector<double>& snapshot_times,
                       std::vector<CheckResult>* checks,
                       const std::string& prefix = "") {
  const auto& series = art.series;
  const double E0 = art.E0;

  double worst_rise = 0.0;
  const double dt = stable_dt(art.params, art.grid, 0.5);
  for (size_t k = 0; k + 1 < series.size(); ++k) {
    const double budget = 10.0 * dt * E0 * (series[k + 1].t - series[k].t);
    worst_rise = std::max(worst_rise, series[k + 1].E - series[k].E - budget);
  }
  checks->push_back({prefix + "energy_nonincreasing", worst_rise <= 0.0, -worst_rise});

  double mass_margin = 1e300;
  for (const auto& s : series)
    mass_margin = std::min(mass_margin, art.params.eps * E0 - s.int_F);
  checks->push_back({prefix + "potential_mass_bound", mass_margin >= 0.0, mass_margin});

  const auto marks = snapshot_times.size() >= 2
                         ? snapshot_times
                         : decile_marks(series);
  const double worst_res = max_interval_residual(series, marks);
  const double res_margin = 1e-2 * E0 - worst_res;
  checks->push_back({prefix + "dissipation_residual", res_margin >= 0.0, res_margin});

  // The 1+eps envelope holds while the layer exists; the inertial collapse
  // rings past +1 before damping settles it, so only a uniform constant
  // bounds the whole run.
  double u_max_layer = 0.0, u_max_all = 0.0;
  for (const auto& s : series) {
    u_max_all = std::max(u_max_all, s.u_max);
    if (s.interface_rho) u_max_layer = std::max(u_max_layer, s.u_max);
  }
  const double layer_margin = 1.0 + art.params.eps - u_max_layer;
  checks->push_back({prefix + "boundedness_layer_phase", layer_margin >= 0.0,
                     layer_margin});
  checks->push_back({prefix + "boundedness_uniform", u_max_all <= 2.0,
                     2.0 - u_max_all});

  double grad_margin = 1e300;
  for (const auto& s : series)
    grad_margin = std::min(grad_margin, s.E - s.grad_bv);
  checks->push_back({prefix + "psi_gradient_below_energy",
                     grad_margin >= 0.0, grad_margin});
}

void write_series_csv(const std::string& path,
                      const std::vector<SeriesSample>& series,
                      double t_factor) {
  CsvWriter csv(path, {"t", "E_eps", "rho_interface", "dissipation_residual"});
  for (size_t k = 0; k < series.size(); ++k) {
    double res = 0.0;
    if (k > 0) {
      const double lhs =
          0.5 * (series[k - 1].diss_g + series[k].diss_g) *
          (series[k].t - series[k - 1].t);
      res = lhs - (series[k - 1].E - series[k].E);
    }
    const double rho = series[k].interface_rho
                           ? *series[k].interface_rho
                           : std::nan("");
    csv.row(std::vector<double>{series[k].t * t_factor, series[k].E, rho,
                                res});
  }
}

void write_snapshot_csv(const std::string& dir, const FieldState& s,
                        const RadialGrid& g, double eps,
                        std::vector<std::string>* files) {
  const std::string name = "snap_fast" + num_tag(s.t) + "_slow" +
                           num_tag(to_slow_time(s.t, eps)) + ".csv";
  CsvWriter csv(dir + "/" + name, {"r", "u", "w"});
  for (size_t i = 0; i < g.r.size(); ++i)
    csv.row(std::vector<double>{g.r[i], s.u[i], s.w[i]});
  files->push_back(name);
}

void write_preparedness_csv(const std::string& path,
                            const std::vector<std::array<double, 9>>& rows) {
  CsvWriter csv(path,
                {"eps", "tau", "n", "rho0", "weighted_energy", "c0", "excess",
                 "residual_R", "residual_bound"});
  for (const auto& r : rows) csv.row(r);
}

std::array<double, 9> preparedness_row(const ExperimentConfig& c, double eps,
                                       double tau,
                                       const PreparednessReport& p) {
  return {eps, tau, static_cast<double>(c.n), c.rho0, p.weighted_energy, p.c0,
          p.excess, p.residual_R, p.residual_bound};
}

void write_frame_csv(const std::string& path,
                     const std::vector<FrameSample>& rows, double t_factor) {
  CsvWriter csv(path, {"t", "E_phi", "P_phi", "d_eps_from_0", "alpha_margin"});
  for (const auto& r : rows)
    csv.row(std::vector<double>{r.t * t_factor, r.E_phi, r.P_phi,
                                r.d_eps_from_0, r.alpha_margin});
}

int run_ode_mode(const ExperimentConfig& c) {
  if (c.timescale == Timescale::slow && c.eta > 0.0)
    throw std::invalid_argument(
        "ode: slow timescale needs eps and tau, not a bare eta");
  OdeParams p;
  p.n = c.n;
  p.eta = c.eta > 0.0 ? c.eta : c.eps * c.eps * c.tau;
  p.rho0 = c.rho0;
  p.nu0 = c.nu0;
  p.allow_exterior = c.allow_exterior;
  OdeTrajectory traj = integrate_to_extinction(p, c.tol);

  fs::create_directories(c.out);
  const double tf = time_scale_factor(c, c.eps);
  {
    CsvWriter csv(c.out + "/trajectory.csv", {"t", "rho", "nu"});
    for (size_t k = 0; k < traj.times.size(); ++k)
      csv.row(std::vector<double>{traj.times[k] * tf, traj.rho[k],
                                  traj.nu[k]});
  }

  std::vector<CheckResult> checks;
  const bool in_gamma =
      p.nu0 <= 0.0 && p.nu0 >= -(p.n - 1) / p.rho0 && !c.allow_exterior;
  if (in_gamma) {
    double worst = 1e300;
    for (size_t k = 0; k < traj.times.size(); ++k) {
      worst = std::min(worst, -traj.nu[k]);
      worst = std::min(worst, traj.rho[k] * traj.nu[k] + (p.n - 1));
    }
    checks.push_back({"invariant_region", worst >= -1e-8, worst});
  }
  checks.push_back({"extinction_reached", traj.t_extinction.has_value(),
                    traj.t_extinction.value_or(-1.0)});
  if (traj.t_extinction) {
    const double lower = t_max(p.n, p.rho0);
    double margin = *traj.t_extinction - lower;
    if (p.nu0 < 0.0)
      margin = std::min(margin, p.rho0 / -p.nu0 - *traj.t_extinction);
    checks.push_back({"extinction_bracket", margin >= -c.tol * 10, margin});
  }

  std::vector<std::pair<std::string, double>> extra{
      {"eta", p.eta}, {"t_extinction", traj.t_extinction.value_or(-1.0)},
      {"truncated", traj.truncated ? 1.0 : 0.0}};
  return emit_summary(c, "ode", checks, {"trajectory.csv"}, extra);
}

int run_pde_mode(const ExperimentConfig& c) {
  fs::create_directories(c.out);
  std::vector<std::string> files;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, double>> extra;
  try {
    PdeArtifacts art = run_pde_experiment(c, c.eps, c.tau, c.snapshot_times);
    const double tf = time_scale_factor(c, c.eps);
    write_series_csv(c.out + "/series.csv", art.series, tf);
    files.push_back("series.csv");
    for (const auto& s : art.snapshots)
      write_snapshot_csv(c.out, s, art.grid, c.eps, &files);
    write_preparedness_csv(c.out + "/preparedness.csv",
                           {preparedness_row(c, c.eps, c.tau, art.prep)});
    files.push_back("preparedness.csv");
    append_pde_checks(art, c.snapshot_times, &checks);
    if (art.t_extinct)
      extra.push_back({"t_extinction_fast", *art.t_extinct});
    extra.push_back({"E0", art.E0});
    if (c.frame) {
      FrameParams fp{c.alpha, c.window_a, c.frame_T};
      auto frame = frame_analysis(art.snapshots, art.grid, c.n, c.eps, c.tau,
                                  c.rho0, c.nu0, art.params.potential, fp);
      write_frame_csv(c.out + "/frame.csv", frame, tf);
      files.push_back("frame.csv");
      double drift = 0.0;
      for (const auto& r : frame)
        drift = std::max(drift, r.E_phi - frame.front().E_phi);
      const double c0 = art.prep.c0;
      checks.push_back(
          {"frame_energy_controlled", drift <= 0.05 * c0, 0.05 * c0 - drift});
    }
  } catch (const BlowUpError& e) {
    checks.push_back({"no_blowup", false, e.time});
    emit_summary(c, "pde", checks, files);
    return 1;
  }
  return emit_summary(c, "pde", checks, files);
}

int run_sweep_mode(const ExperimentConfig& c) {
  fs::create_directories(c.out);
  if (!c.etas.empty()) {
    auto rows = convergence_sweep(c.n, c.rho0, c.nu0, c.etas, c.T, c.t1,
                                  c.tol);
    CsvWriter csv(c.out + "/sweep.csv",
                  {"eta", "sup_error_rho", "sup_error_nu"});
    for (const auto& r : rows)
      csv.row(std::vector<double>{r.eta, r.sup_error_rho, r.sup_error_nu});
    std::vector<CheckResult> checks;
    double worst = 1e300;
    for (size_t k = 0; k + 1 < rows.size(); ++k)
      worst = std::min(worst,
                       rows[k].sup_error_rho - rows[k + 1].sup_error_rho);
    checks.push_back({"sup_error_rho_decreasing", worst > 0.0, worst});
    return emit_summary(c, "sweep", checks, {"sweep.csv"});
  }

  if (c.eps_list.empty())
    throw std::invalid_argument("sweep: need etas or eps_list");
  std::vector<double> eps_list = c.eps_list;
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  std::vector<std::string> files;
  std::vector<CheckResult> checks;
  std::vector<std::array<double, 9>> prep_rows(eps_list.size());
  std::vector<std::vector<CheckResult>> entry_checks(eps_list.size());

  auto run_entry = [&](size_t i) {
    const double eps = eps_list[i];
    const double tau = schedule_tau(c, eps);
    ExperimentConfig sub = c;
    sub.eps = eps;
    sub.tau = tau;
    PdeArtifacts art = run_pde_experiment(sub, eps, tau, c.snapshot_times);
    const std::string sub_dir = c.out + "/eps_" + num_tag(eps);
    fs::create_directories(sub_dir);
    write_series_csv(sub_dir + "/series.csv", art.series,
                     time_scale_factor(c, eps));
    prep_rows[i] = preparedness_row(c, eps, tau, art.prep);
    append_pde_checks(art, c.snapshot_times, &entry_checks[i],
                      "eps_" + num_tag(eps) + "/");
  };
  const size_t workers = std::max(1, c.workers);
  for (size_t start = 0; start < eps_list.size(); start += workers) {
    const size_t stop = std::min(start + workers, eps_list.size());
    std::vector<std::future<void>> futs;
    for (size_t i = start; i < stop; ++i)
      futs.push_back(std::async(std::launch::async, run_entry, i));
    for (auto& f : futs) f.get();
  }
  for (size_t i = 0; i < eps_list.size(); ++i) {
    files.push_back("eps_" + num_tag(eps_list[i]) + "/series.csv");
    checks.insert(checks.end(), entry_checks[i].begin(),
                  entry_checks[i].end());
  }
  write_preparedness_csv(c.out + "/preparedness.csv", prep_rows);
  files.push_back("preparedness.csv");
  if (prep_rows.size() >= 2) {
    double worst = 1e300;
    for (size_t k = 0; k + 1 < prep_rows.size(); ++k)
      worst = std::min(worst, std::abs(prep_rows[k][6]) -
                                  std::abs(prep_rows[k + 1][6]));
    checks.push_back({"preparedness_excess_decreasing", worst > 0.0, worst});
    const double c0 = prep_rows.back()[5];
    const double final_gap = 0.05 * c0 - std::abs(prep_rows.back()[6]);
    checks.push_back({"preparedness_final_5pct", final_gap >= 0.0, final_gap});
  }
  return emit_summary(c, "sweep", checks, files);
}

CompareRow compare_entry(const ExperimentConfig& c, double eps) {
  const double tau = schedule_tau(c, eps);
  CompareRow row;
  row.eps = eps;

  std::vector<double> snaps;
  const int n_out = 30;
  for (int k = 0; k <= n_out; ++k) snaps.push_back(c.T * k / n_out);

  ExperimentConfig sub = c;
  sub.eps = eps;
  sub.tau = tau;
  sub.t_end = c.T;
  PdeArtifacts art = run_pde_experiment(sub, eps, tau, snaps);

  const std::string sub_dir = c.out + "/eps_" + num_tag(eps);
  fs::create_directories(sub_dir);
  write_series_csv(sub_dir + "/series.csv", art.series,
                   time_scale_factor(c, eps));
  write_preparedness_csv(sub_dir + "/preparedness.csv",
                         {preparedness_row(c, eps, tau, art.prep)});

  OdeParams op{c.n, eps * eps * tau, c.rho0, c.nu0, false};
  const auto ode_at_snaps = sample_dense(op, c.tol, snaps);

  std::vector<double> l1_eps(snaps.size()), l1_cls(snaps.size());
  for (size_t k = 0; k < snaps.size(); ++k) {
    l1_eps[k] = l1_step_distance(art.snapshots[k], art.grid, c.n,
                                 ode_at_snaps[k][0]);
    l1_cls[k] = l1_step_distance(art.snapshots[k], art.grid, c.n,
                                 mcf_exact(c.n, c.rho0, snaps[k]));
  }
  row.l1_vs_interface = trapz(snaps, l1_eps);
  row.l1_vs_classical = trapz(snaps, l1_cls);

  std::vector<double> gap_times;
  for (const auto& s : art.series)
    if (s.interface_rho && s.t >= c.t1 && s.t <= c.frame_T)
      gap_times.push_back(s.t);
  const auto ode_at_series = sample_dense(op, c.tol, gap_times);
  size_t gi = 0;
  for (const auto& s : art.series) {
    if (!(s.interface_rho && s.t >= c.t1 && s.t <= c.frame_T)) continue;
    row.sup_interface_gap =
        std::max(row.sup_interface_gap,
                 std::abs(*s.interface_rho - ode_at_series[gi][0]));
    ++gi;
  }

  FrameParams fp{c.alpha, c.window_a, c.frame_T};
  auto frame = frame_analysis(art.snapshots, art.grid, c.n, eps, tau, c.rho0,
                              c.nu0, art.params.potential, fp);
  for (const auto& f : frame)
    row.max_d_eps = std::max(row.max_d_eps, f.d_eps_from_0);
  return row;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig c;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "mode") c.mode = parse_mode(val);
    else if (key == "n") c.n = std::stoi(val);
    else if (key == "eps") c.eps = std::stod(val);
    else if (key == "tau") c.tau = std::stod(val);
    else if (key == "tau_schedule") c.tau_schedule = val;
    else if (key == "eps_list") c.eps_list = parse_list(val);
    else if (key == "etas") c.etas = parse_list(val);
    else if (key == "rho0") c.rho0 = std::stod(val);
    else if (key == "nu0") c.nu0 = std::stod(val);
    else if (key == "eta") c.eta = std::stod(val);
    else if (key == "t_end") c.t_end = std::stod(val);
    else if (key == "T") c.T = std::stod(val);
    else if (key == "t1") c.t1 = std::stod(val);
    else if (key == "tol") c.tol = std::stod(val);
    else if (key == "snapshot_times") c.snapshot_times = parse_list(val);
    else if (key == "points_per_eps") c.points_per_eps = std::stoi(val);
    else if (key == "safety") c.safety = std::stod(val);
    else if (key == "series_stride") c.series_stride = std::stoi(val);
    else if (key == "potential") c.potential = val;
    else if (key == "damping") c.damping = val;
    else if (key == "boundary") c.boundary = std::stod(val);
    else if (key == "allow_exterior") c.allow_exterior = parse_bool(val);
    else if (key == "frame") c.frame = parse_bool(val);
    else if (key == "alpha") c.alpha = std::stod(val);
    else if (key == "window_a") c.window_a = std::stod(val);
    else if (key == "frame_T") c.frame_T = std::stod(val);
    else if (key == "out") c.out = val;
    else if (key == "workers") c.workers = std::stoi(val);
    else if (key == "timescale") {
      if (val == "fast") c.timescale = Timescale::fast;
      else if (val == "slow") c.timescale = Timescale::slow;
      else throw std::invalid_argument("config: timescale must be fast|slow");
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

double schedule_tau(const ExperimentConfig& c, double eps) {
  if (c.tau_schedule.empty()) return c.tau;
  if (c.tau_schedule.rfind("const:", 0) == 0)
    return std::stod(c.tau_schedule.substr(6));
  if (c.tau_schedule.rfind("power:", 0) == 0) {
    std::vector<double> cp = parse_list(c.tau_schedule.substr(6));
    if (cp.size() != 2)
      throw std::invalid_argument("tau_schedule power: expected c,p");
    return cp[0] * std::pow(eps, cp[1]);
  }
  throw std::invalid_argument("unknown tau_schedule: " + c.tau_schedule);
}

int emit_summary(const ExperimentConfig& c, const std::string& experiment,
                 const std::vector<CheckResult>& checks,
                 const std::vector<std::string>& files,
                 const std::vector<std::pair<std::string, double>>& extra) {
  json params{{"n", c.n},
              {"eps", c.eps},
              {"tau", c.tau},
              {"rho0", c.rho0},
              {"nu0", c.nu0},
              {"t_end", c.t_end},
              {"potential", c.potential},
              {"damping", c.damping},
              {"points_per_eps", c.points_per_eps},
              {"timescale", c.timescale == Timescale::fast ? "fast" : "slow"}};
  for (const auto& [k, v] : extra) params[k] = v;
  json jchecks = json::array();
  bool all_pass = true;
  for (const auto& ch : checks) {
    jchecks.push_back(
        {{"name", ch.name}, {"pass", ch.pass}, {"margin", ch.margin}});
    all_pass = all_pass && ch.pass;
  }
  json summary{{"experiment", experiment},
               {"params", params},
               {"checks", jchecks},
               {"files", files}};
  fs::create_directories(c.out);
  std::ofstream out(c.out + "/summary.json");
  out << summary.dump(2) << '\n';
  if (checks.empty() && files.empty()) return 2;
  return all_pass ? 0 : 1;
}

std::vector<CompareRow> compare(const ExperimentConfig& c,
                                std::vector<std::string>* files) {
  if (c.eps_list.size() < 3)
    throw std::invalid_argument("compare: need at least 3 eps entries");
  if (!(c.T < t_max(c.n, c.rho0)))
    throw std::invalid_argument("compare: T must be below extinction");
  std::vector<double> eps_list = c.eps_list;
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());

  std::vector<CompareRow> rows(eps_list.size());
  const size_t workers = std::max(1, c.workers);
  for (size_t start = 0; start < eps_list.size(); start += workers) {
    const size_t stop = std::min(start + workers, eps_list.size());
    std::vector<std::future<CompareRow>> futs;
    for (size_t i = start; i < stop; ++i)
      futs.push_back(std::async(std::launch::async, compare_entry, c,
                                eps_list[i]));
    for (size_t i = start; i < stop; ++i) {
      try {
        rows[i] = futs[i - start].get();
      } catch (const std::exception&) {
        rows[i].eps = eps_list[i];
        rows[i].failed = true;
        rows[i].l1_vs_interface = std::nan("");
        rows[i].l1_vs_classical = std::nan("");
        rows[i].sup_interface_gap = std::nan("");
        rows[i].max_d_eps = std::nan("");
      }
    }
  }
  if (files)
    for (double eps : eps_list) {
      files->push_back("eps_" + num_tag(eps) + "/series.csv");
      files->push_back("eps_" + num_tag(eps) + "/preparedness.csv");
    }
  return rows;
}

namespace {

int run_compare_mode(const ExperimentConfig& c) {
  fs::create_directories(c.out);
  std::vector<std::string> files;
  auto rows = compare(c, &files);
  CsvWriter csv(c.out + "/compare.csv",
                {"eps", "l1_vs_interface", "l1_vs_classical",
                 "sup_interface_gap", "max_d_eps", "failed"});
  for (const auto& r : rows)
    csv.row(std::vector<double>{r.eps, r.l1_vs_interface, r.l1_vs_classical,
                                r.sup_interface_gap, r.max_d_eps,
                                r.failed ? 1.0 : 0.0});
  files.insert(files.begin(), "compare.csv");

  std::vector<CheckResult> checks;
  bool ok = true;
  for (const auto& r : rows) ok = ok && !r.failed;
  checks.push_back({"all_entries_ok", ok, ok ? 0.0 : -1.0});
  if (ok) {
    double worst_i = 1e300, worst_c = 1e300;
    for (size_t k = 0; k + 1 < rows.size(); ++k) {
      worst_i = std::min(worst_i,
                         rows[k].l1_vs_interface - rows[k + 1].l1_vs_interface);
      worst_c = std::min(worst_c,
                         rows[k].l1_vs_classical - rows[k + 1].l1_vs_classical);
    }
    checks.push_back({"l1_interface_decreasing", worst_i > 0.0, worst_i});
    checks.push_back({"l1_classical_decreasing", worst_c > 0.0, worst_c});
  }
  return emit_summary(c, "compare", checks, files);
}

int run_check_mode(const ExperimentConfig& c) {
  std::vector<CheckResult> checks;
  const Potential pot = potential_from_spec(c.potential);
  const Damping damp = damping_from_spec(c.damping);

  try {
    validate_potential(pot);
    validate_damping(damp);
    checks.push_back({"potential_and_damping_valid", true, 0.0});
  } catch (const std::exception&) {
    checks.push_back({"potential_and_damping_valid", false, -1.0});
  }

  {  // Psi monotone on sampled pairs
    double worst = 1e300;
    double prev = psi(pot, -0.999);
    for (int i = 1; i <= 40; ++i) {
      const double x = -0.999 + 1.998 * i / 40.0;
      const double cur = psi(pot, x);
      worst = std::min(worst, cur - prev);
      prev = cur;
    }
    checks.push_back({"psi_strictly_increasing", worst > 0.0, worst});
  }

  {  // invariant region of the radius equation
    OdeParams p{c.n, c.eps * c.eps * c.tau, c.rho0, 0.0, false};
    auto traj = integrate_to_extinction(p, c.tol);
    double worst = 1e300;
    for (size_t k = 0; k < traj.times.size(); ++k) {
      worst = std::min(worst, -traj.nu[k]);
      worst = std::min(worst, traj.rho[k] * traj.nu[k] + (p.n - 1));
    }
    checks.push_back({"ode_invariant_region", worst >= -1e-8, worst});

    // weight endpoint identities and symmetry along the same trajectory
    double worst_phi = 1e300;
    const double T_ok = 0.9 * t_max(c.n, c.rho0);
    for (size_t k = 0; k < traj.times.size(); k += std::max<size_t>(
             1, traj.times.size() / 20)) {
      if (traj.times[k] > T_ok) break;
      const double rho = traj.rho[k], nu = traj.nu[k];
      worst_phi = std::min(worst_phi,
                           -std::abs(phi_eval(c.n, c.eps, c.tau, rho, nu,
                                              -rho)));
      worst_phi = std::min(
          worst_phi, -std::abs(phi_eval(c.n, c.eps, c.tau, rho, nu, 0.0) -
                               1.0));
      for (int j = 1; j <= 50; ++j) {
        const double R = rho * j / 51.0;
        const double sym = phi_eval(c.n, c.eps, c.tau, rho, nu, R) -
                           phi_eval(c.n, c.eps, c.tau, rho, nu, -R);
        worst_phi = std::min(worst_phi, sym);
        const double val = phi_eval(c.n, c.eps, c.tau, rho, nu, R);
        worst_phi = std::min(worst_phi, val);
        worst_phi = std::min(worst_phi, 1.0 - val);
      }
    }
    checks.push_back({"phi_properties", worst_phi >= -1e-12, worst_phi});
  }

  {  // equilibrium state is a fixed point of the stepper
    ExperimentConfig sub = c;
    sub.t_end = 0.0;
    PdeParams p;
    p.n = c.n;
    p.eps = c.eps;
    p.tau = c.tau;
    p.potential = pot;
    p.damping = damp;
    p.boundary = 1.0;
    RadialGrid g = build_grid(c.eps, c.points_per_eps);
    FieldState s;
    s.u.assign(g.r.size(), 1.0);
    s.w.assign(g.r.size(), 0.0);
    FieldState out = step(p, g, s, stable_dt(p, g, 0.5));
    double dev = 0.0;
    for (size_t i = 0; i < out.u.size(); ++i)
      dev = std::max(dev, std::abs(out.u[i] - 1.0) + std::abs(out.w[i]));
    checks.push_back({"pde_equilibrium_fixed_point", dev <= 1e-14,
                      1e-14 - dev});
  }

  return emit_summary(c, "check", checks, {});
}

}  // namespace

int run_experiment(const ExperimentConfig& c) {
  switch (c.mode) {
    case Mode::ode: return run_ode_mode(c);
    case Mode::pde: return run_pde_mode(c);
    case Mode::sweep: return run_sweep_mode(c);
    case Mode::compare: return run_compare_mode(c);
    case Mode::check: return run_check_mode(c);
  }
  throw std::invalid_argument("run_experiment: unknown mode");
}

}  // namespace hypac
