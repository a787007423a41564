#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypac/diagnostics.hpp"
#include "hypac/interface_ode.hpp"
#include "hypac/moving_frame.hpp"
#include "hypac/radial_pde.hpp"

namespace hypac {

enum class Mode { pde, ode, sweep, compare, check };
enum class Timescale { fast, slow };

struct ExperimentConfig {
  Mode mode = Mode::pde;
  int n = 2;
  double eps = 0.02;
  double tau = 1.0;
  std::string tau_schedule;  // empty -> constant tau; "const:v" | "power:c,p"
  std::vector<double> eps_list;
  std::vector<double> etas;
  double rho0 = 0.6;
  double nu0 = 0.0;
  double eta = -1.0;  // ode mode; <= 0 derives eps^2 * tau
  double t_end = 0.2;
  double T = 0.15;   // analysis horizon (sweep/compare)
  double t1 = 0.02;  // interior time for velocity sups
  double tol = 1e-9;
  std::vector<double> snapshot_times;
  int points_per_eps = 10;
  double safety = 0.5;
  int series_stride = 10;
  std::string potential = "quartic";
  std::string damping = "const:1";
  double boundary = 1.0;
  bool allow_exterior = false;
  bool frame = false;
  double alpha = 0.5;
  double window_a = -1.0;
  double frame_T = 0.14;
  std::string out = "out";
  int workers = 1;
  Timescale timescale = Timescale::fast;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// tau(eps) from the schedule string, falling back to the constant tau.
double schedule_tau(const ExperimentConfig& c, double eps);

struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // >= 0 means slack, < 0 means violation
};

struct CompareRow {
  double eps = 0.0;
  double l1_vs_interface = 0.0;  // time-integrated step distance, inertial
  double l1_vs_classical = 0.0;  // same against the classical radius
  double sup_interface_gap = 0.0;
  double max_d_eps = 0.0;
  bool failed = false;
};

std::vector<CompareRow> compare(const ExperimentConfig& c,
                                std::vector<std::string>* files = nullptr);

// Writes the summary JSON and returns the process exit status:
// 0 all checks pass, 1 a named check failed, 2 nothing ran.
int emit_summary(
    const ExperimentConfig& c, const std::string& experiment,
    const std::vector<CheckResult>& checks,
    const std::vector<std::string>& files,
    const std::vector<std::pair<std::string, double>>& extra_params = {});

// Executes the configured mode, writes outputs under c.out, and returns
// the exit status from emit_summary (or 1 on solver failure).
int run_experiment(const ExperimentConfig& c);

}  // namespace hypac
