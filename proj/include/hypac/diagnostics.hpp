#pragma once

#include <optional>
#include <vector>

#include "hypac/potential.hpp"
#include "hypac/radial_pde.hpp"

namespace hypac {

// Fixed-frame energy with radial measure.
double energy_eps(const FieldState& s, const RadialGrid& g, double eps,
                  double tau, int n, const Potential& pot);

// Integral of F(u) with radial measure (stays below eps * E(0)).
double potential_mass(const FieldState& s, const RadialGrid& g, int n,
                      const Potential& pot);

// Total variation of Psi(u) in space with radial measure.
double psi_grad_bv(const FieldState& s, const RadialGrid& g, int n,
                   const Potential& pot);

// Largest (or nearest-to-previous) zero crossing of u; absent if u keeps
// one sign.
std::optional<double> extract_interface(
    const FieldState& s, const RadialGrid& g,
    std::optional<double> prev_rho = std::nullopt);

// L1 distance with radial measure between u and the sharp step that is
// -1 below rho_ref and +1 above.
double l1_step_distance(const FieldState& s, const RadialGrid& g, int n,
                        double rho_ref);

// L1 distance between two sharp steps: (2/n) |rho1^n - rho2^n|.
double omega_pair_distance(double rho_eps, double rho_ref, int n);

// Per-sample scalar reductions recorded along a run through the hook.
struct SeriesSample {
  double t = 0.0;
  double E = 0.0;           // energy_eps
  double int_F = 0.0;       // potential_mass
  double diss_g = 0.0;      // eps * integral of g(u) w^2 (radial measure)
  double diss_plain = 0.0;  // eps * integral of w^2
  double grad_bv = 0.0;     // psi_grad_bv
  double u_max = 0.0;       // max |u| over the grid
  std::optional<double> interface_rho;
};

class SeriesRecorder {
 public:
  SeriesRecorder(const PdeParams& p, const RadialGrid& g);
  void operator()(const FieldState& s);
  const std::vector<SeriesSample>& samples() const { return samples_; }

 private:
  const PdeParams& p_;
  const RadialGrid& g_;
  std::optional<double> prev_rho_;
  std::vector<SeriesSample> samples_;
};

// Trapezoid of the recorded dissipation rate over [t1, t2]; sample times
// must cover the interval.
double dissipation_lhs(const std::vector<SeriesSample>& series, double t1,
                       double t2);

// Per-interval residuals of the dissipation identity between consecutive
// states of a run.
std::vector<double> dissipation_residual(const std::vector<FieldState>& series,
                                         const RadialGrid& g, double eps,
                                         double tau, int n,
                                         const Potential& pot,
                                         const Damping& damping);

struct EnergyReport {
  double t = 0.0;
  double E_eps = 0.0;
  double dissipation_lhs = 0.0;  // over [t_prev, t]
  double dissipation_rhs = 0.0;  // E(t_prev) - E(t)
  double residual = 0.0;
  double psi_grad_bv = 0.0;
  std::optional<double> interface_rho;
};

// Reports at the sample times closest to `report_times`, with the
// dissipation interval taken between consecutive reports.
std::vector<EnergyReport> energy_reports(
    const std::vector<SeriesSample>& series,
    const std::vector<double>& report_times);

struct PsiVariationPair {
  size_t i = 0, j = 0;
  double time_bv = 0.0;       // integral of |Psi(u(tj)) - Psi(u(ti))|
  double holder_check = 0.0;  // time_bv / (sqrt(2/kappa) M sqrt(tj-ti))
};

struct PsiVariationReport {
  std::vector<double> grad_bv;          // per state
  std::vector<PsiVariationPair> pairs;  // all i < j
  double M = 0.0;                       // observed initial energy
};

PsiVariationReport psi_variation(const std::vector<FieldState>& series,
                                 const RadialGrid& g, double eps, double tau,
                                 double kappa, int n, const Potential& pot);

struct VelocityCurvatureRow {
  double t = 0.0;
  double measured_V = 0.0;
  double K_over_gbar = 0.0;
  double ratio = 0.0;  // g_bar |V| / K, tends to 1
};

// Centered-difference interface velocity against curvature, with the
// first and last 10% of the series excluded.
std::vector<VelocityCurvatureRow> velocity_curvature_check(
    const std::vector<double>& times, const std::vector<double>& radii,
    double g_bar, int n);

}  // namespace hypac
