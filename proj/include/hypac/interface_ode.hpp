#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace hypac {

// Parameters of the interface radius equation
//   eta * nu' = -nu - (n-1)/rho,   rho' = nu,   eta = eps^2 * tau.
struct OdeParams {
  int n = 2;           // spatial dimension, 2 or 3
  double eta = 1e-4;   // inertial time-squared scale, > 0
  double rho0 = 0.6;   // initial radius in (0,1)
  double nu0 = 0.0;    // initial velocity in [-(n-1)/rho0, 0]
  bool allow_exterior = false;  // permit initial data outside the
                                // invariant region (demo runs)
};

void validate(const OdeParams& p);

struct OdeTrajectory {
  std::vector<double> times;
  std::vector<double> rho;
  std::vector<double> nu;
  std::optional<double> t_extinction;
  bool truncated = false;  // step underflow before the event level
};

// One accepted step with endpoint derivatives (enough for cubic Hermite
// dense output).
struct StepRecord {
  double t0, t1;
  std::array<double, 2> y0, y1;  // (rho, nu)
  std::array<double, 2> f0, f1;
};

using StepCallback = std::function<void(const StepRecord&)>;

// Cubic Hermite evaluation of a stored step at t in [t0, t1].
std::array<double, 2> hermite_eval(const StepRecord& s, double t);

// Classical shrinking-sphere radius sqrt(rho0^2 - 2(n-1)t).
double mcf_exact(int n, double rho0, double t);

// Classical extinction time rho0^2 / (2(n-1)).
double t_max(int n, double rho0);

// Right-hand side of the first-order system; throws for rho <= 0.
std::pair<double, double> rhs(const OdeParams& p, double rho, double nu);

// Adaptive 4/5 pair with a step cap of eta/2 inside the initial layer.
// `tol` is both the local error tolerance and the extinction level for
// the radius; the trajectory keeps every `store_stride`-th accepted step.
OdeTrajectory integrate_to_extinction(const OdeParams& p, double tol = 1e-9,
                                      int store_stride = 1,
                                      const StepCallback& on_step = {});

// Dense (rho, nu) samples at sorted query times; throws if the requested
// horizon is not covered before extinction.
std::vector<std::array<double, 2>> sample_dense(
    const OdeParams& p, double tol, const std::vector<double>& times);

struct SweepRow {
  double eta;
  double sup_error_rho;  // sup over [0,T] of |rho - rho_classical|
  double sup_error_nu;   // sup over [t1,T] of |nu + (n-1)/rho_classical|
};

// Convergence of the inertial radius equation to the classical flow as
// eta -> 0. Rows come back sorted by eta descending.
std::vector<SweepRow> convergence_sweep(int n, double rho0, double nu0,
                                        std::vector<double> etas, double T,
                                        double t1, double tol = 1e-9);

}  // namespace hypac
