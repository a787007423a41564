#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypac/potential.hpp"

namespace hypac {

// Parameters for the damped second-order bistable equation in radial
// coordinates on (0,1), fast time scale: the field relaxes through a
// g(u)-damped inertial term against diffusion and the bistable reaction.
struct PdeParams {
  int n = 2;
  double eps = 0.02;
  double tau = 1.0;
  Potential potential;
  Damping damping;
  double t_end = 0.18;
  double boundary = 1.0;  // Dirichlet value at r = 1 (+1 or -1)
};

void validate(const PdeParams& p);

struct RadialGrid {
  int n_cells = 0;          // nodes are i = 0..n_cells
  double dr = 0.0;          // 1 / n_cells
  std::vector<double> r;    // r_i = i * dr
};

// n_cells = ceil(points_per_eps / eps). Guards: points_per_eps >= 8,
// n_cells <= 1e7.
RadialGrid build_grid(double eps, int points_per_eps);

struct FieldState {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> w;  // u_t
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double t, const std::string& what)
      : std::runtime_error(what), time(t) {}
  double time;
};

// safety * min(eps*sqrt(tau)*dr, eps^2*tau/max g, eps^2/sqrt(max |F''|)),
// extrema sampled over s in [-1.5, 1.5].
double stable_dt(const PdeParams& p, const RadialGrid& g, double safety);

// One classical four-stage Runge-Kutta step of the first-order system.
// Keeps scratch storage; reuse one instance across a run.
class Stepper {
 public:
  Stepper(const PdeParams& p, const RadialGrid& g);
  void advance(FieldState& s, double dt) const;

 private:
  void rate(const std::vector<double>& u, const std::vector<double>& w,
            std::vector<double>& du, std::vector<double>& dw) const;
  const PdeParams& p_;
  const RadialGrid& g_;
  mutable std::vector<double> k1u_, k1w_, k2u_, k2w_, k3u_, k3w_, k4u_, k4w_,
      tu_, tw_;
};

FieldState step(const PdeParams& p, const RadialGrid& g, FieldState s,
                double dt);

struct RunResult {
  FieldState final;
  std::vector<FieldState> snapshots;
};

using StateHook = std::function<void(const FieldState&)>;

// Fixed-step march with the last partial step shortened to hit snapshot
// times and t_end exactly; the hook fires at t = 0, every `hook_stride`
// accepted steps, at each snapshot time, and at the end.
RunResult run(const PdeParams& p, const RadialGrid& g, FieldState init,
              const std::vector<double>& snapshot_times,
              const StateHook& hook = {}, int hook_stride = 25);

// Rescaling between the fast equation time and the original slow time.
double to_slow_time(double t_fast, double eps);

}  // namespace hypac
