#include "hypac/radial_pde.hpp"

#include <algorithm>
#include <cmath>

namespace hypac {

void validate(const PdeParams& p) {
  if (p.n != 2 && p.n != 3)
    throw std::invalid_argument("pde: dimension must be 2 or 3");
  if (!(p.eps > 0.0 && p.eps <= 0.2))
    throw std::invalid_argument("pde: eps must lie in (0, 0.2]");
  if (!(p.tau > 0.0)) throw std::invalid_argument("pde: tau must be > 0");
  if (!(p.t_end >= 0.0)) throw std::invalid_argument("pde: t_end < 0");
  if (p.boundary != 1.0 && p.boundary != -1.0)
    throw std::invalid_argument("pde: boundary must be +1 or -1");
}

RadialGrid build_grid(double eps, int points_per_eps) {
  if (points_per_eps < 8)
    throw std::invalid_argument("grid: points_per_eps must be >= 8");
  if (!(eps > 0.0)) throw std::invalid_argument("grid: eps must be > 0");
  const double cells = std::ceil(points_per_eps / eps);
  if (cells > 1e7) throw std::invalid_argument("grid: cell count over 1e7");
  RadialGrid g;
  g.n_cells = static_cast<int>(cells);
  g.dr = 1.0 / g.n_cells;
  if (g.dr > eps / 8.0 + 1e-15)
    throw std::invalid_argument("grid: dr exceeds eps/8");
  g.r.resize(g.n_cells + 1);
  for (int i = 0; i <= g.n_cells; ++i) g.r[i] = g.dr * i;
  return g;
}

double stable_dt(const PdeParams& p, const RadialGrid& g, double safety) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw std::invalid_argument("stable_dt: safety must lie in (0,1]");
  double max_g = 0.0, max_fpp = 0.0;
  const int m = 401;
  for (int i = 0; i < m; ++i) {
    const double s = -1.5 + 3.0 * i / (m - 1);
    max_g = std::max(max_g, p.damping.g(s));
    max_fpp = std::max(max_fpp, std::abs(p.potential.Fpp(s)));
  }
  const double cfl = p.eps * std::sqrt(p.tau) * g.dr;
  const double relax = p.eps * p.eps * p.tau / max_g;
  const double react = p.eps * p.eps / std::sqrt(max_fpp);
  return safety * std::min({cfl, relax, react});
}

Stepper::Stepper(const PdeParams& p, const RadialGrid& g) : p_(p), g_(g) {
  const size_t m = g.r.size();
  for (auto* v : {&k1u_, &k1w_, &k2u_, &k2w_, &k3u_, &k3w_, &k4u_, &k4w_,
                  &tu_, &tw_})
    v->resize(m);
}

void Stepper::rate(const std::vector<double>& u, const std::vector<double>& w,
                   std::vector<double>& du, std::vector<double>& dw) const {
  const int N = g_.n_cells;
  const double dr2 = g_.dr * g_.dr;
  const double inv_e2t = 1.0 / (p_.eps * p_.eps * p_.tau);
  const double inv_e2 = 1.0 / (p_.eps * p_.eps);
  const int n = p_.n;

  // r = 0: even symmetry removes the singular term, L u = n * u_rr(0).
  {
    const double lap = n * 2.0 * (u[1] - u[0]) / dr2;
    du[0] = w[0];
    dw[0] = (lap - inv_e2 * p_.potential.Fp(u[0]) - p_.damping.g(u[0]) * w[0]) *
            inv_e2t;
  }
  for (int i = 1; i < N; ++i) {
    const double lap = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / dr2 +
                       (n - 1) / g_.r[i] * (u[i + 1] - u[i - 1]) /
                           (2.0 * g_.dr);
    du[i] = w[i];
    dw[i] = (lap - inv_e2 * p_.potential.Fp(u[i]) - p_.damping.g(u[i]) * w[i]) *
            inv_e2t;
  }
  du[N] = 0.0;  // Dirichlet
  dw[N] = 0.0;
}

void Stepper::advance(FieldState& s, double dt) const {
  const size_t m = s.u.size();
  rate(s.u, s.w, k1u_, k1w_);
  for (size_t i = 0; i < m; ++i) {
    tu_[i] = s.u[i] + 0.5 * dt * k1u_[i];
    tw_[i] = s.w[i] + 0.5 * dt * k1w_[i];
  }
  rate(tu_, tw_, k2u_, k2w_);
  for (size_t i = 0; i < m; ++i) {
    tu_[i] = s.u[i] + 0.5 * dt * k2u_[i];
    tw_[i] = s.w[i] + 0.5 * dt * k2w_[i];
  }
  rate(tu_, tw_, k3u_, k3w_);
  for (size_t i = 0; i < m; ++i) {
    tu_[i] = s.u[i] + dt * k3u_[i];
    tw_[i] = s.w[i] + dt * k3w_[i];
  }
  rate(tu_, tw_, k4u_, k4w_);
  const double c = dt / 6.0;
  for (size_t i = 0; i < m; ++i) {
    s.u[i] += c * (k1u_[i] + 2.0 * k2u_[i] + 2.0 * k3u_[i] + k4u_[i]);
    s.w[i] += c * (k1w_[i] + 2.0 * k2w_[i] + 2.0 * k3w_[i] + k4w_[i]);
  }
  s.u[m - 1] = p_.boundary;
  s.w[m - 1] = 0.0;
  s.t += dt;

  for (size_t i = 0; i < m; ++i) {
    if (!std::isfinite(s.u[i]) || std::abs(s.u[i]) > 10.0 ||
        !std::isfinite(s.w[i]))
      throw BlowUpError(s.t, "pde: solution blew up at t = " +
                                 std::to_string(s.t));
  }
}

FieldState step(const PdeParams& p, const RadialGrid& g, FieldState s,
                double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  if (dt > stable_dt(p, g, 1.0) * (1.0 + 1e-12))
    throw std::invalid_argument("step: dt above the stability bound");
  Stepper st(p, g);
  st.advance(s, dt);
  return s;
}

RunResult run(const PdeParams& p, const RadialGrid& g, FieldState init,
              const std::vector<double>& snapshot_times, const StateHook& hook,
              int hook_stride) {
  validate(p);
  if (g.dr > p.eps / 8.0 + 1e-15)
    throw std::invalid_argument("run: grid too coarse for eps");
  if (init.u.size() != g.r.size() || init.w.size() != g.r.size())
    throw std::invalid_argument("run: state size does not match grid");
  for (size_t i = 0; i + 1 < snapshot_times.size(); ++i)
    if (!(snapshot_times[i] < snapshot_times[i + 1]))
      throw std::invalid_argument("run: snapshot times must increase");
  if (!snapshot_times.empty() && snapshot_times.back() > p.t_end + 1e-12)
    throw std::invalid_argument("run: snapshot beyond t_end");
  if (hook_stride < 1) hook_stride = 1;

  RunResult out;
  FieldState s = std::move(init);
  s.t = 0.0;

  if (hook) hook(s);
  size_t next_snap = 0;
  while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= 0.0) {
    out.snapshots.push_back(s);
    ++next_snap;
  }
  if (p.t_end == 0.0) {
    out.final = std::move(s);
    return out;
  }

  const Stepper stepper(p, g);
  const double dt0 = stable_dt(p, g, 0.5);
  long steps = 0;
  bool hooked = true;
  while (s.t < p.t_end - 1e-13) {
    const double target = (next_snap < snapshot_times.size())
                              ? snapshot_times[next_snap]
                              : p.t_end;
    double dt = dt0;
    bool hits = false;
    if (s.t + dt >= target - 1e-13) {
      dt = target - s.t;
      hits = true;
    }
    stepper.advance(s, dt);
    ++steps;
    hooked = false;
    if (hits) {
      s.t = target;  // pin the accumulated time
      if (next_snap < snapshot_times.size() &&
          target == snapshot_times[next_snap]) {
        out.snapshots.push_back(s);
        ++next_snap;
      }
      if (hook) {
        hook(s);
        hooked = true;
      }
    } else if (hook && steps % hook_stride == 0) {
      hook(s);
      hooked = true;
    }
  }
  if (hook && !hooked) hook(s);
  out.final = std::move(s);
  return out;
}

double to_slow_time(double t_fast, double eps) {
  return t_fast / (eps * eps);
}

}  // namespace hypac
