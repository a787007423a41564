#include "hypac/interface_ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypac {

namespace {

using State = std::array<double, 2>;

constexpr double kMinStep = 1e-14;
constexpr long kMaxSteps = 60'000'000;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                 e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640,
                 e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

bool deriv(const OdeParams& p, const State& y, State* f) {
  if (!(y[0] > 0.0)) return false;
  (*f)[0] = y[1];
  (*f)[1] = (-y[1] - (p.n - 1) / y[0]) / p.eta;
  return true;
}

}  // namespace

void validate(const OdeParams& p) {
  if (p.n != 2 && p.n != 3)
    throw std::invalid_argument("ode: dimension must be 2 or 3");
  if (!(p.eta > 0.0)) throw std::invalid_argument("ode: eta must be > 0");
  if (!(p.rho0 > 0.0 && p.rho0 < 1.0))
    throw std::invalid_argument("ode: rho0 must lie in (0,1)");
  if (p.allow_exterior) return;
  const double floor = -(p.n - 1) / p.rho0;
  if (!(p.nu0 >= floor && p.nu0 <= 0.0))
    throw std::invalid_argument(
        "ode: nu0 outside the invariant region [-(n-1)/rho0, 0]");
}

std::array<double, 2> hermite_eval(const StepRecord& s, double t) {
  const double h = s.t1 - s.t0;
  const double u = (t - s.t0) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  std::array<double, 2> out;
  for (int i = 0; i < 2; ++i)
    out[i] = h00 * s.y0[i] + h * h10 * s.f0[i] + h01 * s.y1[i] +
             h * h11 * s.f1[i];
  return out;
}

double t_max(int n, double rho0) {
  if (!(rho0 > 0.0)) throw std::invalid_argument("t_max: rho0 must be > 0");
  return rho0 * rho0 / (2.0 * (n - 1));
}

double mcf_exact(int n, double rho0, double t) {
  const double arg = rho0 * rho0 - 2.0 * (n - 1) * t;
  if (arg < -1e-12)
    throw std::domain_error("mcf_exact: time beyond extinction");
  return std::sqrt(std::max(arg, 0.0));
}

std::pair<double, double> rhs(const OdeParams& p, double rho, double nu) {
  if (!(rho > 0.0)) throw std::domain_error("rhs: rho must be positive");
  if (!(p.eta > 0.0)) throw std::invalid_argument("rhs: eta must be > 0");
  return {nu, (-nu - (p.n - 1) / rho) / p.eta};
}

OdeTrajectory integrate_to_extinction(const OdeParams& p, double tol,
                                      int store_stride,
                                      const StepCallback& on_step) {
  validate(p);
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be > 0");
  if (store_stride < 1) store_stride = 1;

  OdeTrajectory traj;
  double t = 0.0;
  State y{p.rho0, p.nu0};
  State f;
  if (!deriv(p, y, &f)) throw std::domain_error("integrate: rho0 <= 0");

  traj.times.push_back(t);
  traj.rho.push_back(y[0]);
  traj.nu.push_back(y[1]);

  double h = p.eta / 4.0;
  long accepted = 0;
  const double layer_end = 20.0 * p.eta;

  auto finish_linear_estimate = [&](void) {
    // Velocity blows up like -(n-1)/rho; the linear time-to-zero estimate
    // from the last state is accurate to O(rho^2).
    if (y[1] < 0.0 && !traj.t_extinction)
      traj.t_extinction = t + y[0] / (-y[1]);
  };

  for (long iter = 0; iter < kMaxSteps; ++iter) {
    if (y[0] <= tol) break;
    if (t < layer_end) h = std::min(h, p.eta / 2.0);
    if (h < kMinStep) {
      traj.truncated = true;
      finish_linear_estimate();
      break;
    }

    State k2, k3, k4, k5, k6, k7, yt, y1;
    bool ok = true;
    auto stage = [&](const State& ys, State* k) {
      if (!ok) return;
      ok = deriv(p, ys, k);
    };
    yt = {y[0] + h * a21 * f[0], y[1] + h * a21 * f[1]};
    stage(yt, &k2);
    if (ok) {
      yt = {y[0] + h * (a31 * f[0] + a32 * k2[0]),
            y[1] + h * (a31 * f[1] + a32 * k2[1])};
      stage(yt, &k3);
    }
    if (ok) {
      yt = {y[0] + h * (a41 * f[0] + a42 * k2[0] + a43 * k3[0]),
            y[1] + h * (a41 * f[1] + a42 * k2[1] + a43 * k3[1])};
      stage(yt, &k4);
    }
    if (ok) {
      yt = {y[0] + h * (a51 * f[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
            y[1] + h * (a51 * f[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1])};
      stage(yt, &k5);
    }
    if (ok) {
      yt = {y[0] + h * (a61 * f[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] +
                        a65 * k5[0]),
            y[1] + h * (a61 * f[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] +
                        a65 * k5[1])};
      stage(yt, &k6);
    }
    if (ok) {
      y1 = {y[0] + h * (b1 * f[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] +
                        b6 * k6[0]),
            y[1] + h * (b1 * f[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] +
                        b6 * k6[1])};
      stage(y1, &k7);
    }
    if (!ok) {
      h *= 0.5;
      continue;
    }

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double ei = h * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(0.5 * err);

    if (err <= 1.0 || h <= kMinStep * 2.0) {
      StepRecord rec{t, t + h, y, y1, f, k7};
      t += h;
      y = y1;
      f = k7;  // first-same-as-last
      ++accepted;
      if (on_step) on_step(rec);
      if (accepted % store_stride == 0) {
        traj.times.push_back(t);
        traj.rho.push_back(y[0]);
        traj.nu.push_back(y[1]);
      }
      if (y[0] <= tol) {
        // Bisection for rho = tol on the dense output of this step.
        double a = rec.t0, b = rec.t1;
        while (b - a > tol) {
          const double m = 0.5 * (a + b);
          if (hermite_eval(rec, m)[0] > tol)
            a = m;
          else
            b = m;
        }
        traj.t_extinction = 0.5 * (a + b);
        if (traj.times.back() != t) {
          traj.times.push_back(t);
          traj.rho.push_back(y[0]);
          traj.nu.push_back(y[1]);
        }
        break;
      }
    }
    const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
  }

  if (traj.times.back() != t) {
    traj.times.push_back(t);
    traj.rho.push_back(y[0]);
    traj.nu.push_back(y[1]);
  }
  return traj;
}

std::vector<std::array<double, 2>> sample_dense(
    const OdeParams& p, double tol, const std::vector<double>& times) {
  std::vector<std::array<double, 2>> out(times.size(), {0.0, 0.0});
  size_t next = 0;
  while (next < times.size() && times[next] <= 0.0) {
    out[next] = {p.rho0, p.nu0};
    ++next;
  }
  integrate_to_extinction(p, tol, 1 << 30, [&](const StepRecord& s) {
    while (next < times.size() && times[next] <= s.t1) {
      out[next] = hermite_eval(s, times[next]);
      ++next;
    }
  });
  if (next < times.size())
    throw std::runtime_error(
        "sample_dense: horizon not covered before extinction");
  return out;
}

std::vector<SweepRow> convergence_sweep(int n, double rho0, double nu0,
                                        std::vector<double> etas, double T,
                                        double t1, double tol) {
  if (!(T < t_max(n, rho0)))
    throw std::invalid_argument("sweep: T must be below classical extinction");
  if (!(t1 > 0.0 && t1 < T))
    throw std::invalid_argument("sweep: need 0 < t1 < T");
  for (double e : etas)
    if (!(e > 0.0))
      throw std::invalid_argument(
          "sweep: eta must be positive (classical limit is closed-form)");
  std::sort(etas.begin(), etas.end(), std::greater<>());

  const int n_samples = 3001;
  std::vector<double> grid(n_samples);
  for (int i = 0; i < n_samples; ++i)
    grid[i] = T * static_cast<double>(i) / (n_samples - 1);

  std::vector<SweepRow> rows;
  for (double eta : etas) {
    OdeParams p{n, eta, rho0, nu0, false};
    auto samples = sample_dense(p, tol, grid);
    SweepRow row{eta, 0.0, 0.0};
    for (int i = 0; i < n_samples; ++i) {
      const double ref = mcf_exact(n, rho0, grid[i]);
      row.sup_error_rho =
          std::max(row.sup_error_rho, std::abs(samples[i][0] - ref));
      if (grid[i] >= t1)
        row.sup_error_nu = std::max(
            row.sup_error_nu, std::abs(samples[i][1] + (n - 1) / ref));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hypac
