#include "hypac/initial_data.hpp"

#include <cmath>
#include <stdexcept>

#include "hypac/gridops.hpp"

namespace hypac {

FieldState layer_initial_data(const RadialGrid& g, double eps, double rho0,
                              const WaveProfile& profile) {
  if (!(rho0 > 4.0 * eps && rho0 < 1.0 - 4.0 * eps))
    throw std::invalid_argument(
        "layer_initial_data: layer too close to the boundary");
  const double z_lo = profile.z_samples().front();
  const double z_hi = profile.z_samples().back();
  FieldState s;
  s.t = 0.0;
  s.u.resize(g.r.size());
  s.w.assign(g.r.size(), 0.0);
  for (size_t i = 0; i < g.r.size(); ++i) {
    const double z = (g.r[i] - rho0) / eps;
    if (z <= z_lo)
      s.u[i] = -1.0;
    else if (z >= z_hi)
      s.u[i] = 1.0;
    else
      s.u[i] = profile.eval(z);
  }
  s.u.back() = 1.0;
  return s;
}

double theta_weight(int n, double rho0, double r) {
  if (r < 0.0) throw std::invalid_argument("theta_weight: r must be >= 0");
  const double x = r / rho0;
  return std::exp(-(n - 1) * (x - 1.0)) * std::pow(x, n - 1);
}

double weighted_energy(const FieldState& s, const RadialGrid& g, double eps,
                       double tau, int n, double rho0, const Potential& pot) {
  const auto ur = centered_gradient(s.u, g.dr);
  std::vector<double> density(g.r.size());
  for (size_t i = 0; i < g.r.size(); ++i) {
    const double e = 0.5 * eps * eps * eps * tau * s.w[i] * s.w[i] +
                     0.5 * eps * ur[i] * ur[i] + pot.F(s.u[i]) / eps;
    density[i] = e * theta_weight(n, rho0, g.r[i]);
  }
  return trapz_uniform(density, g.dr);
}

double prepared_residual(const FieldState& s, const RadialGrid& g, double eps,
                         double tau, int n, const Potential& pot) {
  const int N = g.n_cells;
  const double dr2 = g.dr * g.dr;
  const double inv_e2 = 1.0 / (eps * eps);
  std::vector<double> defect(g.r.size());
  for (int i = 0; i <= N; ++i) {
    double lap;
    if (i == 0) {
      lap = n * 2.0 * (s.u[1] - s.u[0]) / dr2;
    } else if (i == N) {
      lap = (s.u[N] - 2.0 * s.u[N - 1] + s.u[N - 2]) / dr2 +
            (n - 1) / g.r[N] * (3.0 * s.u[N] - 4.0 * s.u[N - 1] + s.u[N - 2]) /
                (2.0 * g.dr);
    } else {
      lap = (s.u[i + 1] - 2.0 * s.u[i] + s.u[i - 1]) / dr2 +
            (n - 1) / g.r[i] * (s.u[i + 1] - s.u[i - 1]) / (2.0 * g.dr);
    }
    const double d = lap - inv_e2 * pot.Fp(s.u[i]) - s.w[i];
    defect[i] = d * d;
  }
  const auto wr = centered_gradient(s.w, g.dr);
  std::vector<double> wgrad2(g.r.size());
  for (size_t i = 0; i < wr.size(); ++i) wgrad2[i] = wr[i] * wr[i];
  return inv_e2 / tau * trapz_radial(defect, g.dr, n) +
         trapz_radial(wgrad2, g.dr, n);
}

PreparednessReport preparedness_report(const FieldState& s,
                                       const RadialGrid& g, double eps,
                                       double tau, int n, double rho0,
                                       const Potential& pot,
                                       double bound_constant) {
  PreparednessReport r;
  r.weighted_energy = weighted_energy(s, g, eps, tau, n, rho0, pot);
  r.c0 = psi(pot, 1.0);
  r.excess = r.weighted_energy - r.c0;
  r.residual_R = prepared_residual(s, g, eps, tau, n, pot);
  r.residual_bound = bound_constant * std::pow(eps, -5.0) / tau;
  return r;
}

}  // namespace hypac
