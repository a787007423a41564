#include "hypac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hypac/gridops.hpp"

namespace hypac {

double energy_eps(const FieldState& s, const RadialGrid& g, double eps,
                  double tau, int n, const Potential& pot) {
  // Gradient term on half-cells with the weight that makes the radial
  // stencil self-adjoint; the semi-discrete dissipation identity is then
  // exact and the measured residual is pure time discretization.
  std::vector<double> density(g.r.size());
  for (size_t i = 0; i < g.r.size(); ++i)
    density[i] = 0.5 * eps * eps * eps * tau * s.w[i] * s.w[i] +
                 pot.F(s.u[i]) / eps;
  double E = trapz_radial(density, g.dr, n);
  for (size_t i = 0; i + 1 < g.r.size(); ++i) {
    const double d = (s.u[i + 1] - s.u[i]) / g.dr;
    const double a = n == 2 ? 0.5 * (g.r[i] + g.r[i + 1])
                            : g.r[i] * g.r[i + 1];
    E += 0.5 * eps * d * d * a * g.dr;
  }
  return E;
}

double potential_mass(const FieldState& s, const RadialGrid& g, int n,
                      const Potential& pot) {
  std::vector<double> f(g.r.size());
  for (size_t i = 0; i < g.r.size(); ++i) f[i] = pot.F(s.u[i]);
  return trapz_radial(f, g.dr, n);
}

double psi_grad_bv(const FieldState& s, const RadialGrid& g, int n,
                   const Potential& pot) {
  const auto ur = centered_gradient(s.u, g.dr);
  std::vector<double> f(g.r.size());
  for (size_t i = 0; i < g.r.size(); ++i) {
    const double F = pot.F(s.u[i]);
    f[i] = (F > 0.0 ? std::sqrt(2.0 * F) : 0.0) * std::abs(ur[i]);
  }
  return trapz_radial(f, g.dr, n);
}

std::optional<double> extract_interface(const FieldState& s,
                                        const RadialGrid& g,
                                        std::optional<double> prev_rho) {
  std::vector<double> crossings;
  for (size_t i = 0; i + 1 < s.u.size(); ++i) {
    const double a = s.u[i], b = s.u[i + 1];
    if (a == 0.0) {
      crossings.push_back(g.r[i]);
    } else if (a * b < 0.0) {
      crossings.push_back(g.r[i] + g.dr * (-a) / (b - a));
    }
  }
  if (s.u.back() == 0.0) crossings.push_back(g.r.back());
  if (crossings.empty()) return std::nullopt;
  if (!prev_rho) return crossings.back();  // outer transition on first call
  double best = crossings.front();
  for (double c : crossings)
    if (std::abs(c - *prev_rho) < std::abs(best - *prev_rho)) best = c;
  return best;
}

double l1_step_distance(const FieldState& s, const RadialGrid& g, int n,
                        double rho_ref) {
  if (!(rho_ref >= 0.0 && rho_ref <= 1.0))
    throw std::invalid_argument("l1_step_distance: rho_ref outside [0,1]");
  std::vector<double> f(g.r.size());
  for (size_t i = 0; i < g.r.size(); ++i) {
    const double omega = g.r[i] < rho_ref ? -1.0 : 1.0;
    f[i] = std::abs(s.u[i] - omega);
  }
  return trapz_radial(f, g.dr, n);
}

double omega_pair_distance(double rho_eps, double rho_ref, int n) {
  if (!(rho_eps >= 0.0 && rho_eps <= 1.0 && rho_ref >= 0.0 && rho_ref <= 1.0))
    throw std::invalid_argument("omega_pair_distance: radii outside [0,1]");
  return 2.0 / n * std::abs(std::pow(rho_eps, n) - std::pow(rho_ref, n));
}

SeriesRecorder::SeriesRecorder(const PdeParams& p, const RadialGrid& g)
    : p_(p), g_(g) {}

void SeriesRecorder::operator()(const FieldState& s) {
  SeriesSample row;
  row.t = s.t;
  row.E = energy_eps(s, g_, p_.eps, p_.tau, p_.n, p_.potential);
  row.int_F = potential_mass(s, g_, p_.n, p_.potential);
  std::vector<double> dg(g_.r.size()), dp(g_.r.size());
  for (size_t i = 0; i < g_.r.size(); ++i) {
    const double w2 = s.w[i] * s.w[i];
    dg[i] = p_.damping.g(s.u[i]) * w2;
    dp[i] = w2;
    row.u_max = std::max(row.u_max, std::abs(s.u[i]));
  }
  row.diss_g = p_.eps * trapz_radial(dg, g_.dr, p_.n);
  row.diss_plain = p_.eps * trapz_radial(dp, g_.dr, p_.n);
  row.grad_bv = psi_grad_bv(s, g_, p_.n, p_.potential);
  row.interface_rho = extract_interface(s, g_, prev_rho_);
  if (row.interface_rho) prev_rho_ = row.interface_rho;
  samples_.push_back(row);
}

double dissipation_lhs(const std::vector<SeriesSample>& series, double t1,
                       double t2) {
  if (series.size() < 2 || t1 >= t2)
    throw std::invalid_argument("dissipation_lhs: bad interval");
  if (t1 < series.front().t - 1e-12 || t2 > series.back().t + 1e-12)
    throw std::invalid_argument("dissipation_lhs: interval not covered");
  double acc = 0.0;
  for (size_t i = 0; i + 1 < series.size(); ++i) {
    const double a = std::max(series[i].t, t1);
    const double b = std::min(series[i + 1].t, t2);
    if (b <= a) continue;
    // linear-in-time interpolation of the rate across the sample interval
    const double h = series[i + 1].t - series[i].t;
    auto rate_at = [&](double t) {
      const double u = (t - series[i].t) / h;
      return (1.0 - u) * series[i].diss_g + u * series[i + 1].diss_g;
    };
    acc += 0.5 * (rate_at(a) + rate_at(b)) * (b - a);
  }
  return acc;
}

std::vector<double> dissipation_residual(const std::vector<FieldState>& series,
                                         const RadialGrid& g, double eps,
                                         double tau, int n,
                                         const Potential& pot,
                                         const Damping& damping) {
  if (series.size() < 2)
    throw std::invalid_argument("dissipation_residual: need >= 2 states");
  std::vector<double> E(series.size()), D(series.size());
  for (size_t k = 0; k < series.size(); ++k) {
    if (k > 0 && !(series[k].t > series[k - 1].t))
      throw std::invalid_argument("dissipation_residual: times must increase");
    E[k] = energy_eps(series[k], g, eps, tau, n, pot);
    std::vector<double> dg(g.r.size());
    for (size_t i = 0; i < g.r.size(); ++i)
      dg[i] = damping.g(series[k].u[i]) * series[k].w[i] * series[k].w[i];
    D[k] = eps * trapz_radial(dg, g.dr, n);
  }
  std::vector<double> res(series.size() - 1);
  for (size_t k = 0; k + 1 < series.size(); ++k) {
    const double dt = series[k + 1].t - series[k].t;
    const double lhs = 0.5 * (D[k] + D[k + 1]) * dt;
    const double rhs = E[k] - E[k + 1];
    res[k] = lhs - rhs;
  }
  return res;
}

std::vector<EnergyReport> energy_reports(
    const std::vector<SeriesSample>& series,
    const std::vector<double>& report_times) {
  std::vector<EnergyReport> out;
  double t_prev = series.empty() ? 0.0 : series.front().t;
  for (double t : report_times) {
    auto it = std::min_element(series.begin(), series.end(),
                               [t](const SeriesSample& a,
                                   const SeriesSample& b) {
                                 return std::abs(a.t - t) < std::abs(b.t - t);
                               });
    if (it == series.end()) break;
    EnergyReport rep;
    rep.t = it->t;
    rep.E_eps = it->E;
    rep.psi_grad_bv = it->grad_bv;
    rep.interface_rho = it->interface_rho;
    if (!out.empty()) {
      rep.dissipation_lhs = dissipation_lhs(series, t_prev, it->t);
      rep.dissipation_rhs = out.back().E_eps - it->E;
      rep.residual = rep.dissipation_lhs - rep.dissipation_rhs;
    }
    t_prev = it->t;
    out.push_back(rep);
  }
  return out;
}

PsiVariationReport psi_variation(const std::vector<FieldState>& series,
                                 const RadialGrid& g, double eps, double tau,
                                 double kappa, int n, const Potential& pot) {
  if (series.empty())
    throw std::invalid_argument("psi_variation: empty series");
  PsiVariationReport rep;
  rep.M = energy_eps(series.front(), g, eps, tau, n, pot);
  PsiEvaluator Psi(pot);
  std::vector<std::vector<double>> psi_of_u(series.size());
  for (size_t k = 0; k < series.size(); ++k) {
    rep.grad_bv.push_back(psi_grad_bv(series[k], g, n, pot));
    psi_of_u[k].resize(g.r.size());
    for (size_t i = 0; i < g.r.size(); ++i)
      psi_of_u[k][i] = Psi(series[k].u[i]);
  }
  for (size_t i = 0; i < series.size(); ++i) {
    for (size_t j = i + 1; j < series.size(); ++j) {
      PsiVariationPair pr;
      pr.i = i;
      pr.j = j;
      std::vector<double> diff(g.r.size());
      for (size_t k = 0; k < g.r.size(); ++k)
        diff[k] = std::abs(psi_of_u[j][k] - psi_of_u[i][k]);
      pr.time_bv = trapz_radial(diff, g.dr, n);
      const double dt = series[j].t - series[i].t;
      const double bound = std::sqrt(2.0 / kappa) * rep.M * std::sqrt(dt);
      if (bound > 0.0)
        pr.holder_check = pr.time_bv / bound;
      else
        pr.holder_check =
            pr.time_bv > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      rep.pairs.push_back(pr);
    }
  }
  return rep;
}

std::vector<VelocityCurvatureRow> velocity_curvature_check(
    const std::vector<double>& times, const std::vector<double>& radii,
    double g_bar, int n) {
  if (times.size() != radii.size())
    throw std::invalid_argument("velocity_curvature: size mismatch");
  const double t0 = times.front();
  const double span = times.back() - t0;
  std::vector<VelocityCurvatureRow> rows;
  for (size_t i = 1; i + 1 < times.size(); ++i) {
    const double frac = (times[i] - t0) / span;
    if (frac < 0.1 || frac > 0.9) continue;
    VelocityCurvatureRow row;
    row.t = times[i];
    row.measured_V = (radii[i + 1] - radii[i - 1]) / (times[i + 1] - times[i - 1]);
    const double K = (n - 1) / radii[i];
    row.K_over_gbar = K / g_bar;
    row.ratio = g_bar * std::abs(row.measured_V) / K;
    rows.push_back(row);
  }
  if (rows.size() < 5)
    throw std::invalid_argument(
        "velocity_curvature: fewer than 5 usable samples");
  return rows;
}

}  // namespace hypac
