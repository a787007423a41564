#include "hypac/moving_frame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hypac/gridops.hpp"
#include "hypac/interface_ode.hpp"

namespace hypac {

namespace {

double frame_factor(double eps, double tau, double nu) {
  return 1.0 - eps * eps * tau * nu * nu;
}

}  // namespace

double phi_eval(int n, double eps, double tau, double rho, double nu,
                double R) {
  const double K = frame_factor(eps, tau, nu);
  if (!(K > 0.0))
    throw std::domain_error("phi: frame factor 1 - eps^2 tau nu^2 <= 0");
  if (R < -rho - 1e-15)
    throw std::domain_error("phi: R below -rho");
  if (R <= -rho) return 0.0;
  if (R == 0.0) return 1.0;
  const double k = (n - 1) / K;
  return std::exp(-k * R / rho) * std::pow(1.0 + R / rho, k);
}

double phi_R_eval(int n, double eps, double tau, double rho, double nu,
                  double R) {
  const double K = frame_factor(eps, tau, nu);
  if (!(K > 0.0))
    throw std::domain_error("phi_R: frame factor 1 - eps^2 tau nu^2 <= 0");
  if (!(R > -rho)) throw std::domain_error("phi_R: requires R > -rho");
  const double phi = phi_eval(n, eps, tau, rho, nu, R);
  return -(n - 1) * R / (rho * (R + rho) * K) * phi;
}

MovingFrameView to_moving_frame(const FieldState& s, const RadialGrid& g,
                                int n, double eps, double tau, double rho,
                                double nu) {
  if (!(rho > g.dr && rho < 1.0 - g.dr))
    throw std::invalid_argument("to_moving_frame: rho outside grid interior");
  MovingFrameView view;
  view.t = s.t;
  view.rho = rho;
  view.nu = nu;
  const size_t m = g.r.size();
  view.R.resize(m);
  view.v = s.u;
  view.vR = centered_gradient(s.u, g.dr);
  view.vt.resize(m);
  view.phi.resize(m);
  for (size_t i = 0; i < m; ++i) {
    view.R[i] = g.r[i] - rho;
    view.vt[i] = s.w[i] + nu * view.vR[i];
    view.phi[i] = phi_eval(n, eps, tau, rho, nu, std::max(view.R[i], -rho));
  }
  view.R.front() = -rho;  // exact endpoints of the frame domain
  view.phi.front() = 0.0;
  view.v_interp = PchipInterpolant(view.R, view.v);
  return view;
}

std::pair<double, double> e_phi(const MovingFrameView& view, double eps,
                                double tau, double nu, const Potential& pot) {
  const double K = frame_factor(eps, tau, nu);
  const size_t m = view.R.size();
  std::vector<double> e_density(m), p_density(m);
  for (size_t i = 0; i < m; ++i) {
    const double grad2 = 0.5 * view.vR[i] * view.vR[i];
    const double F = pot.F(view.v[i]);
    p_density[i] = (eps * grad2 + F / eps) * view.phi[i];
    e_density[i] =
        (0.5 * eps * eps * eps * tau * view.vt[i] * view.vt[i] +
         eps * K * grad2 + F / eps) *
        view.phi[i];
  }
  return {trapz(view.R, e_density), trapz(view.R, p_density)};
}

double d_eps(const MovingFrameView& v1, const MovingFrameView& v2, double a,
             const PsiEvaluator& Psi) {
  if (!(a > 0.0)) throw std::invalid_argument("d_eps: a must be > 0");
  for (const auto* v : {&v1, &v2})
    if (v->R.front() > -a + 1e-12 || v->R.back() < a - 1e-12)
      throw std::invalid_argument("d_eps: window [-a,a] not covered");
  const double dr1 = v1.R[1] - v1.R[0];
  const double dr2 = v2.R[1] - v2.R[0];
  const double h = std::min(dr1, dr2);
  const int nq = std::max(801, 2 * static_cast<int>(std::ceil(2.0 * a / h)) + 1);
  std::vector<double> x(nq), f(nq);
  for (int i = 0; i < nq; ++i) {
    x[i] = -a + 2.0 * a * i / (nq - 1);
    f[i] = std::abs(Psi(v1.eval_v(x[i])) - Psi(v2.eval_v(x[i])));
  }
  return trapz(x, f);
}

double d_eps(const MovingFrameView& v1, const MovingFrameView& v2, double a,
             const Potential& pot) {
  PsiEvaluator Psi(pot);
  return d_eps(v1, v2, a, Psi);
}

std::vector<FrameSample> frame_analysis(const std::vector<FieldState>& snaps,
                                        const RadialGrid& g, int n, double eps,
                                        double tau, double rho0, double nu0,
                                        const Potential& pot,
                                        const FrameParams& fp) {
  if (snaps.empty())
    throw std::invalid_argument("frame_analysis: no snapshots");
  if (!(fp.T > 0.0 && fp.T < t_max(n, rho0)))
    throw std::invalid_argument(
        "frame_analysis: T must lie below classical extinction");
  double a = fp.a;
  if (a <= 0.0)
    a = 0.9 * std::min(mcf_exact(n, rho0, fp.T), 1.0 - rho0);

  std::vector<double> times;
  for (const auto& s : snaps)
    if (s.t <= fp.T + 1e-12) times.push_back(s.t);
  if (times.empty())
    throw std::invalid_argument("frame_analysis: no snapshots below T");

  OdeParams op{n, eps * eps * tau, rho0, nu0, false};
  const auto states = sample_dense(op, 1e-9, times);

  PsiEvaluator Psi(pot);
  std::vector<FrameSample> out;
  MovingFrameView ref;
  for (size_t k = 0; k < times.size(); ++k) {
    const double rho = states[k][0];
    const double nu = states[k][1];
    const double margin = frame_factor(eps, tau, nu) - fp.alpha;
    if (margin < 0.0)
      throw std::runtime_error(
          "frame_analysis: alpha condition violated, analysis aborted");
    MovingFrameView view =
        to_moving_frame(snaps[k], g, n, eps, tau, rho, nu);
    FrameSample row;
    row.t = times[k];
    row.rho = rho;
    row.nu = nu;
    row.alpha_margin = margin;
    auto [E, P] = e_phi(view, eps, tau, nu, pot);
    row.E_phi = E;
    row.P_phi = P;
    if (k == 0) {
      ref = view;
      row.d_eps_from_0 = 0.0;
    } else {
      row.d_eps_from_0 = d_eps(ref, view, a, Psi);
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace hypac
