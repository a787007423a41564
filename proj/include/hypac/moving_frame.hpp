#pragma once

#include <utility>
#include <vector>

#include "hypac/interpolation.hpp"
#include "hypac/potential.hpp"
#include "hypac/radial_pde.hpp"

namespace hypac {

struct FrameParams {
  double alpha = 0.5;  // lower bound demanded of 1 - eps^2 tau nu^2
  double a = -1.0;     // analysis half-width; <= 0 picks the default
                       // 0.9 * min(rho_classical(T), 1 - rho0)
  double T = 0.14;     // analysis horizon, below classical extinction
};

// Divergence-form weight of the frame moving with the interface.
// Requires R >= -rho and 1 - eps^2 tau nu^2 > 0; exactly 0 at R = -rho,
// exactly 1 at R = 0.
double phi_eval(int n, double eps, double tau, double rho, double nu,
                double R);

// Spatial derivative of the weight; requires R > -rho.
double phi_R_eval(int n, double eps, double tau, double rho, double nu,
                  double R);

// Field snapshot resampled in the frame R = r - rho.
struct MovingFrameView {
  double t = 0.0;
  double rho = 0.0, nu = 0.0;
  std::vector<double> R;
  std::vector<double> v, vR, vt, phi;
  PchipInterpolant v_interp;  // for window evaluations

  double eval_v(double offset) const { return v_interp(offset); }
};

MovingFrameView to_moving_frame(const FieldState& s, const RadialGrid& g,
                                int n, double eps, double tau, double rho,
                                double nu);

// Frame energy and its inertia-free part, trapezoid over the view nodes.
std::pair<double, double> e_phi(const MovingFrameView& view, double eps,
                                double tau, double nu, const Potential& pot);

// Layer distance between two frame snapshots over the window [-a, a].
double d_eps(const MovingFrameView& v1, const MovingFrameView& v2, double a,
             const PsiEvaluator& Psi);
double d_eps(const MovingFrameView& v1, const MovingFrameView& v2, double a,
             const Potential& pot);

struct FrameSample {
  double t = 0.0;
  double rho = 0.0, nu = 0.0;
  double E_phi = 0.0;
  double P_phi = 0.0;
  double d_eps_from_0 = 0.0;
  double alpha_margin = 0.0;  // 1 - eps^2 tau nu^2 - alpha
};

// Runs the frame functionals along PDE snapshots, pairing each snapshot
// with the interface trajectory at the same inertial scale. Snapshots
// beyond T are ignored; an alpha violation aborts the analysis.
std::vector<FrameSample> frame_analysis(const std::vector<FieldState>& snaps,
                                        const RadialGrid& g, int n, double eps,
                                        double tau, double rho0, double nu0,
                                        const Potential& pot,
                                        const FrameParams& fp);

}  // namespace hypac
