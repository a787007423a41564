#pragma once

#include "hypac/potential.hpp"
#include "hypac/radial_pde.hpp"

namespace hypac {

// Layer profile centered at rho0 with zero initial velocity. The profile
// is snapped to exactly +-1 beyond its sampled support and the Dirichlet
// value is imposed at r = 1.
FieldState layer_initial_data(const RadialGrid& g, double eps, double rho0,
                              const WaveProfile& profile);

// Exponentially tilted radial weight; equals 1 at rho0 and vanishes at 0.
double theta_weight(int n, double rho0, double r);

// Weighted preparedness energy of (u, w) against theta (plain dr measure).
double weighted_energy(const FieldState& s, const RadialGrid& g, double eps,
                       double tau, int n, double rho0, const Potential& pot);

// Compatibility residual of the initial pair: the scaled defect of the
// elliptic balance plus the velocity gradient, both with radial measure.
double prepared_residual(const FieldState& s, const RadialGrid& g, double eps,
                         double tau, int n, const Potential& pot);

struct PreparednessReport {
  double weighted_energy = 0.0;
  double c0 = 0.0;
  double excess = 0.0;       // weighted_energy - c0
  double residual_R = 0.0;
  double residual_bound = 0.0;  // C * eps^-5 * tau^-1
};

PreparednessReport preparedness_report(const FieldState& s,
                                       const RadialGrid& g, double eps,
                                       double tau, int n, double rho0,
                                       const Potential& pot,
                                       double bound_constant = 1.0);

}  // namespace hypac
