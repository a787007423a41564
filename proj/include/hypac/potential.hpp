#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypac/interpolation.hpp"

namespace hypac {

using ScalarFn = std::function<double(double)>;

// Growth-envelope constants for an optional validation of the potential
// far from the wells: c1*|s|^(gamma/2+1) <= F(s) <= C1*|s|^gamma.
struct GrowthConstants {
  double gamma = 4.0;
  double c1 = 0.0;
  double C1 = 0.0;
  double Kgrowth = 1.0;
};

// Double-well potential with wells of equal depth at +-1.
struct Potential {
  ScalarFn F;    // energy density
  ScalarFn Fp;   // F'
  ScalarFn Fpp;  // F''
  std::optional<GrowthConstants> growth;
  std::string name = "custom";
};

// Strictly positive damping coefficient with certified lower bound kappa.
struct Damping {
  ScalarFn g;
  double kappa = 0.0;
  std::string name = "custom";
};

struct WellConstants {
  double c0 = 0.0;        // minimal transition energy, integral of sqrt(2F)
  double sqrtF_l1 = 0.0;  // L1 norm of sqrt(F) on [-1,1]
  double g_bar = 0.0;     // sqrt(F)-weighted average of g
};

// Heteroclinic profile connecting -1 to +1, sampled on a uniform symmetric
// grid in the stretched coordinate. Values are stored strictly inside
// (-1,1); evaluation clamps to the end samples beyond the grid.
class WaveProfile {
 public:
  WaveProfile(std::vector<double> z, std::vector<double> u);
  double eval(double z) const { return interp_(z); }
  const std::vector<double>& z_samples() const { return z_; }
  const std::vector<double>& u_samples() const { return u_; }

 private:
  std::vector<double> z_, u_;
  PchipInterpolant interp_;
};

Potential quartic_potential();

// "quartic" or "poly:c0,c1,..." listing coefficients of F.
Potential potential_from_spec(const std::string& spec);

// "const:<k>" or "affine:<a>,<b>" meaning g(s) = a + b*s.
Damping damping_from_spec(const std::string& spec);

// Invariant checks; throw std::invalid_argument with the failed property.
void validate_potential(const Potential& p);
void validate_damping(const Damping& d);

// Psi(x) = integral of sqrt(2F) from -1 to x (adaptive, abs error <= 1e-10).
double psi(const Potential& p, double x);

WellConstants scalar_constants(const Potential& p, const Damping& d);

// Solves the first-order reduction U' = sqrt(2F(U)), U(0) = 0, by quadrature
// inversion of z(u). n_pts must be odd and >= 3 so z = 0 is a sample.
WaveProfile standing_wave(const Potential& p, double z_max, int n_pts);

// Cached Psi evaluator for use inside integrands (table + monotone cubic).
class PsiEvaluator {
 public:
  explicit PsiEvaluator(const Potential& p, double lo = -1.5, double hi = 1.5,
                        int n = 3001);
  double operator()(double x) const { return interp_(x); }

 private:
  PchipInterpolant interp_;
};

}  // namespace hypac
