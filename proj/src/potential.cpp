#include "hypac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hypac/quadrature.hpp"

namespace hypac {

namespace {

constexpr double kWellClip = 1e-6;   // quadrature split distance from wells
constexpr double kProfileClip = 1e-8;  // inversion-grid clip at the wells
constexpr double kQuadTol = 1e-10;

std::vector<double> well_breakpoints() {
  return {-1.0 - kWellClip, -1.0 + kWellClip, 1.0 - kWellClip,
          1.0 + kWellClip};
}

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    size_t pos = 0;
    out.push_back(std::stod(tok, &pos));
  }
  return out;
}

double sqrt2F(const Potential& p, double s) {
  const double f = p.F(s);
  return f > 0.0 ? std::sqrt(2.0 * f) : 0.0;
}

// Signed stretched coordinate z(u) = int_0^u ds / sqrt(2F(s)).
double z_of_u_increment(const Potential& p, double ua, double ub) {
  auto integrand = [&p](double s) {
    const double f = p.F(s);
    return 1.0 / std::sqrt(std::max(2.0 * f, 1e-300));
  };
  QuadratureResult r = integrate(integrand, ua, ub, 1e-13, 2000);
  return r.value;
}

}  // namespace

WaveProfile::WaveProfile(std::vector<double> z, std::vector<double> u)
    : z_(std::move(z)), u_(std::move(u)), interp_(z_, u_) {
  if (z_.size() != u_.size() || z_.size() < 3)
    throw std::invalid_argument("wave profile: need >=3 matching samples");
  for (size_t i = 0; i + 1 < u_.size(); ++i)
    if (!(u_[i] < u_[i + 1]))
      throw std::invalid_argument("wave profile: samples must increase");
}

Potential quartic_potential() {
  Potential p;
  p.F = [](double s) {
    const double q = s * s - 1.0;
    return 0.25 * q * q;
  };
  p.Fp = [](double s) { return s * s * s - s; };
  p.Fpp = [](double s) { return 3.0 * s * s - 1.0; };
  p.growth = GrowthConstants{4.0, 1.0 / 16.0, 1.0, 2.0};
  p.name = "quartic";
  return p;
}

Potential potential_from_spec(const std::string& spec) {
  if (spec == "quartic") return quartic_potential();
  const std::string prefix = "poly:";
  if (spec.rfind(prefix, 0) == 0) {
    auto coeffs = parse_number_list(spec.substr(prefix.size()));
    if (coeffs.empty())
      throw std::invalid_argument("potential poly: no coefficients");
    Potential p;
    p.F = [coeffs](double s) {
      double acc = 0.0;
      for (size_t k = coeffs.size(); k-- > 0;) acc = acc * s + coeffs[k];
      return acc;
    };
    p.Fp = [coeffs](double s) {
      double acc = 0.0;
      for (size_t k = coeffs.size(); k-- > 1;)
        acc = acc * s + coeffs[k] * static_cast<double>(k);
      return acc;
    };
    p.Fpp = [coeffs](double s) {
      double acc = 0.0;
      for (size_t k = coeffs.size(); k-- > 2;)
        acc = acc * s + coeffs[k] * static_cast<double>(k * (k - 1));
      return acc;
    };
    p.name = spec;
    return p;
  }
  throw std::invalid_argument("unknown potential spec: " + spec);
}

Damping damping_from_spec(const std::string& spec) {
  Damping d;
  d.name = spec;
  if (spec.rfind("const:", 0) == 0) {
    const double k = std::stod(spec.substr(6));
    d.g = [k](double) { return k; };
    d.kappa = k;
    return d;
  }
  if (spec.rfind("affine:", 0) == 0) {
    auto ab = parse_number_list(spec.substr(7));
    if (ab.size() != 2)
      throw std::invalid_argument("damping affine: expected a,b");
    const double a = ab[0], b = ab[1];
    d.g = [a, b](double s) { return a + b * s; };
    // Lower bound over the range the solver actually visits.
    d.kappa = a - 1.5 * std::abs(b);
    return d;
  }
  throw std::invalid_argument("unknown damping spec: " + spec);
}

void validate_potential(const Potential& p) {
  const double tol = 1e-10;
  for (double s : {-1.0, 1.0}) {
    if (std::abs(p.F(s)) > tol)
      throw std::invalid_argument("potential: F(+-1) != 0");
    if (std::abs(p.Fp(s)) > tol)
      throw std::invalid_argument("potential: F'(+-1) != 0");
    if (!(p.Fpp(s) > tol))
      throw std::invalid_argument("potential: F''(+-1) not positive");
  }
  const int n = 401;
  for (int i = 0; i < n; ++i) {
    const double s = -2.0 + 4.0 * i / (n - 1);
    if (std::min(std::abs(s - 1.0), std::abs(s + 1.0)) < 1e-3) continue;
    if (!(p.F(s) > 0.0))
      throw std::invalid_argument("potential: F not positive away from wells");
  }
  if (p.growth) {
    const auto& gc = *p.growth;
    for (int i = 0; i < n; ++i) {
      const double m = gc.Kgrowth + 4.0 * i / (n - 1);
      for (double s : {m, -m}) {
        const double f = p.F(s);
        const double lower = gc.c1 * std::pow(std::abs(s), gc.gamma / 2.0 + 1.0);
        const double upper = gc.C1 * std::pow(std::abs(s), gc.gamma);
        if (!(lower <= f && f <= upper))
          throw std::invalid_argument("potential: growth envelope violated");
      }
    }
  }
}

void validate_damping(const Damping& d) {
  if (!(d.kappa > 0.0))
    throw std::invalid_argument("damping: kappa must be positive");
  const int n = 401;
  for (int i = 0; i < n; ++i) {
    const double s = -1.5 + 3.0 * i / (n - 1);
    if (!(d.g(s) >= d.kappa))
      throw std::invalid_argument("damping: g below kappa on [-1.5,1.5]");
  }
}

double psi(const Potential& p, double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("psi: x must be finite");
  auto integrand = [&p](double s) { return sqrt2F(p, s); };
  QuadratureResult r =
      integrate_with_breakpoints(integrand, -1.0, x, well_breakpoints(),
                                 kQuadTol);
  if (!r.converged)
    throw QuadratureError("psi: quadrature did not converge", r.value,
                          r.error_estimate);
  return r.value;
}

WellConstants scalar_constants(const Potential& p, const Damping& d) {
  WellConstants c;
  c.c0 = psi(p, 1.0);
  auto sqrtF = [&p](double s) {
    const double f = p.F(s);
    return f > 0.0 ? std::sqrt(f) : 0.0;
  };
  QuadratureResult l1 =
      integrate_with_breakpoints(sqrtF, -1.0, 1.0, well_breakpoints(),
                                 kQuadTol);
  c.sqrtF_l1 = l1.value;
  auto weighted = [&](double s) { return sqrtF(s) * d.g(s); };
  QuadratureResult wg =
      integrate_with_breakpoints(weighted, -1.0, 1.0, well_breakpoints(),
                                 kQuadTol);
  c.g_bar = wg.value / c.sqrtF_l1;
  return c;
}

WaveProfile standing_wave(const Potential& p, double z_max, int n_pts) {
  if (!(z_max > 0.0)) throw std::invalid_argument("standing_wave: z_max <= 0");
  if (n_pts < 3 || n_pts % 2 == 0)
    throw std::invalid_argument("standing_wave: n_pts must be odd and >= 3");
  if (!(p.Fpp(1.0) > 0.0) || !(p.Fpp(-1.0) > 0.0))
    throw std::invalid_argument(
        "standing_wave: non-integrable singularity, F''(+-1) <= 0");

  // Inversion table z(u) on a grid uniform in u, clipped at the wells.
  const int n_inv = 8001;  // odd: u = 0 is a table node
  const double u_hi = 1.0 - kProfileClip;
  std::vector<double> ut(n_inv), zt(n_inv);
  for (int j = 0; j < n_inv; ++j)
    ut[j] = -u_hi + 2.0 * u_hi * j / (n_inv - 1);
  const int mid = n_inv / 2;
  ut[mid] = 0.0;
  zt[mid] = 0.0;
  for (int j = mid + 1; j < n_inv; ++j)
    zt[j] = zt[j - 1] + z_of_u_increment(p, ut[j - 1], ut[j]);
  for (int j = mid - 1; j >= 0; --j)
    zt[j] = zt[j + 1] - z_of_u_increment(p, ut[j], ut[j + 1]);

  PchipInterpolant guess(zt, ut);

  const double z_cap = std::min(z_max, std::min(zt.back(), -zt.front()));
  std::vector<double> z(n_pts), u(n_pts);
  for (int i = 0; i < n_pts; ++i)
    z[i] = -z_cap + 2.0 * z_cap * i / (n_pts - 1);
  z[n_pts / 2] = 0.0;

  // Newton polish of the interpolated inverse: solve z(u) = z_i using the
  // incremental quadrature from the nearest table node.
  for (int i = 0; i < n_pts; ++i) {
    const double target = z[i];
    if (target == 0.0) {
      u[i] = 0.0;
      continue;
    }
    auto it = std::lower_bound(zt.begin(), zt.end(), target);
    size_t hi = std::min<size_t>(
        std::max<size_t>(1, static_cast<size_t>(it - zt.begin())),
        zt.size() - 1);
    size_t lo = hi - 1;
    double a = ut[lo], b = ut[hi];
    double x = std::clamp(guess(target), a, b);
    double zx = zt[lo] + z_of_u_increment(p, ut[lo], x);
    for (int iter = 0; iter < 60; ++iter) {
      const double err = zx - target;
      if (std::abs(err) < 1e-13) break;
      if (err > 0.0)
        b = x;
      else
        a = x;
      double step = -err * sqrt2F(p, x);
      double xn = x + step;
      if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
      zx += z_of_u_increment(p, x, xn);
      x = xn;
    }
    u[i] = x;
  }
  return WaveProfile(std::move(z), std::move(u));
}

PsiEvaluator::PsiEvaluator(const Potential& p, double lo, double hi, int n) {
  std::vector<double> x(n), y(n);
  auto integrand = [&p](double s) { return sqrt2F(p, s); };
  x[0] = lo;
  y[0] = psi(p, lo);
  for (int i = 1; i < n; ++i) {
    x[i] = lo + (hi - lo) * i / (n - 1);
    QuadratureResult r = integrate_with_breakpoints(
        integrand, x[i - 1], x[i], well_breakpoints(), 1e-12);
    y[i] = y[i - 1] + r.value;
  }
  interp_ = PchipInterpolant(std::move(x), std::move(y));
}

}  // namespace hypac
