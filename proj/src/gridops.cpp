#include "hypac/gridops.hpp"

#include <cmath>
#include <stdexcept>

namespace hypac {

std::vector<double> centered_gradient(std::span<const double> f, double dr) {
  const size_t n = f.size();
  if (n < 2) throw std::invalid_argument("gradient: need >=2 samples");
  std::vector<double> g(n);
  g[0] = (f[1] - f[0]) / dr;
  for (size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2.0 * dr);
  g[n - 1] = (f[n - 1] - f[n - 2]) / dr;
  return g;
}

double trapz_uniform(std::span<const double> f, double dr) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dr;
}

double trapz_radial(std::span<const double> f, double dr, int n) {
  if (f.size() < 2) return 0.0;
  double s = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    const double r = dr * static_cast<double>(i);
    const double w = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
    s += w * f[i] * std::pow(r, n - 1);
  }
  return s * dr;
}

double trapz(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) throw std::invalid_argument("trapz: size mismatch");
  double s = 0.0;
  for (size_t i = 0; i + 1 < x.size(); ++i)
    s += 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

}  // namespace hypac
