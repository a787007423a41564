#pragma once

#include <vector>

namespace hypac {

// Shape-preserving piecewise-cubic interpolant (Fritsch-Carlson slopes).
// Monotone data produce a monotone interpolant; general data are handled
// by zeroing the slope at local extrema. Evaluation outside the abscissa
// range clamps to the end values.
class PchipInterpolant {
 public:
  PchipInterpolant() = default;
  PchipInterpolant(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  const std::vector<double>& abscissae() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, d_;  // nodes, values, node slopes
  size_t locate(double x) const;
};

}  // namespace hypac
