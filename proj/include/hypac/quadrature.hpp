#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypac {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  int evaluations = 0;
};

// Thrown when the adaptive scheme cannot reach the requested tolerance.
// Carries the partial value so callers can still report a diagnostic number.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial, double err)
      : std::runtime_error(what), partial_value(partial), error_estimate(err) {}
  double partial_value;
  double error_estimate;
};

// Adaptive Gauss-Kronrod (7-15 pair) with absolute tolerance.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol,
                           int max_intervals = 4000);

// Same, but initial subdivision at the supplied interior breakpoints.
// Breakpoints outside (a,b) are ignored. Handles a > b by sign flip.
QuadratureResult integrate_with_breakpoints(
    const std::function<double(double)>& f, double a, double b,
    const std::vector<double>& breakpoints, double abs_tol,
    int max_intervals = 4000);

}  // namespace hypac
