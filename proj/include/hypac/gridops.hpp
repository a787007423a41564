#pragma once

#include <span>
#include <vector>

namespace hypac {

// Centered differences with one-sided ends.
std::vector<double> centered_gradient(std::span<const double> f, double dr);

// Trapezoid on a uniform grid.
double trapz_uniform(std::span<const double> f, double dr);

// Trapezoid of f(r) * r^(n-1) on the uniform radial grid r_i = i*dr.
double trapz_radial(std::span<const double> f, double dr, int n);

// Trapezoid on sorted, possibly nonuniform abscissae.
double trapz(std::span<const double> x, std::span<const double> f);

}  // namespace hypac
