#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace svcva {

// Shared numerical knobs.  dt drives every time-axis trapezoid; upper_limit
// and n_nodes drive the Fourier integrals of the Heston pricer.
struct QuadratureConfig {
    double dt = 1e-2;
    double upper_limit = 200.0;
    int n_nodes = 64;

    void validate() const;
};

// Uniform grid over [a, b] whose step is (b-a)/n with n = round((b-a)/dt),
// at least one interval.  Returned vector holds the n+1 node times.
std::vector<double> uniform_grid(double a, double b, double dt);

// Composite trapezoid over equally spaced samples.
double trapezoid(const std::vector<double>& values, double dt);

// Running trapezoid: out[i] = integral over the first i intervals; out[0]=0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& values, double dt);

// Trapezoid of f over [a, b] with step dt (grid snapped as uniform_grid).
double integrate_trapezoid(const std::function<double(double)>& f, double a,
                           double b, double dt);

// Composite 16-point Gauss-Legendre over [a, b] split into `panels` panels.
double gauss_legendre_panels(const std::function<double(double)>& f, double a,
                             double b, int panels);

} // namespace svcva
