#pragma once

#include <functional>

namespace mdc {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

// Adaptive 7/15-point Gauss-Kronrod on [a, b]. Bisects the interval with the
// largest error estimate until abs or rel tolerance is met.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-12, double rel_tol = 1e-12,
                     int max_intervals = 2000);

// Same on [a, inf) through x = a + t/(1-t).
QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double abs_tol = 1e-12, double rel_tol = 1e-12,
                            int max_intervals = 2000);

}  // namespace mdc
