#pragma once

#include <Eigen/Dense>
#include <complex>

namespace mdc {

// Riemann zeta at integer s >= 2.
double zeta(int s);
double zeta3();
double zeta5();

// Li_n(e^{iq}) on the unit circle.
struct PolylogValue {
  int n = 0;
  double q = 0.0;
  double re = 0.0;
  double im = 0.0;
  std::complex<double> value() const { return {re, im}; }
};

// Maps any phase onto [-pi, pi).
double fold_phase(double q);

// Orders 2..10. Uses the expansion about q = 0, which converges for |q| < 2pi
// and carries the q^{n-1} log(-iq) branch term exactly.
PolylogValue polylog_circle(int n, double q);

// Li_n(e^{iq}) - zeta(n), free of the cancellation near q = 0.
std::complex<double> polylog_circle_delta(int n, double q);

// Orthonormal Hermite function psi_k(y) = H_k(y) e^{-y^2/2} / sqrt(2^k k! sqrt(pi)),
// evaluated with rescaled iterates so k ~ 1000 neither overflows nor underflows.
double hermite_function(int k, double y);

// Oscillator mode n >= 1 of width sigma, proportional to H_{n-1}(x/sigma) e^{-x^2/2sigma^2}.
double oscillator_mode(int n, double x, double sigma);

// Samples mode n on a grid; optionally rescaled so the squared samples sum to one.
Eigen::VectorXd oscillator_mode(int n, const Eigen::VectorXd& x, double sigma,
                                bool normalize_on_grid);

}  // namespace mdc
