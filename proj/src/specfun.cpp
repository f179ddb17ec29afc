#include "mdc/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "mdc/error.hpp"

namespace mdc {

namespace {

constexpr double kPi = std::numbers::pi;

// Borwein's alternating-series acceleration for eta(s); zeta = eta / (1 - 2^{1-s}).
double zeta_borwein(int s) {
  constexpr int n = 32;
  std::array<double, n + 1> d{};
  double term = 1.0 / n;  // (n+i-1)! 4^i / ((n-i)! (2i)!) at i = 0
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1) * (2.0 * i));
    acc += term;
    d[i] = n * acc;
  }
  double eta = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    eta += sign * (d[k] - d[n]) / std::pow(k + 1.0, s);
  }
  eta = -eta / d[n];
  return eta / (1.0 - std::pow(2.0, 1 - s));
}

const std::vector<double>& zeta_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(130, 0.0);
    for (int s = 2; s < 130; ++s) t[s] = s < 60 ? zeta_borwein(s) : 1.0 + std::pow(2.0, -s);
    return t;
  }();
  return table;
}

}  // namespace

double zeta(int s) {
  require(s >= 2, "zeta: order must be an integer >= 2");
  if (s < 130) return zeta_table()[s];
  return 1.0;
}

double zeta3() { return zeta(3); }
double zeta5() { return zeta(5); }

double fold_phase(double q) {
  const double two_pi = 2.0 * kPi;
  double r = std::fmod(q + kPi, two_pi);
  if (r < 0) r += two_pi;
  return r - kPi;
}

namespace {

// Series about q = 0; skip_zero drops the constant zeta(n) term.
std::complex<double> polylog_series(int n, double q, bool skip_zero) {
  using cd = std::complex<double>;
  const cd iq(0.0, q);
  cd sum = 0.0;
  cd pw = 1.0;       // (iq)^k
  double fact = 1.0;  // k!
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      pw *= iq;
      fact *= k;
    }
    if (k < n - 1) {
      if (k > 0 || !skip_zero) sum += zeta(n - k) * pw / fact;
    } else if (k == n - 1) {
      double harmonic = 0.0;
      for (int j = 1; j <= n - 1; ++j) harmonic += 1.0 / j;
      const cd log_miq(std::log(std::abs(q)), q > 0 ? -kPi / 2 : kPi / 2);
      sum += pw / fact * (harmonic - log_miq);
    } else {
      sum += -0.5 * pw / fact;
    }
  }
  // Remaining terms k = n - 1 + 2p carry zeta(1 - 2p); even negative orders vanish.
  const double lq = std::log(std::abs(q));
  const double l2pi = std::log(2.0 * kPi);
  for (int p = 1; p < 64; ++p) {
    const int k = n - 1 + 2 * p;
    const double logmag = std::log(2.0) + std::lgamma(2.0 * p) - std::lgamma(k + 1.0) -
                          2.0 * p * l2pi + std::log(zeta(2 * p)) + k * lq;
    const double mag = std::exp(logmag);
    // (-1)^p from zeta(1-2p), times i^k.
    const int phase = (((p % 2) ? 2 : 0) + k) % 4;
    static const std::array<cd, 4> ik = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    cd t = mag * ik[phase];
    if (q < 0 && (k % 2)) t = -t;
    sum += t;
    if (mag < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

PolylogValue polylog_circle(int n, double q) {
  require(n >= 2 && n <= 10, "polylog_circle: order must be in 2..10");
  PolylogValue out;
  out.n = n;
  q = (q >= -kPi && q <= kPi) ? q : fold_phase(q);
  out.q = q;
  if (q == 0.0) {
    out.re = zeta(n);
    return out;
  }
  const std::complex<double> v = polylog_series(n, q, false);
  out.re = v.real();
  out.im = v.imag();
  return out;
}

std::complex<double> polylog_circle_delta(int n, double q) {
  require(n >= 2 && n <= 10, "polylog_circle_delta: order must be in 2..10");
  q = (q >= -kPi && q <= kPi) ? q : fold_phase(q);
  if (q == 0.0) return 0.0;
  return polylog_series(n, q, true);
}

double hermite_function(int k, double y) {
  require(k >= 0, "hermite_function: index must be >= 0");
  constexpr double big = 1e150;
  double log_scale = -0.5 * y * y;
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25);
  for (int j = 0; j < k; ++j) {
    const double next = std::sqrt(2.0 / (j + 1)) * y * cur - std::sqrt(double(j) / (j + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > big) {
      cur /= big;
      prev /= big;
      log_scale += std::log(big);
    }
  }
  if (cur == 0.0) return 0.0;
  return cur * std::exp(log_scale);
}

double oscillator_mode(int n, double x, double sigma) {
  require(n >= 1, "oscillator_mode: n must be >= 1");
  require(sigma > 0, "oscillator_mode: sigma must be positive");
  return hermite_function(n - 1, x / sigma);
}

Eigen::VectorXd oscillator_mode(int n, const Eigen::VectorXd& x, double sigma,
                                bool normalize_on_grid) {
  Eigen::VectorXd v(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) v[i] = oscillator_mode(n, x[i], sigma);
  if (normalize_on_grid) {
    const double nrm = v.norm();
    if (nrm > 0) v /= nrm;
  }
  return v;
}

}  // namespace mdc
