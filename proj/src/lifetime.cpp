#include "mdc/lifetime.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "mdc/error.hpp"
#include "mdc/homogeneous.hpp"
#include "mdc/parallel.hpp"
#include "mdc/quadrature.hpp"
#include "mdc/specfun.hpp"

namespace mdc {

namespace {

constexpr double kPi = std::numbers::pi;

// 2 N(f) with N the Bose factor at f/tau.
double two_bose(double f, double tau) {
  if (tau <= 0.0) return 0.0;
  return 2.0 / std::expm1(f / tau);
}

double bose(double f, double tau) { return tau <= 0.0 ? 0.0 : 1.0 / std::expm1(f / tau); }

// J(0) - J(q) in 1D without cancellation.
double band_drop_1d(double q) { return -2.0 * polylog_circle_delta(3, q).real(); }

struct GridMode {
  double weight = 0.0;  // 1 / (number of grid points)
  double drop = 0.0;    // J(0) - J(q)
  double f = 0.0;
  double g = 0.0;
};

// All (q, branch) samples of a Gamma-centred grid, q = 0 excluded.
std::vector<GridMode> build_grid_modes(int dim, int n) {
  std::vector<GridMode> out;
  if (dim == 1) {
    out.resize(n - 1);
    parallel_for(out.size(), [&](std::size_t j) {
      const double q = fold_phase(2.0 * kPi * double(j + 1) / n);
      out[j] = {1.0 / n, band_drop_1d(q), phonon_f_1d(q), coupling_g_1d(q)};
    });
    return out;
  }
  const Lattice2D& lat = default_lattice();
  const double J0 = band_2d(lat, Eigen::Vector2d::Zero());
  const std::size_t cells = std::size_t(n) * n - 1;
  out.resize(2 * cells);
  parallel_for(cells, [&](std::size_t idx) {
    const std::size_t c = idx + 1;
    const Eigen::Vector2d q =
        fold_bz_2d((double(c / n) * reciprocal_b1() + double(c % n) * reciprocal_b2()) / n);
    const double drop = J0 - band_2d(lat, q);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(dynamical_matrix_2d(lat, q));
    const Eigen::Vector2d G = coupling_vector_2d(lat, q);
    for (int l = 0; l < 2; ++l)
      out[2 * idx + l] = {1.0 / (double(n) * n), drop, std::sqrt(std::max(0.0, es.eigenvalues()[l])),
                          G.dot(es.eigenvectors().col(l))};
  });
  return out;
}

// The 2D lattice sums dominate; each grid is built once per process.
const std::vector<GridMode>& grid_modes(int dim, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<GridMode>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({dim, n});
  if (it == cache.end()) it = cache.emplace(std::make_pair(dim, n), build_grid_modes(dim, n)).first;
  return it->second;
}

}  // namespace

double band_width(int dim) {
  if (dim == 1) return band_width_1d();
  static const double w = [] {
    const Lattice2D& lat = default_lattice();
    const double J0 = band_2d(lat, Eigen::Vector2d::Zero());
    return J0 - std::min(band_2d(lat, point_K()), band_2d(lat, point_M()));
  }();
  return w;
}

double debye_f(int dim) {
  if (dim == 1) return debye_f_1d();
  static const double f = phonon_fmax_2d(default_lattice(), 24);
  return f;
}

IntegralI integral_I(int dim, double tau, int grid2d) {
  require(dim == 1 || dim == 2, "integral_I: dimension must be 1 or 2");
  require(tau >= 0, "integral_I: tau must be non-negative");
  IntegralI I;
  if (dim == 1) {
    auto base = [](double q) {
      const double f = phonon_f_1d(q), g = coupling_g_1d(q);
      return f > 0 ? g * g / f : 0.0;
    };
    I.vacuum = integrate(base, 0.0, kPi, 1e-13, 1e-11).value / kPi;
    if (tau > 0) {
      auto th = [&](double q) {
        const double f = phonon_f_1d(q), g = coupling_g_1d(q);
        return f > 0 ? g * g / f * two_bose(f, tau) : 0.0;
      };
      // The thermal weight is concentrated where f ~ tau; split there.
      const double qs = std::min(kPi, tau / std::sqrt(12.0 * zeta3()));
      I.thermal = (integrate(th, 0.0, qs, 1e-13, 1e-11).value +
                   integrate(th, qs, kPi, 1e-13, 1e-11).value) /
                  kPi;
    }
    return I;
  }
  for (const GridMode& m : grid_modes(2, grid2d)) {
    if (m.f <= 0) continue;
    I.vacuum += m.weight * m.g * m.g / m.f;
    I.thermal += m.weight * m.g * m.g / m.f * two_bose(m.f, tau);
  }
  return I;
}

double quadratic_rate(int dim, double kappa, double epsilon, double gamma, double tau) {
  require(gamma > 0, "quadratic_rate: gamma must be positive");
  const double s = epsilon + kappa;
  if (s == 0.0) return 0.0;
  return std::abs(s) * std::pow(gamma, -0.25) * std::sqrt(integral_I(dim, tau).total());
}

double quadratic_rate_sq_grid(double kappa, double epsilon, double gamma, double tau, int n) {
  require(gamma > 0 && n >= 2, "quadratic_rate_sq_grid: bad input");
  const double s2 = (epsilon + kappa) * (epsilon + kappa) / std::sqrt(gamma);
  double acc = 0.0;
  for (int j = 1; j < n; ++j) {
    const double q = fold_phase(2.0 * kPi * j / n);
    const double f = phonon_f_1d(q), g = coupling_g_1d(q);
    acc += g * g / f * (1.0 + two_bose(f, tau));
  }
  return s2 * acc / n;
}

GoldenRuleResult golden_rule_rate(int dim, double kappa, double epsilon, double gamma, double tau) {
  require(gamma > 0, "golden_rule_rate: gamma must be positive");
  require(tau >= 0, "golden_rule_rate: tau must be non-negative");
  GoldenRuleResult r;
  if (dim == 2) {
    r.note = "2D: no resonant or long-wavelength contribution at this order";
    return r;
  }
  require(dim == 1, "golden_rule_rate: dimension must be 1 or 2");
  const double s2 = (epsilon + kappa) * (epsilon + kappa);
  const double sg = std::sqrt(gamma);
  r.emission = kappa > 0;
  if (tau > 0) r.Gamma_kink = s2 * std::sqrt(0.75 * zeta3()) * tau;

  const double ak = std::abs(kappa);
  if (ak > 0 && s2 > 0) {
    auto h = [&](double q) { return ak * band_drop_1d(q) - phonon_f_1d(q) / sg; };
    constexpr int scan = 4096;
    double qa = kPi / scan, ha = h(qa);
    for (int i = 2; i <= scan; ++i) {
      const double qb = kPi * i / scan, hb = h(qb);
      if ((ha < 0) != (hb < 0) || hb == 0.0) {
        double lo = qa, hi = qb, flo = ha;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi), fm = h(mid);
          if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        Resonance res;
        res.q0 = 0.5 * (lo + hi);
        const double f = phonon_f_1d(res.q0), g = coupling_g_1d(res.q0);
        const double slope = band_1d_slope(res.q0) + phonon_f_1d_slope(res.q0) / (sg * ak);
        res.C = 2.0 * g * g / (f * std::abs(slope));
        res.occupation = bose(f, tau) + (r.emission ? 1.0 : 0.0);
        res.rate = s2 / (ak * sg) * res.C * res.occupation;
        r.roots.push_back(res);
        r.Gamma_resonant += res.rate;
      }
      qa = qb;
      ha = hb;
    }
  }
  if (!r.roots.empty()) r.q0 = r.roots.front().q0;
  r.Gamma = r.Gamma_resonant + r.Gamma_kink;
  return r;
}

PopulationCurve excited_population(const Eigen::VectorXd& t, int dim, double kappa, double epsilon,
                                   double gamma, double tau, int n_grid) {
  require(gamma > 0, "excited_population: gamma must be positive");
  require(dim == 1 || dim == 2, "excited_population: dimension must be 1 or 2");
  PopulationCurve out;
  out.t = t;
  out.Pe = Eigen::VectorXd::Ones(t.size());
  const double s2 = (epsilon + kappa) * (epsilon + kappa) / std::sqrt(gamma);
  if (s2 == 0.0) return out;
  const std::vector<GridMode>& modes = grid_modes(dim, n_grid);
  const double sg = std::sqrt(gamma);
  // sin^2(d t/2) / d^2 stays finite as d -> 0.
  auto kernel = [](double d, double tt) {
    const double x = 0.5 * d * tt;
    if (std::abs(x) < 1e-8) return 0.25 * tt * tt;
    const double s = std::sin(x) / d;
    return s * s;
  };
  std::vector<double> loss(t.size(), 0.0);
  parallel_for(t.size(), [&](std::size_t it) {
    const double tt = t[it];
    double acc = 0.0;
    for (const GridMode& m : modes) {
      if (m.f <= 0) continue;
      const double Omega = kappa * m.drop;
      const double w = m.f / sg;
      const double n = bose(m.f, tau);
      acc += m.weight * m.g * m.g / m.f * 4.0 * ((n + 1.0) * kernel(w - Omega, tt) + n * kernel(-w - Omega, tt));
    }
    loss[it] = s2 * acc;
  });
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    out.Pe[i] = 1.0 - loss[i];
    if (out.Pe[i] < 0.9) out.perturbative = false;
  }
  return out;
}

DecayReport classify_and_lifetime(int dim, double kappa, double epsilon, double gamma, double tau,
                                  double threshold) {
  require(gamma > 0, "classify_and_lifetime: gamma must be positive");
  DecayReport d;
  d.dim = dim;
  d.W = quadratic_rate(dim, kappa, epsilon, gamma, tau);
  d.golden = golden_rule_rate(dim, kappa, epsilon, gamma, tau);
  d.Gamma = d.golden.Gamma;
  d.delta_E = std::abs(kappa) * band_width(dim);
  d.omega_D = debye_f(dim) / std::sqrt(gamma);
  d.t_c = 1.0 / std::max(d.delta_E, d.omega_D);
  d.P_c = d.W * d.W * d.t_c * d.t_c;
  const double s2 = (epsilon + kappa) * (epsilon + kappa);
  d.P_c_estimate = d.delta_E > d.omega_D ? s2 / (kappa * kappa * std::sqrt(gamma)) : s2;
  d.regime = d.P_c < threshold ? Regime::Weak : Regime::Strong;
  if (d.regime == Regime::Weak)
    d.T_e = d.Gamma > 0 ? 1.0 / d.Gamma : std::numeric_limits<double>::infinity();
  else
    d.T_e = 1.0 / d.W;
  return d;
}

}  // namespace mdc
