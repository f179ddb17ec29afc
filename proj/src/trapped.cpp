#include "mdc/trapped.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mdc/error.hpp"
#include "mdc/homogeneous.hpp"
#include "mdc/parallel.hpp"
#include "mdc/quadrature.hpp"
#include "mdc/scales.hpp"
#include "mdc/specfun.hpp"

namespace mdc {

namespace {

constexpr double kPi = std::numbers::pi;

// Pairwise matrices of a configuration: inv3 = 1/|d|^3, inv5 = 1/|d|^5,
// odd5 = d/|d|^5, all with zero diagonal.
struct Pairs {
  Eigen::MatrixXd inv3, inv5, odd5;
};

Pairs pair_matrices(const Eigen::VectorXd& x) {
  const Eigen::Index N = x.size();
  Pairs p{Eigen::MatrixXd::Zero(N, N), Eigen::MatrixXd::Zero(N, N), Eigen::MatrixXd::Zero(N, N)};
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i) {
      if (i == j) continue;
      const double d = x[i] - x[j];
      const double a = std::abs(d);
      const double a2 = a * a;
      p.inv3(i, j) = 1.0 / (a2 * a);
      p.inv5(i, j) = 1.0 / (a2 * a2 * a);
      p.odd5(i, j) = d * p.inv5(i, j);
    }
  return p;
}

// Graph Laplacian of the 1/|d|^5 weights.
Eigen::MatrixXd laplacian5(const Pairs& p) {
  Eigen::MatrixXd Lap = -p.inv5;
  Lap.diagonal() = p.inv5.rowwise().sum();
  return Lap;
}

// Fixes the overall sign of each column: the first clearly nonzero entry is positive.
void fix_signs(Eigen::MatrixXd& V) {
  for (Eigen::Index k = 0; k < V.cols(); ++k) {
    const double big = V.col(k).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < V.rows(); ++i)
      if (std::abs(V(i, k)) > 1e-3 * big) {
        if (V(i, k) < 0.0) V.col(k) *= -1.0;
        break;
      }
  }
}

// Integral of (1 - u^2)^{1/3} over [-1, 1].
double profile_norm() { return 2.0 / trap_lambda(); }

// Same integral up to u = sin(theta), written as an integral of cos^{5/3}.
double profile_cumulative_theta(double theta) {
  if (theta <= -kPi / 2) return 0.0;
  if (theta >= kPi / 2) return profile_norm();
  return integrate([](double t) { return std::pow(std::cos(t), 5.0 / 3.0); }, -kPi / 2, theta,
                   1e-14, 1e-13)
      .value;
}

}  // namespace

double unit_density_stiffness(int N) {
  const double lam = trap_lambda();
  return 32.0 * zeta3() / (lam * lam * double(N) * N);
}

double TrappedCrystal::nu_tilde(double gamma) const { return std::sqrt(K / gamma); }

DensityProfile density_profile(int N, double K) {
  require(N >= 2, "density_profile: N >= 2");
  require(K > 0.0, "density_profile: trap stiffness must be positive");
  const double lam = trap_lambda();
  DensityProfile p;
  p.N = N;
  p.n0 = std::pow(K * lam * lam * double(N) * N / (32.0 * zeta3()), 0.2);
  p.L = lam * N / p.n0;
  return p;
}

double DensityProfile::density(double x) const {
  const double u = 2.0 * x / L;
  if (std::abs(u) >= 1.0) return 0.0;
  return n0 * std::cbrt(1.0 - u * u);
}

double DensityProfile::cumulative(double x) const {
  const double u = std::clamp(2.0 * x / L, -1.0, 1.0);
  return N * profile_cumulative_theta(std::asin(u)) / profile_norm();
}

double DensityProfile::inverse(double count) const {
  require(count >= 0.0 && count <= N, "density inverse: count outside [0, N]");
  const double target = count / N * profile_norm();
  // Newton in theta, safeguarded by bisection.
  double lo = -kPi / 2, hi = kPi / 2;
  double t = std::asin(std::clamp(2.0 * count / N - 1.0, -1.0, 1.0));
  for (int it = 0; it < 100; ++it) {
    const double r = profile_cumulative_theta(t) - target;
    if (r > 0.0) hi = t; else lo = t;
    const double d = std::pow(std::max(0.0, std::cos(t)), 5.0 / 3.0);
    double tn = d > 0.0 ? t - r / d : 0.5 * (lo + hi);
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (std::abs(tn - t) < 1e-15) { t = tn; break; }
    t = tn;
  }
  return 0.5 * L * std::sin(t);
}

double center_density_si(int N, double nu, double mass, double C3) {
  require(N >= 2 && nu > 0.0 && mass > 0.0 && C3 > 0.0, "center_density_si: positive inputs");
  const double lam = trap_lambda();
  return std::pow(lam, 0.4) / (2.0 * std::pow(zeta3(), 0.2)) * std::pow(double(N), 0.4) *
         std::pow(mass * nu * nu / C3, 0.2);
}

namespace {

// Newton at stiffness K. Stops at 1e-12 relative force or once round-off
// stalls progress inside the 1e-10 acceptance band.
TrappedCrystal newton_positions(int N, double K) {
  const DensityProfile prof = density_profile(N, K);
  Eigen::VectorXd x(N);
  for (int i = 0; i < N / 2; ++i) {
    const double xi = prof.inverse(i + 0.5);
    x[i] = xi;
    x[N - 1 - i] = -xi;
  }
  if (N % 2) x[N / 2] = 0.0;
  if (N == 2) x << -0.5 * std::pow(6.0 / K, 0.2), 0.5 * std::pow(6.0 / K, 0.2);

  TrappedCrystal c;
  c.N = N;
  c.K = K;
  c.n0 = prof.n0;
  c.L = prof.L;
  double res = 0.0, scale = 1.0, best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const Pairs p = pair_matrices(x);
    // Gradient K x_i - 3 sum_j sign(d_ij) / d_ij^4, with sign(d)/d^4 = d/|d|^5.
    Eigen::VectorXd grad = K * x - 3.0 * p.odd5.rowwise().sum();
    res = grad.cwiseAbs().maxCoeff();
    // Forces are measured against the largest trap force.
    scale = std::max(1.0, K * x.cwiseAbs().maxCoeff());
    c.iterations = it;
    if (res < 1e-12 * scale) break;
    if (res < 1e-10 * scale && res > 0.5 * best) break;
    best = std::min(best, res);
    Eigen::MatrixXd H = 12.0 * laplacian5(p);
    H.diagonal().array() += K;
    Eigen::LLT<Eigen::MatrixXd> llt(H);
    Eigen::VectorXd step = llt.info() == Eigen::Success
                               ? Eigen::VectorXd(llt.solve(grad))
                               : Eigen::VectorXd(H.ldlt().solve(grad));
    // Damp so that no pair closes by more than half its gap.
    double damp = 1.0;
    for (int i = 0; i + 1 < N; ++i) {
      const double gap = x[i + 1] - x[i];
      const double close = step[i + 1] - step[i];
      if (close > 0.5 * gap) damp = std::min(damp, 0.5 * gap / close);
    }
    x -= damp * step;
    x = 0.5 * (x - x.reverse()).eval();
  }
  c.residual = res;
  c.x = x;
  if (res > 1e-10 * scale) {
    std::ostringstream os;
    os << "equilibrium_positions: force residual " << res << " after " << c.iterations
       << " Newton steps";
    throw ConvergenceError(os.str());
  }
  return c;
}

}  // namespace

TrappedCrystal equilibrium_positions(int N, double K) {
  require(N >= 2, "equilibrium_positions: N >= 2");
  require(K > 0.0, "equilibrium_positions: trap stiffness must be positive");
  // x(K') = (K/K')^{1/5} x(K) exactly, so solve where the centre spacing is
  // one and rescale; this keeps the conditioning independent of K.
  const double Ku = unit_density_stiffness(N);
  if (K == Ku) return newton_positions(N, K);
  TrappedCrystal c = newton_positions(N, Ku);
  const double lam = std::pow(Ku / K, 0.2);
  const DensityProfile prof = density_profile(N, K);
  c.K = K;
  c.x *= lam;
  c.residual *= std::pow(lam, -4.0);
  c.n0 = prof.n0;
  c.L = prof.L;
  return c;
}

TrappedCrystal equilibrium_positions(int N) { return equilibrium_positions(N, unit_density_stiffness(N)); }

TrappedCrystal equilibrium_positions(int N, double nu_tilde, double gamma) {
  require(nu_tilde > 0.0 && gamma > 0.0, "equilibrium_positions: nu_tilde, gamma > 0");
  return equilibrium_positions(N, gamma * nu_tilde * nu_tilde);
}

ProfileDeviation compare_to_profile(const TrappedCrystal& c) {
  const DensityProfile prof = density_profile(c.N, c.K);
  ProfileDeviation d;
  for (int i = 0; i + 1 < c.N; ++i) {
    const double mid = 0.5 * (c.x[i] + c.x[i + 1]);
    d.boundary_cells = std::max(d.boundary_cells, std::abs(prof.cumulative(mid) - (i + 1)));
  }
  for (int i = 0; i < c.N; ++i) {
    const double xa = prof.inverse(i + 0.5);
    const double spacing = i == 0 ? c.x[1] - c.x[0]
                          : i == c.N - 1 ? c.x[i] - c.x[i - 1]
                                         : 0.5 * (c.x[i + 1] - c.x[i - 1]);
    const double dev = std::abs(c.x[i] - xa) / spacing;
    if (dev > d.site_spacings) {
      d.site_spacings = dev;
      d.worst_site = i;
    }
  }
  return d;
}

ModeBasis exciton_modes_trapped(const TrappedCrystal& c) {
  const Pairs p = pair_matrices(c.x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.inv3);
  ModeBasis b;
  b.kind = ModeKind::Exciton;
  b.values = es.eigenvalues().reverse();
  b.modes = es.eigenvectors().rowwise().reverse();
  fix_signs(b.modes);
  return b;
}

double transverse_alpha(ModeKind which) {
  switch (which) {
    case ModeKind::PhononY: return 1.0;
    case ModeKind::PhononZ: return 3.0;
    default: throw DomainError("transverse_alpha: not a transverse branch");
  }
}

ModeBasis phonon_modes_trapped(const TrappedCrystal& c, ModeKind which, double gamma,
                               double nu_perp) {
  require(gamma > 0.0, "phonon_modes_trapped: gamma > 0");
  require(which != ModeKind::Exciton, "phonon_modes_trapped: phonon branch required");
  const Pairs p = pair_matrices(c.x);
  const Eigen::MatrixXd Lap = laplacian5(p);
  Eigen::MatrixXd H;
  if (which == ModeKind::PhononLong) {
    H = 12.0 * Lap;
    H.diagonal().array() += c.K;
  } else {
    require(nu_perp >= 0.0, "phonon_modes_trapped: nu_perp >= 0");
    H = -3.0 * transverse_alpha(which) * Lap;
    H.diagonal().array() += gamma * nu_perp * nu_perp;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  ModeBasis b;
  b.kind = which;
  b.gamma = gamma;
  b.omega_sq = es.eigenvalues() / gamma;
  b.modes = es.eigenvectors();
  fix_signs(b.modes);
  b.values.resize(c.N);
  for (int k = 0; k < c.N; ++k) {
    const double w2 = b.omega_sq[k];
    b.values[k] = w2 >= 0.0 ? std::sqrt(w2) : -std::sqrt(-w2);
    if (w2 < 0.0) ++b.unstable;
  }
  return b;
}

double exciton_lw(int n, int N) {
  const double lam = trap_lambda();
  const double A = 4.0 * std::sqrt(zeta3()) / lam;
  const double BN = 3.0 + std::log(lam * std::sqrt(std::log(N / 2.0) / (32.0 * zeta3())));
  const double s = n - 0.5;
  return 2.0 * zeta3() - A * std::sqrt(BN + std::log(N / s)) * s / N;
}

double exciton_sw(int n, int N) {
  const double nbar = N - n + 1;
  return exciton_sw_min() +
         std::sqrt(24.0 * zeta3() * std::log(2.0)) / trap_lambda() * (nbar - 0.5) / N;
}

double exciton_sw_min() { return -1.5 * zeta3(); }

double exciton_lw_width_sq(int n, int N) {
  const double lam = trap_lambda();
  const double BN = 3.0 + std::log(lam * std::sqrt(std::log(N / 2.0) / (32.0 * zeta3())));
  return N * lam / (4.0 * std::sqrt(zeta3())) * std::sqrt(BN + std::log(N / (n - 0.5)));
}

double phonon_long_lw(int m, double nu_tilde) {
  return nu_tilde * std::sqrt(1.0 + (3.0 * m * m - m - 2.0) / 2.0);
}

double phonon_debye_trapped(int N, double nu_tilde) {
  return nu_tilde * N * trap_lambda() * std::sqrt(93.0 * zeta5() / (64.0 * zeta3()));
}

double phonon_long_sw(int m, int N, double nu_tilde) {
  const double lam = trap_lambda();
  const double slope = std::sqrt(40.0 * zeta3() / (31.0 * zeta5() * lam * lam));
  return phonon_debye_trapped(N, nu_tilde) * (1.0 - slope * (N - m + 0.5) / N);
}

double phonon_perp_lw(int m, int N, double nu_perp, double gamma, double alpha) {
  const double w2 = nu_perp * nu_perp -
                    alpha * 4.0 * zeta3() / gamma * (3.0 * m * m - m - 2.0) / (double(N) * N);
  return w2 >= 0.0 ? std::sqrt(w2) : -std::sqrt(-w2);
}

double phonon_perp_sw(int m, int N, double nu_perp, double gamma, double alpha, double B) {
  const double w2 =
      nu_perp * nu_perp - phonon_perp_sw_A() * alpha / gamma * (1.0 - B * (N - m + 0.5) / N);
  return w2 >= 0.0 ? std::sqrt(w2) : -std::sqrt(-w2);
}

double phonon_perp_sw_A() { return 93.0 * zeta5() / 8.0; }

double phonon_perp_sw_B_quoted() { return 2.055; }

double fit_perp_sw_B(const ModeBasis& basis, double nu_perp, int count) {
  require(basis.kind == ModeKind::PhononY || basis.kind == ModeKind::PhononZ,
          "fit_perp_sw_B: transverse basis required");
  const int N = int(basis.values.size());
  require(count >= 2 && count <= N, "fit_perp_sw_B: bad count");
  const double Aa = phonon_perp_sw_A() * transverse_alpha(basis.kind) / basis.gamma;
  // 1 - (nu^2 - w^2)/(A alpha/gamma) = B (mbar + 1/2)/N; the lowest omega has mbar = 0.
  double sxy = 0.0, sxx = 0.0;
  for (int k = 0; k < count; ++k) {
    const double xk = (k + 0.5) / N;
    const double yk = 1.0 - (nu_perp * nu_perp - basis.omega_sq[k]) / Aa;
    sxy += xk * yk;
    sxx += xk * xk;
  }
  return sxy / sxx;
}

double coupling_prefactor(int N, int m) {
  return std::pow(27.0 / (62.0 * zeta5()), 0.25) * std::sqrt(double(N) / m);
}

Eigen::MatrixXd coupling_kernel(const TrappedCrystal& c, const Eigen::VectorXd& cm) {
  const int N = c.N;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      if (i == j) continue;
      const double d = c.x[i] - c.x[j];
      const double a2 = d * d;
      A(i, j) = d / (a2 * a2 * std::abs(d)) * (cm[i] - cm[j]);
    }
  return A;
}

Eigen::MatrixXd coupling_slice(const TrappedCrystal& c, const ModeBasis& exc, const ModeBasis& phon,
                               int m) {
  require(m >= 1 && m <= c.N, "coupling_slice: m in 1..N");
  const Eigen::MatrixXd A = coupling_kernel(c, phon.modes.col(m - 1));
  return coupling_prefactor(c.N, m) * exc.modes.transpose() * A * exc.modes;
}

double coupling_element(const TrappedCrystal& c, const ModeBasis& exc, const ModeBasis& phon,
                        int m, int n, int np) {
  require(m >= 1 && m <= c.N && n >= 1 && n <= c.N && np >= 1 && np <= c.N,
          "coupling_element: indices in 1..N");
  const Eigen::MatrixXd A = coupling_kernel(c, phon.modes.col(m - 1));
  const Eigen::VectorXd Cn = exc.modes.col(n - 1);
  const Eigen::VectorXd Cnp = exc.modes.col(np - 1);
  return coupling_prefactor(c.N, m) * Cnp.dot(A * Cn);
}

double LindemannProfile::center() const {
  const Eigen::Index n = F.size();
  if (n % 2) return F[n / 2];
  return 0.5 * (F[n / 2 - 1] + F[n / 2]);
}

LindemannProfile lindemann(const TrappedCrystal& c, const ModeBasis& lon, double tau,
                           bool soundwave) {
  require(lon.kind == ModeKind::PhononLong, "lindemann: longitudinal basis required");
  require(lon.unstable == 0, "lindemann: unstable longitudinal modes");
  require(tau >= 0.0, "lindemann: tau >= 0");
  const int N = c.N;
  const double aD = debye_f_1d();
  // Weight of mode m: coth(s/2 tau) / (2 s) with s = sqrt(gamma) omega.
  Eigen::VectorXd wgt(N);
  for (int m = 0; m < N; ++m) {
    const double s = soundwave ? aD * (m + 1) / N : std::sqrt(lon.gamma * lon.omega_sq[m]);
    const double coth = tau > 0.0 ? 1.0 / std::tanh(s / (2.0 * tau)) : 1.0;
    wgt[m] = coth / (2.0 * s);
  }
  LindemannProfile out;
  out.tau = tau;
  out.soundwave = soundwave;
  out.xi.resize(N - 1);
  out.F.resize(N - 1);
  for (int i = 0; i + 1 < N; ++i) {
    const Eigen::VectorXd dc = lon.modes.row(i + 1) - lon.modes.row(i);
    const double var = (dc.array().square() * wgt.array()).sum();
    // Local density from the actual spacing, so the edge thinning is exact.
    const double gap = c.x[i + 1] - c.x[i];
    out.xi[i] = (c.x[i + 1] + c.x[i]) / c.L;
    out.F[i] = std::sqrt(var) / gap;
  }
  return out;
}

double lindemann_homogeneous(double tau) {
  require(tau >= 0.0, "lindemann_homogeneous: tau >= 0");
  auto f = [tau](double k) {
    if (k <= 0.0) return 0.0;
    const double fk = phonon_f_1d(k);
    const double s = std::sin(0.5 * k);
    const double coth = tau > 0.0 ? 1.0 / std::tanh(fk / (2.0 * tau)) : 1.0;
    return s * s / fk * coth;
  };
  const double I = integrate(f, 0.0, kPi, 1e-13, 1e-12).value;
  return std::sqrt(2.0 / kPi * I);
}

double lindemann_high_tau_coefficient(double tau_lo, double tau_hi, int points) {
  require(tau_lo > 0.0 && tau_hi > tau_lo && points >= 2, "lindemann fit: bad range");
  double sxy = 0.0, sxx = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = tau_lo * std::pow(tau_hi / tau_lo, double(k) / (points - 1));
    const double x = std::sqrt(t);
    sxy += x * lindemann_homogeneous(t);
    sxx += x * x;
  }
  return sxy / sxx;
}

StabilityReport stability_report(double gamma, double tau, double nu_perp,
                                 const TrappedCrystal* crystal) {
  require(gamma > 0.0 && tau >= 0.0 && nu_perp >= 0.0, "stability_report: bad inputs");
  StabilityReport r;
  r.gamma = gamma;
  r.tau = tau;
  r.nu_perp = nu_perp;
  const double g4 = std::pow(gamma, 0.25);
  if (crystal) {
    const ModeBasis lon = phonon_modes_trapped(*crystal, ModeKind::PhononLong, gamma);
    const LindemannProfile lp = lindemann(*crystal, lon, tau, false);
    r.lindemann_xi = lp.xi;
    r.lindemann_profile = lp.F / g4;
    r.lindemann_center = lp.center() / g4;
    for (Eigen::Index i = 0; i < r.lindemann_profile.size(); ++i)
      if (r.lindemann_profile[i] > kLindemannThreshold) ++r.lindemann_violations;
  } else {
    r.lindemann_center = lindemann_homogeneous(tau) / g4;
    if (r.lindemann_center > kLindemannThreshold) r.lindemann_violations = 1;
  }
  r.lindemann_ok = r.lindemann_violations == 0;

  r.zigzag_product = std::sqrt(gamma) * nu_perp;
  r.zigzag_ok = r.zigzag_product > zigzag_constant();
  r.zigzag_ok_quoted = r.zigzag_product > kZigzagQuoted;
  r.zigzag_margin = r.zigzag_product / zigzag_constant() - 1.0;

  const double kT = tau / std::sqrt(gamma);
  r.quantum_ok = 1.0 / gamma < 1.0;
  r.thermal_ok = kLindemannThreshold * kT < 1.0;
  r.inequality_ok = r.quantum_ok && r.thermal_ok && r.zigzag_ok_quoted;
  r.inequality_ok_derived = r.quantum_ok && r.thermal_ok && r.zigzag_ok;
  r.temperature_ok = tau <= 5.0;

  r.tunneling_exponent =
      kTunnelingConstant * std::pow(gamma * gamma * gamma * nu_perp / 8.0, 0.2);
  r.tunneling_rate = std::exp(-r.tunneling_exponent);
  // nu_perp > Z / sqrt(gamma) gives (gamma^3 nu_perp / 8)^{1/5} > (Z/8)^{1/5} sqrt(gamma).
  r.tunneling_bound =
      std::exp(-kTunnelingConstant * std::pow(zigzag_constant() / 8.0, 0.2) * std::sqrt(gamma));
  return r;
}

}  // namespace mdc
