#include "mdc/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mdc/error.hpp"
#include "mdc/homogeneous.hpp"
#include "mdc/parallel.hpp"
#include "mdc/rotor.hpp"
#include "mdc/specfun.hpp"

namespace mdc {

namespace {

constexpr double kPi = std::numbers::pi;

double coth_weight(double s, double tau) { return tau > 0.0 ? 1.0 / std::tanh(s / (2.0 * tau)) : 1.0; }

Eigen::VectorXd normalized(const Eigen::VectorXd& u) {
  const double n = u.norm();
  require(n > 0.0, "cavity mode vanishes on every site");
  return u / n;
}

}  // namespace

double CavityParams::u(double x) const {
  switch (shape) {
    case ModeShape::Flat: return 1.0;
    case ModeShape::Cosine: return std::cos(kPi * x / lambda_c);
    case ModeShape::Tabulated: {
      if (x <= table_x.front()) return table_u.front();
      if (x >= table_x.back()) return table_u.back();
      const auto it = std::upper_bound(table_x.begin(), table_x.end(), x);
      const std::size_t k = std::size_t(it - table_x.begin());
      const double t = (x - table_x[k - 1]) / (table_x[k] - table_x[k - 1]);
      return (1.0 - t) * table_u[k - 1] + t * table_u[k];
    }
  }
  return 0.0;
}

double CavityParams::g1() const { return g_ref / (d * 1e6); }

void validate(const CavityParams& cav) {
  require(cav.g_ref > 0.0, "cavity: g_ref must be positive");
  require(cav.d > 0.0, "cavity: d must be positive");
  require(cav.Gamma_c >= 0.0, "cavity: Gamma_c must be non-negative");
  require(cav.lambda_c > 0.0, "cavity: lambda_c must be positive");
  if (cav.shape == ModeShape::Tabulated) {
    require(cav.table_x.size() >= 2 && cav.table_x.size() == cav.table_u.size(),
            "cavity: tabulated mode needs matching x and u samples");
    require(std::is_sorted(cav.table_x.begin(), cav.table_x.end()),
            "cavity: tabulated x must ascend");
    for (double v : cav.table_u) require(v >= 0.0 && v <= 1.0, "cavity: u must lie in [0, 1]");
  }
}

CollectiveCoupling collective_coupling(const CavityParams& cav, const Eigen::VectorXd& x) {
  validate(cav);
  require(x.size() >= 1, "collective_coupling: no molecules");
  CollectiveCoupling out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double u = cav.u(x[i]);
    out.N_eff += u * u;
  }
  out.g_N = cav.g1() * std::sqrt(out.N_eff);
  out.length_ratio = (x.maxCoeff() - x.minCoeff()) / cav.lambda_c;
  out.length_ok = out.length_ratio <= 0.5;
  return out;
}

Eigen::VectorXd mode_samples(const CavityParams& cav, const TrappedCrystal& c, double a0) {
  Eigen::VectorXd u(c.N);
  for (int i = 0; i < c.N; ++i) u[i] = cav.u(c.x[i] * a0);
  return u;
}

double exciton_variance(const ModeBasis& exc, const Eigen::VectorXd& u) {
  const Eigen::VectorXd z = exc.modes.transpose() * normalized(u);
  const Eigen::ArrayXd w = z.array().square();
  const double mean = (w * exc.values.array()).sum();
  const double var = (w * (exc.values.array() - mean).square()).sum();
  return std::max(0.0, var);
}

double phonon_integral(const TrappedCrystal& c, const ModeBasis& lon, const Eigen::VectorXd& u,
                       double tau, int* m_converged) {
  require(lon.kind == ModeKind::PhononLong, "phonon_integral: longitudinal basis required");
  require(tau >= 0.0, "phonon_integral: tau >= 0");
  const Eigen::VectorXd psi = normalized(u);
  const int N = c.N;
  Eigen::VectorXd term(N);
  parallel_for(std::size_t(N), [&](std::size_t k) {
    const int m = int(k) + 1;
    const Eigen::VectorXd v = coupling_kernel(c, lon.modes.col(k)) * psi;
    const double pref = coupling_prefactor(N, m);
    const double s = std::sqrt(lon.gamma * std::max(0.0, lon.omega_sq[k]));
    term[k] = coth_weight(s, tau) * pref * pref * v.squaredNorm();
  });
  const double total = term.sum();
  if (m_converged) {
    double tail = total;
    *m_converged = N;
    for (int k = 0; k < N; ++k) {
      tail -= term[k];
      if (std::abs(tail) < 1e-3 * total) {
        *m_converged = k + 1;
        break;
      }
    }
  }
  return total;
}

double phonon_integral_pairwise(const TrappedCrystal& c, const ModeBasis& exc,
                                const ModeBasis& lon, const Eigen::VectorXd& u, double tau) {
  const Eigen::VectorXd z = exc.modes.transpose() * normalized(u);
  const int N = c.N;
  Eigen::VectorXd term(N);
  parallel_for(std::size_t(N), [&](std::size_t k) {
    const Eigen::MatrixXd M = coupling_slice(c, exc, lon, int(k) + 1);
    const double s = std::sqrt(lon.gamma * std::max(0.0, lon.omega_sq[k]));
    term[k] = coth_weight(s, tau) * z.dot(M.array().square().matrix() * z);
  });
  return term.sum();
}

InhomogeneousResult inhomogeneous_W(const TrappedCrystal& c, const ModeBasis& exc,
                                    const ModeBasis& lon, const Eigen::VectorXd& u, double kappa,
                                    double gamma, double tau) {
  require(gamma > 0.0, "inhomogeneous_W: gamma > 0");
  InhomogeneousResult r;
  r.z = exc.modes.transpose() * normalized(u);
  r.I_exc = exciton_variance(exc, u);
  r.I_phon = phonon_integral(c, lon, u, tau, &r.m_converged);
  r.W = std::abs(kappa) * std::sqrt(r.I_exc + r.I_phon / std::sqrt(gamma));
  return r;
}

double fidelity_at(double g_N, double W, double Gamma_c, double Delta) {
  require(g_N > 0.0 && Delta > 0.0, "fidelity_at: g_N and Delta must be positive");
  const double a = kPi * W / (4.0 * Delta);
  return 1.0 - a * a - kPi * Gamma_c * Delta / (4.0 * g_N * g_N);
}

FidelityResult gate_fidelity(double g_N, double W, double Gamma_c) {
  require(g_N > 0.0 && W >= 0.0 && Gamma_c >= 0.0, "gate_fidelity: bad inputs");
  FidelityResult r;
  r.g_N = g_N;
  r.W = W;
  r.Gamma_c = Gamma_c;
  if (W == 0.0) return r;
  if (Gamma_c == 0.0) {
    r.Delta_star = r.Delta_opt = std::numeric_limits<double>::infinity();
    r.T_G = r.T_G_opt = std::numeric_limits<double>::infinity();
    return r;
  }
  // The optimum and F* are invariant under a common rescaling of the rates;
  // T_G needs angular units.
  r.Delta_star = std::cbrt(kPi * g_N * g_N * W * W / Gamma_c);
  r.F_star = 1.0 - 0.75 * std::pow(kPi / 2.0, 4.0 / 3.0) *
                       std::pow(Gamma_c * W / (g_N * g_N), 2.0 / 3.0);
  const double gw = 2.0 * kPi * g_N;
  r.T_G = kPi * (2.0 * kPi * r.Delta_star) / (2.0 * gw * gw);
  r.Delta_opt = r.Delta_star / std::cbrt(2.0);
  r.T_G_opt = kPi * (2.0 * kPi * r.Delta_opt) / (2.0 * gw * gw);
  r.failure = r.F_star < 0.0;
  return r;
}

CaseStudyReport case_study_cabr(const CaseStudyInputs& in) {
  validate(in.mol);
  CaseStudyReport r;
  r.in = in;

  const QubitPairParams pair =
      qubit_pair_params({in.g_N_rot, in.g_M}, {in.e_N_rot, in.e_M}, in.E_b);
  r.mu_g_computed = pair.mu_g * in.mol.mu0;
  r.kappa = pair.kappa;
  r.epsilon = pair.epsilon;

  r.scales = derive_scales(in.mol, in.mu_g_debye, in.a0, 0.0, 1);
  r.temperature = r.scales.to_kelvin(in.tau);
  r.scales.temperature = r.temperature;
  r.scales.tau = in.tau;
  const double gamma = r.scales.gamma;
  const double g4 = std::pow(gamma, 0.25);

  // Largest tau with F_h(tau) / gamma^{1/4} <= 0.42.
  double lo = 0.0, hi = 1.0;
  if (lindemann_homogeneous(0.0) / g4 > kLindemannThreshold) {
    hi = 0.0;
  } else {
    while (lindemann_homogeneous(hi) / g4 < kLindemannThreshold && hi < 1e6) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (lindemann_homogeneous(mid) / g4 < kLindemannThreshold ? lo : hi) = mid;
    }
  }
  r.T_lindemann_max = r.scales.to_kelvin(hi);
  r.T_bound = r.scales.to_kelvin(5.0);
  r.nu_perp_min_quoted = kZigzagQuoted / std::sqrt(gamma) * r.scales.U_dd_hz();
  r.nu_perp_min_derived = zigzag_constant() / std::sqrt(gamma) * r.scales.U_dd_hz();
  r.stability = stability_report(gamma, in.tau, in.nu_perp_hz / r.scales.U_dd_hz());

  // Full crystal: analytic site positions suffice for the mode overlap.
  const DensityProfile prof = density_profile(in.N, unit_density_stiffness(in.N));
  Eigen::VectorXd x(in.N);
  for (int i = 0; i < in.N / 2; ++i) {
    const double xi = prof.inverse(i + 0.5) * in.a0;
    x[i] = xi;
    x[in.N - 1 - i] = -xi;
  }
  if (in.N % 2) x[in.N / 2] = 0.0;
  r.length = prof.L * in.a0;
  r.coupling = collective_coupling(in.cavity, x);

  // Dense surrogate with the same length-to-wavelength ratio.
  const TrappedCrystal sur = equilibrium_positions(in.N_surrogate);
  const ModeBasis exc = exciton_modes_trapped(sur);
  const ModeBasis lon = phonon_modes_trapped(sur, ModeKind::PhononLong, gamma);
  const double a0_eff = r.length / sur.L;
  const Eigen::VectorXd u = mode_samples(in.cavity, sur, a0_eff);
  r.inhom = inhomogeneous_W(sur, exc, lon, u, r.kappa, gamma, in.tau);
  r.W_hz = r.inhom.W * r.scales.U_dd_hz();
  r.fidelity = gate_fidelity(r.coupling.g_N, r.W_hz, in.cavity.Gamma_c);

  r.scales_alt = derive_scales(in.mol, in.mu_g_debye, in.a0_alt, 0.0, 1);
  const double gamma_alt = r.scales_alt.gamma;
  r.scales_alt.tau = in.tau;
  r.scales_alt.temperature = r.scales_alt.to_kelvin(in.tau);
  const Eigen::VectorXd u_alt = mode_samples(in.cavity, sur, a0_eff * in.a0_alt / in.a0);
  const ModeBasis lon_alt = phonon_modes_trapped(sur, ModeKind::PhononLong, gamma_alt);
  const double W_alt = inhomogeneous_W(sur, exc, lon_alt, u_alt, r.kappa, gamma_alt, in.tau).W;
  r.W_alt_hz = W_alt * r.scales_alt.U_dd_hz();
  r.fidelity_alt = gate_fidelity(in.g_N_alt_hz, r.W_alt_hz, in.cavity.Gamma_c);
  return r;
}

}  // namespace mdc
