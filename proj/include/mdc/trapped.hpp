#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mdc {

// Harmonically confined chain. Lengths in a0, energies in U_dd, mass gamma.
// The potential is sum_i K x_i^2 / 2 + sum_{i<j} 1/|x_i - x_j|^3 with
// K = gamma nu_tilde^2, nu_tilde = hbar nu / U_dd.

// K for which the analytic centre density is exactly 1/a0.
double unit_density_stiffness(int N);

struct TrappedCrystal {
  int N = 0;
  double K = 0.0;
  Eigen::VectorXd x;  // ascending, symmetric about 0
  double L = 0.0;     // analytic length Lambda N / n0
  double n0 = 0.0;    // analytic centre density
  double residual = 0.0;
  int iterations = 0;
  double nu_tilde(double gamma) const;
};

// Newton on the force with the analytic Hessian K + 12 Laplacian, seeded by the
// inverse analytic cumulative density. Throws ConvergenceError when the max
// force stays above 1e-10 times max(1, largest trap force).
TrappedCrystal equilibrium_positions(int N, double K);
TrappedCrystal equilibrium_positions(int N);  // unit centre density
TrappedCrystal equilibrium_positions(int N, double nu_tilde, double gamma);

// Local-density profile n(x) = n0 (1 - 4x^2/L^2)^{1/3}.
struct DensityProfile {
  int N = 0;
  double n0 = 0.0, L = 0.0;
  double density(double x) const;
  double cumulative(double x) const;    // molecules left of x
  double inverse(double count) const;   // x with cumulative(x) = count
};

DensityProfile density_profile(int N, double K);

// Centre density [1/m] for N molecules of mass [kg] in a trap of angular
// frequency nu [rad/s] with C3 = mu^2 / (4 pi eps0) [J m^3].
double center_density_si(int N, double nu, double mass, double C3);

// Cell boundaries (midpoints between neighbours) carry integer counts; the
// first number is the worst analytic count error there, in units of cells.
// The second compares each site with the analytic position of count i + 1/2,
// in units of the local spacing.
struct ProfileDeviation {
  double boundary_cells = 0.0;
  double site_spacings = 0.0;
  int worst_site = 0;
};

ProfileDeviation compare_to_profile(const TrappedCrystal& c);

enum class ModeKind { Exciton, PhononLong, PhononY, PhononZ };

// Columns of `modes` are orthonormal mode functions. Exciton values are
// eigenvalues of [1/|x_i - x_j|^3] in kappa U_dd, descending, so column 0 is
// the most symmetric mode for kappa > 0. Phonon values are omega in U_dd/hbar,
// ascending; an unstable mode keeps its negative omega^2 in `omega_sq` and
// reports omega = -sqrt|omega^2|.
struct ModeBasis {
  ModeKind kind = ModeKind::Exciton;
  Eigen::VectorXd values;
  Eigen::VectorXd omega_sq;
  Eigen::MatrixXd modes;
  double gamma = 0.0;
  int unstable = 0;
};

ModeBasis exciton_modes_trapped(const TrappedCrystal& c);

// Transverse branches: y has alpha = 1, z has alpha = 3 (dipoles along z).
ModeBasis phonon_modes_trapped(const TrappedCrystal& c, ModeKind which, double gamma,
                               double nu_perp = 0.0);

double transverse_alpha(ModeKind which);

// Asymptotic overlays. n and m are 1-based; for excitons n = 1 is the top of
// the band, for longitudinal phonons m = 1 is the centre-of-mass mode, for
// transverse phonons m = 1 is the uniform (highest) mode.
double exciton_lw(int n, int N);  // E(n) / kappa
double exciton_sw(int n, int N);
double exciton_sw_min();          // -3 zeta(3) / 2
double exciton_lw_width_sq(int n, int N);  // sigma_n^2
double phonon_long_lw(int m, double nu_tilde);
double phonon_long_sw(int m, int N, double nu_tilde);
double phonon_debye_trapped(int N, double nu_tilde);  // nu N Lambda sqrt(93 zeta5 / 64 zeta3)
double phonon_perp_lw(int m, int N, double nu_perp, double gamma, double alpha);
double phonon_perp_sw(int m, int N, double nu_perp, double gamma, double alpha, double B);
double phonon_perp_sw_A();          // 93 zeta(5) / 8
double phonon_perp_sw_B_quoted();   // sqrt(5 zeta3 32 / (31 zeta5)) as printed, about 2.055

// Least-squares B of the transverse short-wavelength line from the `count`
// lowest modes of a dense solve.
double fit_perp_sw_B(const ModeBasis& basis, double nu_perp, int count);

// (27 / (62 zeta5))^{1/4} sqrt(N/m).
double coupling_prefactor(int N, int m);

// A_m(i,j) = (x_i - x_j)/|x_i - x_j|^5 (c_m(i) - c_m(j)), symmetric, zero diagonal.
Eigen::MatrixXd coupling_kernel(const TrappedCrystal& c, const Eigen::VectorXd& phonon_mode);

// Normalized coupling slice M(m, n, n') over all n, n' for 1-based phonon m.
// The physical matrix element is -kappa U_dd gamma^{-1/4} times this.
Eigen::MatrixXd coupling_slice(const TrappedCrystal& c, const ModeBasis& exc,
                               const ModeBasis& phon, int m);

double coupling_element(const TrappedCrystal& c, const ModeBasis& exc, const ModeBasis& phon,
                        int m, int n, int np);

// Position-dependent Lindemann function F(xi, tau) on neighbour pairs, so
// Gamma_L = F / gamma^{1/4}. Exact mode frequencies, or omega = omega_D m / N.
struct LindemannProfile {
  double tau = 0.0;
  bool soundwave = false;
  Eigen::VectorXd xi;  // 2 x / L at pair midpoints
  Eigen::VectorXd F;
  double center() const;
};

LindemannProfile lindemann(const TrappedCrystal& c, const ModeBasis& longitudinal, double tau,
                           bool soundwave);

// Homogeneous limit F_h(tau).
double lindemann_homogeneous(double tau);

// Least-squares c in F_h(tau) = c sqrt(tau) over a tau grid.
double lindemann_high_tau_coefficient(double tau_lo, double tau_hi, int points);

struct StabilityReport {
  double gamma = 0.0, tau = 0.0, nu_perp = 0.0;
  double lindemann_center = 0.0;  // Gamma_L(0, T)
  Eigen::VectorXd lindemann_xi, lindemann_profile;
  int lindemann_violations = 0;   // pairs above the 0.42 threshold
  bool lindemann_ok = false;
  double zigzag_product = 0.0;    // sqrt(gamma) nu_perp
  bool zigzag_ok = false;         // against sqrt(279 zeta5 / 8)
  bool zigzag_ok_quoted = false;  // against 6.08
  double zigzag_margin = 0.0;     // product / sqrt(279 zeta5 / 8) - 1
  bool quantum_ok = false;        // 1/gamma < 1
  bool thermal_ok = false;        // 0.42 kB T < U_dd
  bool inequality_ok = false;     // quoted constants
  bool inequality_ok_derived = false;
  bool temperature_ok = false;    // kB T <= 5 U_dd / sqrt(gamma)
  double tunneling_exponent = 0.0;
  double tunneling_rate = 0.0;    // units of omega_D
  double tunneling_bound = 0.0;   // exp(-c sqrt(gamma)) implied by the zigzag condition
};

inline constexpr double kLindemannThreshold = 0.42;
inline constexpr double kZigzagQuoted = 6.08;
inline constexpr double kTunnelingConstant = 5.8;

// Without a crystal the centre value uses the homogeneous F_h.
StabilityReport stability_report(double gamma, double tau, double nu_perp,
                                 const TrappedCrystal* crystal = nullptr);

}  // namespace mdc
