#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace mdc {

// Infinite crystals in units a0 = 1, U_dd = 1. Chain along x in 1D; triangular
// lattice a1 = (1,0), a2 = (1/2, sqrt(3)/2) in 2D.

// 1D closed forms through Li_n(e^{iq}).
double band_1d(double k);             // J(k) = 2 Re Li3
double band_1d_slope(double k);       // J'(k)
double phonon_f_1d(double q);         // f(q), f^2 = 24 (zeta5 - Re Li5)
double phonon_f_1d_slope(double q);   // f'(q)
double coupling_g_1d(double q);       // g(q) = 3 sqrt(2) Im Li4
double band_width_1d();               // J(0) - J(pi) = 7 zeta(3) / 2
double debye_f_1d();                  // f(pi) = sqrt(93 zeta(5) / 2)

// Folds k into [-pi, pi); sets folded when k was outside.
double fold_bz_1d(double k, bool* folded = nullptr);

// Normalised BZ mean of J over an n-point Gamma-centred grid; equals
// 2 zeta(3)/n^3 for the infinite chain (aliasing of the n-th neighbours).
double band_grid_mean_1d(int n);

// Windowed real-space sum over the triangular lattice. Sites carry a smooth
// weight w = erfc((r - R)/s)/2; the complement (1 - w) is added back as a
// continuum integral at density rho = 2/sqrt(3).
struct Lattice2D {
  double R = 0.0, s = 0.0, rho = 0.0;
  Eigen::Matrix2Xd r;
  Eigen::VectorXd dist, w;
  Eigen::VectorXd w_r3, w_r5;  // w/r^3 and w/r^5
};

Lattice2D triangular_lattice(double R = 40.0, double s = 3.0);
const Lattice2D& default_lattice();

Eigen::Vector2d reciprocal_b1();
Eigen::Vector2d reciprocal_b2();
Eigen::Vector2d point_K();  // (4 pi / 3, 0)
Eigen::Vector2d point_M();  // (pi, pi / sqrt 3)
Eigen::Vector2d fold_bz_2d(const Eigen::Vector2d& k, bool* folded = nullptr);

double band_2d(const Lattice2D& lat, const Eigen::Vector2d& k);
// D(q) = 3 sum (5 rr - I)(1 - cos q.r)/r^5; its eigenvalues are f_lambda^2.
Eigen::Matrix2d dynamical_matrix_2d(const Lattice2D& lat, const Eigen::Vector2d& q);
// G(q) = (3/sqrt 2) sum r/r^5 sin(q.r); g_lambda(q) = G(q).e_lambda.
Eigen::Vector2d coupling_vector_2d(const Lattice2D& lat, const Eigen::Vector2d& q);

// Plain sums over an explicit set of sites, no window or tail. Used as a
// second code path (e.g. a chain embedded in the plane).
Eigen::Matrix2d dynamical_matrix_sites(const Eigen::Matrix2Xd& r, const Eigen::Vector2d& q);
double band_sites(const Eigen::Matrix2Xd& r, const Eigen::Vector2d& k);

struct BandSample {
  Eigen::Vector2d k = Eigen::Vector2d::Zero();
  double J = 0.0;
  double E = 0.0;  // omega_eg + eps J(0) + kappa J(k), omega_eg in U_dd
};

BandSample exciton_band(int dim, const Eigen::Vector2d& k, double kappa, double epsilon,
                        double omega_eg = 0.0, bool* folded = nullptr);

struct PhononMode {
  Eigen::Vector2d q = Eigen::Vector2d::Zero();
  int branch = 0;
  double f = 0.0;  // hbar omega = U_dd f / sqrt(gamma)
  Eigen::Vector2d polarization = Eigen::Vector2d::UnitX();
};

// One mode in 1D, two in 2D (ascending f). prev, when given, resolves
// degenerate polarizations by overlap.
std::vector<PhononMode> phonon_spectrum_hom(int dim, const Eigen::Vector2d& q,
                                            const std::vector<PhononMode>* prev = nullptr);

// Maximum of the upper 2D branch over the Brillouin zone.
double phonon_fmax_2d(const Lattice2D& lat, int grid = 48);

// omega_perp^2 = nu_perp^2 - alpha f^2 / (4 gamma), alpha_y = 1, alpha_z = 3.
// Frequencies in U_dd/hbar; a negative square signals the zig-zag instability.
struct TransverseFreq {
  double omega_sq_y = 0.0, omega_sq_z = 0.0;
  bool stable() const { return omega_sq_y >= 0 && omega_sq_z >= 0; }
};
TransverseFreq transverse_spectrum_hom(double q, double nu_perp, double gamma);
// nu_perp sqrt(gamma) at which the z branch touches zero at q = pi.
double zigzag_constant();

// M(q,k) sqrt(N): the 1/sqrt(N) normalisation is left to the caller. Units U_dd.
struct CouplingElement {
  Eigen::Vector2d q = Eigen::Vector2d::Zero(), k = Eigen::Vector2d::Zero();
  int branch = 0;
  double g_q = 0.0;
  std::complex<double> M_sqrtN = 0.0;
};

CouplingElement coupling_matrix_hom(int dim, const Eigen::Vector2d& q, const Eigen::Vector2d& k,
                                    int branch, double kappa, double epsilon, double gamma);

}  // namespace mdc
