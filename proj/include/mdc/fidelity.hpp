#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mdc/scales.hpp"
#include "mdc/trapped.hpp"

namespace mdc {

// Rates and couplings at the interface are ordinary frequencies [Hz]; the
// formulas run in angular units internally.

enum class ModeShape { Cosine, Flat, Tabulated };

struct CavityParams {
  double g_ref = 40e3;      // Hz, single-molecule coupling at d = 1 um
  double d = 0.5e-6;        // m
  double Gamma_c = 10e3;    // Hz
  double lambda_c = 0.03;   // m
  ModeShape shape = ModeShape::Cosine;
  std::vector<double> table_x, table_u;  // m and mode amplitude, ascending x
  double u(double x) const;              // x measured from the trap centre [m]
  double g1() const;                     // g_ref / d[um]
};

void validate(const CavityParams& cav);

struct CollectiveCoupling {
  double g_N = 0.0;  // Hz
  double N_eff = 0.0;
  double length_ratio = 0.0;  // L / lambda_c
  bool length_ok = true;      // L <= lambda_c / 2
};

// Positions in metres.
CollectiveCoupling collective_coupling(const CavityParams& cav, const Eigen::VectorXd& x);

// Mode amplitudes u(x_i) for a crystal whose lengths are in units of a0 [m].
Eigen::VectorXd mode_samples(const CavityParams& cav, const TrappedCrystal& c, double a0);

struct InhomogeneousResult {
  double I_exc = 0.0;
  double I_phon = 0.0;
  double W = 0.0;  // units of U_dd / hbar
  int m_converged = 0;  // first m after which the remaining I_phon tail is below 0.1%
  Eigen::VectorXd z;    // exciton weights of the normalized mode
};

// Variance of the exciton spectrum under weights z_n^2, with z the projection
// of the normalized mode u on the exciton modes.
double exciton_variance(const ModeBasis& exc, const Eigen::VectorXd& u);

// Sum_m (2N(omega_m) + 1) Sum_n |Sum_n' M(m,n,n') z_n'|^2, which equals
// prefactor^2 |A_m psi|^2 with psi the normalized mode on the sites.
double phonon_integral(const TrappedCrystal& c, const ModeBasis& lon, const Eigen::VectorXd& u,
                       double tau, int* m_converged = nullptr);

// The same sum with the weights contracted as Sum_{n,n'} z_n z_n' M^2.
double phonon_integral_pairwise(const TrappedCrystal& c, const ModeBasis& exc,
                                const ModeBasis& lon, const Eigen::VectorXd& u, double tau);

InhomogeneousResult inhomogeneous_W(const TrappedCrystal& c, const ModeBasis& exc,
                                    const ModeBasis& lon, const Eigen::VectorXd& u, double kappa,
                                    double gamma, double tau);

struct FidelityResult {
  double g_N = 0.0, W = 0.0, Gamma_c = 0.0;  // Hz
  double Delta_star = 0.0;                   // Hz, (pi g_N^2 W^2 / Gamma_c)^{1/3}
  double F_star = 1.0;                       // value at the stationary point
  double T_G = 0.0;  // s, at Delta_star
  // Stationary point of fidelity_at, 2^{-1/3} Delta_star, and its gate time.
  double Delta_opt = 0.0;
  double T_G_opt = 0.0;
  bool failure = false;  // F_star < 0
};

// Fidelity at a user detuning [Hz]: 1 - (pi W/4 Delta)^2 - pi Gamma_c Delta / 4 g_N^2.
double fidelity_at(double g_N, double W, double Gamma_c, double Delta);

// Optimum over the detuning. W = 0 gives Delta* = 0 and F* = 1; use fidelity_at then.
FidelityResult gate_fidelity(double g_N, double W, double Gamma_c);

struct CaseStudyInputs {
  MoleculeParams mol{4.3, 2.8e9, 120.0, 0.0};
  int g_N_rot = 1, g_M = 0, e_N_rot = 2, e_M = 0;
  double E_b = 3.05;
  double mu_g_debye = 0.7;  // quoted induced dipole used for the energy scale
  double a0 = 70e-9;
  double tau = 1.0;         // kB T = U_dd / sqrt(gamma)
  int N = 10000;
  int N_surrogate = 800;    // dense crystal carrying I_exc and I_phon
  double nu_perp_hz = 400e3;  // above the zigzag minimum at the computed gamma
  CavityParams cavity{};
  // Second, optimistic parameter set.
  double a0_alt = 100e-9;
  double g_N_alt_hz = 25e6;
};

struct CaseStudyReport {
  CaseStudyInputs in;
  // rotor
  double mu_g_computed = 0.0;  // Debye
  double kappa = 0.0, epsilon = 0.0;
  // scales
  CrystalScales scales;
  double temperature = 0.0;      // K
  double T_lindemann_max = 0.0;  // K, where Gamma_L(0) reaches 0.42
  double T_bound = 0.0;          // K, kB T = 5 U_dd / sqrt(gamma)
  double nu_perp_min_quoted = 0.0, nu_perp_min_derived = 0.0;  // Hz
  StabilityReport stability;
  // crystal and cavity
  double length = 0.0;  // m, full crystal
  CollectiveCoupling coupling;
  InhomogeneousResult inhom;
  double W_hz = 0.0;
  FidelityResult fidelity;
  // second set
  CrystalScales scales_alt;
  double W_alt_hz = 0.0;
  FidelityResult fidelity_alt;
};

CaseStudyReport case_study_cabr(const CaseStudyInputs& in = {});

}  // namespace mdc
