#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

namespace mdc {

// Decay of the k = 0 exciton into phonons. Energies in U_dd, rates in U_dd/hbar,
// times in hbar/U_dd, tau = sqrt(gamma) kB T / U_dd.

struct IntegralI {
  double vacuum = 0.0;   // T = 0 part, the +1 in coth
  double thermal = 0.0;  // 2 N(omega) part
  double total() const { return vacuum + thermal; }
};

// BZ average of |g|^2/f coth(f/2tau), summed over branches. 1D by adaptive
// quadrature, 2D on a grid x grid Gamma-centred cell with Gamma excluded.
IntegralI integral_I(int dim, double tau, int grid2d = 48);

// W = |eps + kappa| gamma^{-1/4} sqrt(I_d(tau)).
double quadratic_rate(int dim, double kappa, double epsilon, double gamma, double tau);

// Sum_q |M(q,0)|^2 (2N+1) over an n-point 1D grid without q = 0.
double quadratic_rate_sq_grid(double kappa, double epsilon, double gamma, double tau, int n);

struct Resonance {
  double q0 = 0.0;
  double C = 0.0;  // 2 g^2 / (f |J' + f'/(sqrt(gamma)|kappa|)|)
  double occupation = 0.0;
  double rate = 0.0;
};

struct GoldenRuleResult {
  double Gamma = 0.0;           // resonant + kink
  double Gamma_resonant = 0.0;  // phonon emission (kappa > 0) or absorption (kappa < 0) at q0 != 0
  double Gamma_kink = 0.0;      // thermal q -> 0 contribution, (eps+kappa)^2 sqrt(3 zeta3/4) tau
  bool emission = false;
  std::vector<Resonance> roots;  // ascending q0
  double q0 = 0.0;               // smallest root, 0 when none
  std::string note;
};

GoldenRuleResult golden_rule_rate(int dim, double kappa, double epsilon, double gamma, double tau);

struct PopulationCurve {
  Eigen::VectorXd t, Pe;
  bool perturbative = true;  // Pe stayed above 0.9
};

// Second-order population of the k = 0 exciton on an n_grid-point BZ grid
// (1D) or n_grid x n_grid cell (2D).
PopulationCurve excited_population(const Eigen::VectorXd& t, int dim, double kappa, double epsilon,
                                   double gamma, double tau, int n_grid = 1 << 16);

enum class Regime { Weak, Strong };

struct DecayReport {
  int dim = 1;
  double W = 0.0, Gamma = 0.0;
  double delta_E = 0.0, omega_D = 0.0;
  double t_c = 0.0, P_c = 0.0;
  double P_c_estimate = 0.0;  // (eps+kappa)^2/(kappa^2 sqrt gamma) or (eps+kappa)^2
  Regime regime = Regime::Weak;
  double T_e = std::numeric_limits<double>::infinity();
  GoldenRuleResult golden;
};

DecayReport classify_and_lifetime(int dim, double kappa, double epsilon, double gamma, double tau,
                                  double threshold = 0.1);

// Band width J(0) - min J and maximal phonon f for a dimension.
double band_width(int dim);
double debye_f(int dim);

}  // namespace mdc
