#include "mdc/scales.hpp"

#include <cmath>
#include <numbers>

#include "mdc/error.hpp"
#include "mdc/specfun.hpp"

namespace mdc {

namespace {

double c3_of(double mu_debye) {
  const double mu = mu_debye * si::debye;
  return mu * mu / (4.0 * std::numbers::pi * si::eps0);
}

}  // namespace

void validate(const MoleculeParams& mol) {
  require(mol.mu0 > 0, "molecule: mu0 must be positive");
  require(mol.B > 0, "molecule: B must be positive");
  require(mol.mass > 0, "molecule: mass must be positive");
  require(mol.gamma_sr >= 0, "molecule: gamma_sr must be non-negative");
}

double CrystalScales::to_kelvin(double tau_value) const {
  return tau_value * U_dd / (std::sqrt(gamma) * si::kB);
}

double CrystalScales::tau_of_kelvin(double T) const {
  return std::sqrt(gamma) * si::kB * T / U_dd;
}

CrystalScales derive_scales(const MoleculeParams& mol, double mu_g_debye, double a0, double T,
                            int dim) {
  validate(mol);
  require(mu_g_debye != 0, "scales: induced dipole must be nonzero");
  require(a0 > 0, "scales: a0 must be positive");
  require(T >= 0, "scales: temperature must be non-negative");
  require(dim == 1 || dim == 2, "scales: dimension must be 1 or 2");
  CrystalScales s;
  s.a0 = a0;
  s.dimension = dim;
  s.temperature = T;
  s.U_dd = c3_of(mu_g_debye) / (a0 * a0 * a0);
  const double kinetic = si::hbar * si::hbar / (mol.mass * si::amu * a0 * a0);
  s.gamma = s.U_dd / kinetic;
  s.tau = s.tau_of_kelvin(T);
  return s;
}

CrystalScales scales_at_gamma(const MoleculeParams& mol, double mu_g_debye, double gamma,
                              double T, int dim) {
  validate(mol);
  require(gamma > 0, "scales: gamma must be positive");
  require(mu_g_debye != 0, "scales: induced dipole must be nonzero");
  const double a0 = mol.mass * si::amu * c3_of(mu_g_debye) / (si::hbar * si::hbar * gamma);
  return derive_scales(mol, mu_g_debye, a0, T, dim);
}

double trap_lambda() {
  return 5.0 * std::tgamma(5.0 / 6.0) / (std::tgamma(1.0 / 3.0) * std::sqrt(std::numbers::pi));
}

double trap_frequency_relation(double gamma, int N) {
  require(gamma > 0, "trap_frequency_relation: gamma must be positive");
  require(N >= 2, "trap_frequency_relation: N must be >= 2");
  const double lam = trap_lambda();
  return std::pow(2.0, 2.5) / (N * std::sqrt(gamma * lam * lam / zeta3()));
}

double spin_flip_rate_estimate(const MoleculeParams& mol, double a0) {
  validate(mol);
  require(a0 > 0, "spin_flip_rate_estimate: a0 must be positive");
  const double u0 = c3_of(mol.mu0) / (a0 * a0 * a0) / si::h;
  return u0 * u0 * mol.gamma_sr * mol.gamma_sr / (mol.B * mol.B * mol.B);
}

}  // namespace mdc
