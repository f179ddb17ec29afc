#pragma once

namespace mdc {

// CODATA 2018 values, SI.
namespace si {
inline constexpr double c = 299792458.0;
inline constexpr double h = 6.62607015e-34;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double kB = 1.380649e-23;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double amu = 1.66053906660e-27;
inline constexpr double debye = 1e-21 / c;  // 3.33564095198e-30 C m
}  // namespace si

struct MoleculeParams {
  double mu0 = 0.0;       // Debye
  double B = 0.0;         // Hz, rotational constant as B/h
  double mass = 0.0;      // amu
  double gamma_sr = 0.0;  // Hz
};

void validate(const MoleculeParams& mol);

// Dimensionless frame: lengths in a0, energies in U_dd, mass gamma.
struct CrystalScales {
  double a0 = 0.0;    // m
  double U_dd = 0.0;  // J
  double gamma = 0.0;
  int dimension = 1;
  double temperature = 0.0;  // K
  double tau = 0.0;          // sqrt(gamma) kB T / U_dd

  double U_dd_hz() const { return U_dd / si::h; }
  // Energy in units of U_dd to angular frequency [rad/s] and back.
  double to_angular(double e) const { return e * U_dd / si::hbar; }
  double from_angular(double w) const { return w * si::hbar / U_dd; }
  // Time in units of hbar/U_dd to seconds.
  double to_seconds(double t) const { return t * si::hbar / U_dd; }
  double to_kelvin(double tau_value) const;
  double tau_of_kelvin(double T) const;
};

// mu_g enters U_dd squared, so its sign is irrelevant here.
CrystalScales derive_scales(const MoleculeParams& mol, double mu_g_debye, double a0, double T,
                            int dim);

// Spacing at which a species with induced dipole mu_g reaches a given gamma.
CrystalScales scales_at_gamma(const MoleculeParams& mol, double mu_g_debye, double gamma,
                              double T, int dim);

// Density-profile constant 5 Gamma(5/6) / (Gamma(1/3) sqrt(pi)).
double trap_lambda();

// hbar nu / U_dd for a harmonically trapped chain of N molecules whose centre
// spacing defines a0.
double trap_frequency_relation(double gamma, int N);

// Order-of-magnitude rate [Hz] of spin flips through virtual rotational
// excitation: (mu0^2/(4 pi eps0 a0^3))^2 gamma_sr^2 / B^3 with energies in Hz.
double spin_flip_rate_estimate(const MoleculeParams& mol, double a0);

}  // namespace mdc
