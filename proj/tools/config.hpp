#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include "mdc/fidelity.hpp"
#include "mdc/scales.hpp"

namespace mdcq {

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every value has a documented default; NaN marks "derive from other inputs".
struct RunConfig {
  struct Molecule {
    double mu0_debye = 4.3;
    double B_GHz = 2.8;
    double mass_amu = 120.0;
    double gamma_sr_MHz = 84.0;
  } molecule;
  struct States {
    int g_N = 1, g_M = 0;
    int e_N = 2, e_M = 0;
    double E_b = 3.05;
  } states;
  struct Crystal {
    int dimension = 1;
    double a0_nm = 70.0;
    int N = 800;
    double nu_kHz = kUnset;         // unset: unit centre density
    double temperature_uK = kUnset; // unset: use model.tau
    double nu_perp_kHz = 400.0;
    double mu_g_debye = kUnset;     // unset: |mu_g| from the rotor
  } crystal;
  struct Model {
    double gamma = 30.0;
    double tau = 0.0;
    double kappa = kUnset;    // unset: from the states block
    double epsilon = kUnset;
    double nu_perp_tilde = 1.2;
  } model;
  struct Cavity {
    double d_um = 0.5;
    double Gamma_c_kHz = 10.0;
    double lambda_c_mm = 30.0;
    std::string mode = "cosine";
    double g_ref_kHz = 40.0;
  } cavity;
  struct Numerics {
    int N_max = 0;  // 0: automatic rotor basis
    int grid2d = 48;
    int n_grid = 1 << 16;
    int points = 256;
    int N_surrogate = 800;
    unsigned threads = 1;
    double t_max = 200.0;
  } numerics;

  mdc::MoleculeParams molecule_params() const;
  mdc::CavityParams cavity_params() const;
};

// Reads a JSON object with the blocks above; unknown blocks or keys and
// wrongly typed values raise ConfigError.
RunConfig load_config(const std::string& path);
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin);

void validate(const RunConfig& cfg);

}  // namespace mdcq
