#pragma once

#include <Eigen/Dense>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mdc/scales.hpp"

namespace mdc {

// Rigid rotor H = B N^2 - mu0 E_b cos(theta) in units of B, field in B/mu0,
// dipoles in mu0.
using RotorLabel = std::pair<int, int>;  // (N, M_N) adiabatically connected to E_b = 0

struct StarkLevel {
  RotorLabel label;
  double energy = 0.0;
  double dipole = 0.0;
  Eigen::VectorXd state;  // over |N, M_N> with N = |M_N| .. N_max
};

struct StarkSolution {
  double E_b = 0.0;
  int M_N = 0;
  int N_max = 0;
  std::vector<StarkLevel> levels;  // ascending energy, level i has N = |M_N| + i
  const StarkLevel& level(int N) const;
};

// <N+1, M| cos |N, M>.
double cos_element(int N, int M);
// <N', M+1| C^1_{+1} |N, M> for N' = N +- 1, zero otherwise.
double c1_plus_element(int Np, int N, int M);

// Default N_max = max(10, N_target + 6). Raises N_max in steps of 2 until the
// lowest levels move by less than 1e-8 between N_max and N_max + 2.
StarkSolution solve_stark(double E_b, int M_N, int N_max = 0, int N_target = 0);

struct QubitPairParams {
  RotorLabel g, e;
  double E_b = 0.0;
  double mu_g = 0.0, mu_e = 0.0;
  double epsilon = 0.0;
  double D_r = 0.0;
  double kappa = 0.0;
  double eta = 0.0;       // +1 for Delta M = 0, -1/2 for Delta M = +-1
  double omega_eg = 0.0;  // (E_e - E_g) in units of B
  double theta_x = 0.0;   // |<e|mu_x|g>| / mu0
  double transition = 0.0;  // <e|mu_z|g> for Delta M = 0, <e|C_q|g> otherwise
  bool degenerate_hazard = false;
};

QubitPairParams qubit_pair_params(RotorLabel g, RotorLabel e, double E_b, int N_max = 0);

enum class FieldPointKind { Sweet, Magic };

struct FieldPoint {
  double E_b = 0.0;
  double residual = 0.0;
  QubitPairParams params;
};

// Bisection on epsilon (sweet) or epsilon + kappa (magic) inside [lo, hi].
FieldPoint find_field_point(RotorLabel g, RotorLabel e, FieldPointKind kind, double lo, double hi,
                            int N_max = 0);

// Rotor with spin-rotation term gamma_sr N.S for S = 1/2. Blocks are labelled
// by 2 M_J; levels by their dominant |N, M_N, M_S> component.
struct SpinLevel {
  int N = 0, M_N = 0, two_M_S = 0;
  double energy = 0.0;
  double dipole = 0.0;
  Eigen::VectorXd state;
};

struct SpinBlock {
  int two_M_J = 0;
  std::vector<std::tuple<int, int, int>> basis;  // (N, M_N, 2 M_S)
  std::vector<SpinLevel> levels;
};

struct SpinStarkSolution {
  double E_b = 0.0;
  double ratio = 0.0;  // gamma_sr / B
  int N_max = 0;
  std::vector<SpinBlock> blocks;  // 2 M_J = -1 and +1
  // |1,0,-1/2> -> |2,0,+1/2> pair.
  double theta_x = 0.0;
  double mu_g = 0.0;
  double kappa = 0.0;  // -theta_x^2 / mu_g^2
};

SpinBlock solve_spin_block(double E_b, double ratio, int two_M_J, int N_max);
SpinStarkSolution solve_spin_rotor(const MoleculeParams& mol, double E_b, int N_max = 14);

}  // namespace mdc
