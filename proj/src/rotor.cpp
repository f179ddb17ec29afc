#include "mdc/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mdc/error.hpp"

namespace mdc {

namespace {

void fix_phase(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0) v = -v;
}

StarkSolution solve_once(double E_b, int M_N, int N_max) {
  const int m = std::abs(M_N);
  const int n = N_max - m + 1;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const int N = m + a;
    H(a, a) = N * (N + 1.0);
    if (a + 1 < n) Z(a, a + 1) = Z(a + 1, a) = cos_element(N, M_N);
  }
  H -= E_b * Z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  StarkSolution sol;
  sol.E_b = E_b;
  sol.M_N = M_N;
  sol.N_max = N_max;
  sol.levels.resize(n);
  for (int i = 0; i < n; ++i) {
    StarkLevel& lv = sol.levels[i];
    lv.label = {m + i, M_N};
    lv.energy = es.eigenvalues()[i];
    lv.state = es.eigenvectors().col(i);
    fix_phase(lv.state);
    lv.dipole = lv.state.dot(Z * lv.state);
  }
  return sol;
}

// Sum over basis pairs of <e-state| C^1_{+1} |g-state> with M_e = M_g + 1.
double c1_plus_between(const StarkLevel& e, int Me, const StarkLevel& g, int Mg) {
  const int me = std::abs(Me), mg = std::abs(Mg);
  double s = 0.0;
  for (Eigen::Index a = 0; a < g.state.size(); ++a)
    for (Eigen::Index b = 0; b < e.state.size(); ++b) {
      const int Ng = mg + static_cast<int>(a), Ne = me + static_cast<int>(b);
      if (std::abs(Ne - Ng) == 1) s += e.state[b] * g.state[a] * c1_plus_element(Ne, Ng, Mg);
    }
  return s;
}

}  // namespace

const StarkLevel& StarkSolution::level(int N) const {
  const int i = N - std::abs(M_N);
  if (i < 0 || i >= static_cast<int>(levels.size()))
    throw DomainError("stark: level N=" + std::to_string(N) + " not in basis");
  return levels[i];
}

double cos_element(int N, int M) {
  const double num = (N + 1.0) * (N + 1.0) - double(M) * M;
  if (num <= 0) return 0.0;
  return std::sqrt(num / ((2.0 * N + 1) * (2.0 * N + 3)));
}

double c1_plus_element(int Np, int N, int M) {
  if (Np == N + 1) {
    return std::sqrt((N + M + 1.0) * (N + M + 2.0) / (2.0 * (2 * N + 1) * (2 * N + 3)));
  }
  if (Np == N - 1 && std::abs(M + 1) <= Np) {
    return -std::sqrt((N - M) * (N - M - 1.0) / (2.0 * (2 * N - 1) * (2 * N + 1)));
  }
  return 0.0;
}

StarkSolution solve_stark(double E_b, int M_N, int N_max, int N_target) {
  require(std::isfinite(E_b), "solve_stark: field must be finite");
  if (N_max <= 0) N_max = std::max(10, N_target + 6);
  require(N_max >= std::abs(M_N), "solve_stark: N_max must be >= |M_N|");
  const int checked = std::max(3, N_target - std::abs(M_N) + 2);
  double worst = 0.0;
  for (int iter = 0; iter < 60; ++iter, N_max += 2) {
    StarkSolution a = solve_once(E_b, M_N, N_max);
    StarkSolution b = solve_once(E_b, M_N, N_max + 2);
    const int k = std::min<int>(checked, static_cast<int>(a.levels.size()));
    worst = 0.0;
    for (int i = 0; i < k; ++i)
      worst = std::max(worst, std::abs(a.levels[i].energy - b.levels[i].energy));
    if (worst < 1e-8) return a;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "solve_stark: truncation not converged at N_max=%d (shift %.3g)",
                N_max, worst);
  throw ConvergenceError(buf);
}

QubitPairParams qubit_pair_params(RotorLabel g, RotorLabel e, double E_b, int N_max) {
  require(g.first >= std::abs(g.second) && e.first >= std::abs(e.second),
          "qubit_pair_params: invalid rotor label");
  const int target = std::max(g.first, e.first);
  const StarkSolution sg = solve_stark(E_b, g.second, N_max, target);
  const StarkSolution se =
      (e.second == g.second) ? sg : solve_stark(E_b, e.second, sg.N_max, target);
  const StarkLevel& lg = sg.level(g.first);
  const StarkLevel& le = se.level(e.first);

  QubitPairParams p;
  p.g = g;
  p.e = e;
  p.E_b = E_b;
  p.mu_g = lg.dipole;
  p.mu_e = le.dipole;
  p.epsilon = (p.mu_e - p.mu_g) / p.mu_g;
  p.omega_eg = le.energy - lg.energy;
  const int dM = e.second - g.second;
  if (dM == 0) {
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(lg.state.size(), lg.state.size());
    const int m = std::abs(g.second);
    for (Eigen::Index a = 0; a + 1 < Z.rows(); ++a)
      Z(a, a + 1) = Z(a + 1, a) = cos_element(m + static_cast<int>(a), g.second);
    p.transition = le.state.dot(Z * lg.state);
    p.eta = 1.0;
    p.D_r = p.transition * p.transition;
  } else if (std::abs(dM) == 1) {
    // C_{-1} is minus the adjoint of C_{+1}.
    p.transition = dM == 1 ? c1_plus_between(le, e.second, lg, g.second)
                           : -c1_plus_between(lg, g.second, le, e.second);
    p.eta = -0.5;
    p.D_r = p.eta * p.transition * p.transition;
    p.theta_x = std::abs(p.transition) / std::sqrt(2.0);
    p.degenerate_hazard = (g.second == 0 || e.second == 0);
  }
  p.kappa = p.D_r / (p.mu_g * p.mu_g);
  return p;
}

FieldPoint find_field_point(RotorLabel g, RotorLabel e, FieldPointKind kind, double lo, double hi,
                            int N_max) {
  require(lo < hi, "find_field_point: empty bracket");
  auto target = [&](double E) {
    const QubitPairParams p = qubit_pair_params(g, e, E, N_max);
    return kind == FieldPointKind::Sweet ? p.epsilon : p.epsilon + p.kappa;
  };
  double flo = target(lo), fhi = target(hi);
  if (!(flo * fhi <= 0) || !std::isfinite(flo) || !std::isfinite(fhi))
    throw NotFoundError("find_field_point: no sign change on bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = target(mid);
    if (fm == 0) {
      lo = hi = mid;
      break;
    }
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  FieldPoint fp;
  fp.E_b = 0.5 * (lo + hi);
  fp.params = qubit_pair_params(g, e, fp.E_b, N_max);
  fp.residual = kind == FieldPointKind::Sweet ? fp.params.epsilon
                                              : fp.params.epsilon + fp.params.kappa;
  return fp;
}

SpinBlock solve_spin_block(double E_b, double ratio, int two_M_J, int N_max) {
  SpinBlock blk;
  blk.two_M_J = two_M_J;
  for (int N = 0; N <= N_max; ++N)
    for (int s : {-1, 1}) {
      const int twoM = two_M_J - s;
      if (twoM % 2) continue;
      const int M = twoM / 2;
      if (std::abs(M) <= N) blk.basis.emplace_back(N, M, s);
    }
  const int n = static_cast<int>(blk.basis.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const auto [N, M, s] = blk.basis[a];
    H(a, a) = N * (N + 1.0) + 0.5 * ratio * M * s;
    for (int b = 0; b < n; ++b) {
      const auto [N2, M2, s2] = blk.basis[b];
      // N_- S_+ raises the spin and lowers M_N.
      if (N2 == N && s == -1 && s2 == 1 && M2 == M - 1) {
        const double v = 0.5 * ratio * std::sqrt(N * (N + 1.0) - M * (M - 1.0));
        H(a, b) += v;
        H(b, a) += v;
      }
      if (M2 == M && s2 == s && N2 == N + 1) Z(a, b) = Z(b, a) = cos_element(N, M);
    }
  }
  H -= E_b * Z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  blk.levels.resize(n);
  for (int i = 0; i < n; ++i) {
    SpinLevel& lv = blk.levels[i];
    lv.energy = es.eigenvalues()[i];
    lv.state = es.eigenvectors().col(i);
    fix_phase(lv.state);
    lv.dipole = lv.state.dot(Z * lv.state);
    Eigen::Index imax = 0;
    lv.state.cwiseAbs().maxCoeff(&imax);
    std::tie(lv.N, lv.M_N, lv.two_M_S) = blk.basis[imax];
  }
  return blk;
}

namespace {

const SpinLevel& find_spin_level(const SpinBlock& b, int N, int M, int s) {
  for (const auto& lv : b.levels)
    if (lv.N == N && lv.M_N == M && lv.two_M_S == s) return lv;
  throw NotFoundError("spin rotor: no level dominated by the requested component");
}

}  // namespace

SpinStarkSolution solve_spin_rotor(const MoleculeParams& mol, double E_b, int N_max) {
  validate(mol);
  SpinStarkSolution sol;
  sol.E_b = E_b;
  sol.ratio = mol.gamma_sr / mol.B;
  sol.N_max = N_max;
  sol.blocks.push_back(solve_spin_block(E_b, sol.ratio, -1, N_max));
  sol.blocks.push_back(solve_spin_block(E_b, sol.ratio, +1, N_max));
  const SpinBlock& bg = sol.blocks[0];
  const SpinBlock& be = sol.blocks[1];
  const SpinLevel& g = find_spin_level(bg, 1, 0, -1);
  const SpinLevel& e = find_spin_level(be, 2, 0, +1);
  double s = 0.0;
  for (std::size_t a = 0; a < bg.basis.size(); ++a)
    for (std::size_t b = 0; b < be.basis.size(); ++b) {
      const auto [N, M, sg] = bg.basis[a];
      const auto [N2, M2, se] = be.basis[b];
      if (se == sg && M2 == M + 1 && std::abs(N2 - N) == 1)
        s += e.state[b] * g.state[a] * c1_plus_element(N2, N, M);
    }
  sol.theta_x = std::abs(s) / std::sqrt(2.0);
  sol.mu_g = g.dipole;
  sol.kappa = -sol.theta_x * sol.theta_x / (sol.mu_g * sol.mu_g);
  return sol;
}

}  // namespace mdc
