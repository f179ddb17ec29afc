// One PASS/FAIL line per acceptance criterion, followed by the measured values.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mdc/fidelity.hpp"
#include "mdc/homogeneous.hpp"
#include "mdc/lifetime.hpp"
#include "mdc/rotor.hpp"
#include "mdc/scales.hpp"
#include "mdc/specfun.hpp"
#include "mdc/trapped.hpp"

using namespace mdc;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;
  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::check(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  pass = pass && ok;
  lines.push_back(std::string(ok ? "  ok   " : "  MISS ") + buf);
}

bool near(double v, double ref, double tol) { return std::abs(v - ref) <= tol; }

Eigen::MatrixXd hopping(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) H(i, j) = std::pow(std::abs(x[i] - x[j]), -3);
  return H;
}

// Least-squares slope of y against x.
double slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double mx = x.mean(), my = y.mean();
  return ((x.array() - mx) * (y.array() - my)).sum() / (x.array() - mx).square().sum();
}

Outcome criterion1() {
  Outcome o;
  struct Row {
    const char* name;
    RotorLabel g, e;
    double E_b, mu, kappa, eps, kappa_tol;
  };
  const Row rows[] = {
      {"a", {1, 0}, {2, 0}, 3.05, -0.16, 10.5, 0.0, 0.5},
      {"b", {1, 0}, {3, 0}, 3.91, 0.09, 1.0, 0.0, 0.05},
      {"c", {0, 0}, {1, 0}, 8.0, 0.75, 0.1, -0.7, 0.05},
      {"d", {0, 0}, {1, 1}, 5.0, 0.68, -0.24, -0.29, 0.05},
      {"e", {0, 0}, {1, 0}, 1.44, 0.39, 1.51, -1.51, 0.05},
      {"f", {1, 0}, {3, 0}, 3.44, -0.13, 0.39, -0.39, 0.05},
  };
  for (const auto& r : rows) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = qubit_pair_params(r.g, r.e, r.E_b);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = near(p.mu_g, r.mu, 0.05) && near(p.kappa, r.kappa, r.kappa_tol) &&
                    near(p.epsilon, r.eps, 0.05) && dt < 1.0;
    o.check(ok, "row %s E_b=%.2f: mu_g %.4f (%.2f), kappa %.4f (%.2f), eps %.4f (%.2f), %.3f s", r.name,
            r.E_b, p.mu_g, r.mu, p.kappa, r.kappa, p.epsilon, r.eps, dt);
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double J1 = band_1d(0.0);
  o.check(near(J1, 2 * zeta3(), 1e-12) && near(J1, 2.40411, 1e-5), "J(0) 1D = %.10f", J1);
  const double J2 = band_2d(default_lattice(), Eigen::Vector2d::Zero());
  o.check(near(J2, 11.034, 0.01), "J(0) 2D = %.5f", J2);
  const double fpi = debye_f_1d();
  o.check(near(fpi, 6.944, 0.001), "f(pi) = %.6f", fpi);
  const double fmax = phonon_fmax_2d(default_lattice());
  o.check(near(fmax, 8.22, 0.02), "2D f_max = %.5f", fmax);
  const double w = band_width_1d();
  o.check(near(w, 3.5 * zeta3(), 1e-12) && near(w, 4.2072, 1e-4), "1D band width = %.8f", w);
  o.check(near(trap_lambda(), 1.190, 0.005), "Lambda = %.6f", trap_lambda());
  return o;
}

Outcome criterion3() {
  Outcome o;
  const int N = 800;
  const double gamma = 1.0;
  const auto c = equilibrium_positions(N);
  const auto lon = phonon_modes_trapped(c, ModeKind::PhononLong, gamma);
  const auto exc = exciton_modes_trapped(c);
  const double nu = c.nu_tilde(gamma);
  const double r1 = lon.values[0] / nu, r2 = lon.values[1] / nu;
  o.check(std::abs(r1 - 1.0) < 1e-8, "omega(1)/nu - 1 = %.3e", r1 - 1.0);
  o.check(std::abs(r2 - std::sqrt(5.0)) < 1e-6, "omega(2)/nu - sqrt5 = %.3e", r2 - std::sqrt(5.0));
  const double wD = debye_f_1d() / std::sqrt(gamma);
  const double top = lon.values[N - 1];
  o.check(std::abs(top / wD - 1.0) < 0.02, "top omega %.6f vs omega_D %.6f", top, wD);
  o.check(std::abs(exc.values[0] / (2 * zeta3()) - 1.0) < 0.01, "exciton top %.6f vs %.6f",
          exc.values[0], 2 * zeta3());
  o.check(std::abs(exc.values[N - 1] / (-1.5 * zeta3()) - 1.0) < 0.01, "exciton bottom %.6f vs %.6f",
          exc.values[N - 1], -1.5 * zeta3());
  const double sum = exc.values.sum();
  o.check(std::abs(sum) < 1e-6 * N, "eigenvalue sum %.3e", sum);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto c = equilibrium_positions(100);
  const auto d = compare_to_profile(c);
  o.check(d.boundary_cells < 0.01, "max cumulative count error at cell boundaries %.5f cells",
          d.boundary_cells);
  o.lines.push_back("  info site-centred deviation " + std::to_string(d.site_spacings) +
                    " spacings at site " + std::to_string(d.worst_site));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const double F0 = lindemann_homogeneous(0.0);
  o.check(near(F0, 0.424, 0.01), "F_h(0) = %.5f", F0);
  const double c = lindemann_high_tau_coefficient(10.0, 100.0, 19);
  o.check(near(c, 0.278, 0.015), "high-tau coefficient = %.5f", c);
  return o;
}

Outcome criterion6() {
  Outcome o;
  struct Point {
    const char* name;
    double kappa, eps, gamma, tau;
  };
  const Point pts[] = {
      {"emission root", 0.5, -0.4, 16.0, 0.0},
      {"absorption root + kink", -0.8, 0.7, 25.0, 1.0},
      {"kink only", -0.5, 0.3, 10.0, 0.5},
  };
  for (const auto& p : pts) {
    Eigen::VectorXd ts(2);
    ts << 1e-3, 2e-3;
    const auto early = excited_population(ts, 1, p.kappa, p.eps, p.gamma, p.tau);
    const double W = quadratic_rate(1, p.kappa, p.eps, p.gamma, p.tau);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double curv = (1.0 - early.Pe[i]) / (ts[i] * ts[i]);
      worst = std::max(worst, std::abs(curv / (W * W) - 1.0));
    }
    o.check(worst < 0.01, "%s: W %.6f, curvature rel. error %.2e", p.name, W, worst);

    const auto g = golden_rule_rate(1, p.kappa, p.eps, p.gamma, p.tau);
    const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(121, 200.0, 800.0);
    const auto late = excited_population(t, 1, p.kappa, p.eps, p.gamma, p.tau);
    double s = 0.0;
    for (int w = 0; w < 3; ++w) {
      const Eigen::VectorXd tw = t.segment(40 * w, 41);
      const Eigen::VectorXd yw = -late.Pe.segment(40 * w, 41);
      s += slope(tw, yw) / 3.0;
    }
    o.check(std::abs(s / g.Gamma - 1.0) < 0.10, "%s: Gamma %.6f (roots %zu), slope %.6f", p.name,
            g.Gamma, g.roots.size(), s);
  }
  const double W0 = quadratic_rate(1, 0.7, -0.7, 16.0, 2.0);
  const double G0 = golden_rule_rate(1, 0.7, -0.7, 16.0, 2.0).Gamma;
  o.check(W0 == 0.0 && G0 == 0.0, "magic pair: W = %g, Gamma = %g", W0, G0);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const int N = 800;
  const auto c = equilibrium_positions(N);
  const auto lon = phonon_modes_trapped(c, ModeKind::PhononLong, 1.0);
  const auto exc = exciton_modes_trapped(c);
  const Eigen::VectorXd flat = Eigen::VectorXd::Ones(N);
  const double I0 = phonon_integral(c, lon, flat, 0.0);
  o.check(near(I0, 1.38, 0.07), "I_phon(tau -> 0) = %.5f", I0);
  Eigen::VectorXd taus = Eigen::VectorXd::LinSpaced(9, 20.0, 100.0), I(9);
  for (int i = 0; i < 9; ++i) I[i] = phonon_integral(c, lon, flat, taus[i]);
  const double s = slope(taus, I);
  o.check(near(s, 11.3, 0.6), "I_phon high-tau slope over [20, 100] = %.4f", s);
  CavityParams cav;
  cav.lambda_c = 1.0;
  const double span = c.x[N - 1] - c.x[0];
  bool all = true;
  std::string vals;
  for (double r : {0.01, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    const Eigen::VectorXd u = mode_samples(cav, c, r / span);
    const double Ie = exciton_variance(exc, u);
    all = all && Ie >= 0.10 && Ie <= 0.42;
    char buf[48];
    std::snprintf(buf, sizeof buf, " %.2f:%.4f", r, Ie);
    vals += buf;
  }
  o.check(all, "I_exc cosine mode by L/lambda_c:%s", vals.c_str());
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto r = case_study_cabr();
  o.check(std::abs(r.scales.U_dd_hz() / 215e3 - 1.0) <= 0.03, "U_dd/h = %.1f kHz", r.scales.U_dd_hz() / 1e3);
  o.check(std::abs(r.scales.gamma / 13.0 - 1.0) <= 0.05, "gamma = %.4f", r.scales.gamma);
  o.check(std::abs(r.W_hz / 2e6 - 1.0) <= 0.20, "W/2pi = %.4f MHz (I_exc %.4f, I_phon %.4f)", r.W_hz / 1e6,
          r.inhom.I_exc, r.inhom.I_phon);
  o.check(near(r.fidelity.F_star, 0.994, 0.002), "F* = %.5f (g_N %.3f MHz)", r.fidelity.F_star,
          r.coupling.g_N / 1e6);
  o.check(r.fidelity.T_G >= 0.1e-6 && r.fidelity.T_G <= 0.2e-6, "T_G = %.4f us (%.4f us at the stationary detuning)",
          r.fidelity.T_G * 1e6, r.fidelity.T_G_opt * 1e6);
  o.check(1.0 - r.fidelity_alt.F_star < 1e-3, "second set: gamma %.3f, W/2pi %.4f MHz, gate error %.3e",
          r.scales_alt.gamma, r.W_alt_hz / 1e6, 1.0 - r.fidelity_alt.F_star);
  return o;
}

Outcome criterion9() {
  Outcome o;
  const int N = 200;
  const auto c = equilibrium_positions(N);
  const auto exc = exciton_modes_trapped(c);
  const auto lon = phonon_modes_trapped(c, ModeKind::PhononLong, 1.0);
  std::mt19937_64 rng(2024);
  int tested = 0;
  double worst = 0.0;
  while (tested < 20) {
    const int m = 1 + int(rng() % N), n = 1 + int(rng() % N), np = 1 + int(rng() % N);
    const Eigen::MatrixXd S = coupling_slice(c, exc, lon, m);
    const double M = coupling_element(c, exc, lon, m, n, np);
    // Elements at the round-off floor carry no relative information.
    if (std::abs(M) < 1e-3 * S.cwiseAbs().maxCoeff()) continue;
    const double d = 1e-4;
    const Eigen::VectorXd cm = lon.modes.col(m - 1);
    const Eigen::MatrixXd dH = (hopping(c.x + d * cm) - hopping(c.x - d * cm)) / (2 * d);
    const double fd = -coupling_prefactor(N, m) / 3.0 * exc.modes.col(n - 1).dot(dH * exc.modes.col(np - 1));
    worst = std::max(worst, std::abs(M / fd - 1.0));
    ++tested;
  }
  o.check(worst < 0.01, "20 random elements, worst rel. error %.3e", worst);
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int cases = 100;

  double hf = 0.0;
  for (int i = 0; i < cases; ++i) {
    const double E = 0.1 + 9.9 * U(rng);
    const int M = int(rng() % 3), N = M + int(rng() % 4);
    const double h = 1e-4 * std::max(1.0, E);
    const double up = solve_stark(E + h, M, 0, N).level(N).energy;
    const double dn = solve_stark(E - h, M, 0, N).level(N).energy;
    const double mu = solve_stark(E, M, 0, N).level(N).dipole;
    const double fd = -(up - dn) / (2 * h);
    hf = std::max(hf, std::abs(mu - fd) / std::max(std::abs(fd), 1e-3));
  }
  o.check(hf < 1e-5, "Hellmann-Feynman dipoles, worst rel. error %.3e", hf);

  double orth = 0.0;
  for (int i = 0; i < cases; ++i) {
    const int N = 2 + int(rng() % 149);
    const auto c = equilibrium_positions(N);
    const ModeBasis b = i % 3 == 0 ? exciton_modes_trapped(c)
                        : i % 3 == 1 ? phonon_modes_trapped(c, ModeKind::PhononLong, 10.0)
                                     : phonon_modes_trapped(c, ModeKind::PhononZ, 10.0, 3.0);
    const Eigen::MatrixXd G = b.modes.transpose() * b.modes - Eigen::MatrixXd::Identity(N, N);
    orth = std::max(orth, G.cwiseAbs().maxCoeff());
  }
  o.check(orth < 1e-8, "mode-function orthonormality, worst |C^T C - 1| %.3e", orth);

  double sr = 0.0;
  for (int i = 0; i < cases; ++i) {
    const int n = 1024 + 2 * int(rng() % 3072);
    sr = std::max(sr, std::abs(band_grid_mean_1d(n)));
  }
  o.check(sr < 1e-8, "J sum rule on grids of 1024..7168 points, worst |mean J| %.3e", sr);

  double q0 = 0.0, qs = 0.0;
  for (int i = 0; i < cases; ++i) {
    const double kap = 6 * U(rng) - 3, eps = 6 * U(rng) - 3, gam = 1 + 50 * U(rng);
    const Eigen::Vector2d k(2 * kPi * U(rng) - kPi, 0.0);
    q0 = std::max(q0, std::abs(coupling_matrix_hom(1, Eigen::Vector2d::Zero(), k, 0, kap, eps, gam).M_sqrtN));
    const double small = std::abs(coupling_matrix_hom(1, Eigen::Vector2d(1e-8, 0.0), k, 0, kap, eps, gam).M_sqrtN);
    qs = std::max(qs, small / (std::abs(kap) + std::abs(eps)));
  }
  o.check(q0 == 0.0 && qs < 1e-3, "M(q -> 0): max |M(0)| %g, max |M(1e-8)|/(|eps|+|kappa|) %.3e", q0, qs);

  double inv = 0.0;
  for (int i = 0; i < cases; ++i) {
    const double kap = 6 * U(rng) - 3, eps = 6 * U(rng) - 3, gam = 1 + 50 * U(rng), tau = 3 * U(rng);
    const Eigen::Vector2d q(2 * kPi * U(rng) - kPi, 0.0), k(2 * kPi * U(rng) - kPi, 0.0);
    const double a = std::abs(coupling_matrix_hom(1, q, k, 0, kap, eps, gam).M_sqrtN);
    const double b = std::abs(coupling_matrix_hom(1, q, k, 0, -kap, -eps, gam).M_sqrtN);
    const double Wa = quadratic_rate(1, kap, eps, gam, tau), Wb = quadratic_rate(1, -kap, -eps, gam, tau);
    const double Ea = exciton_band(1, k, kap, eps).E, Eb = exciton_band(1, k, -kap, -eps).E;
    inv = std::max({inv, std::abs(a - b) / std::max(a, 1e-300), std::abs(Wa - Wb) / std::max(Wa, 1e-300),
                    std::abs(Ea + Eb) / std::max(std::abs(Ea), 1e-300)});
  }
  o.check(inv < 1e-12, "(eps, kappa) -> -(eps, kappa): |M|, W invariant, E mirrored, worst %.3e", inv);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "qubit-pair table reproduction", 6.0, criterion1},
      {2, "mathematical constants", 10.0, criterion2},
      {3, "trapped crystal at N=800", 60.0, criterion3},
      {4, "density profile at N=100", 60.0, criterion4},
      {5, "Lindemann function", 60.0, criterion5},
      {6, "decay-rate oracle equivalence", 600.0, criterion6},
      {7, "inhomogeneous integrals", 600.0, criterion7},
      {8, "CaBr end to end", 120.0, criterion8},
      {9, "coupling tensor against finite differences", 600.0, criterion9},
      {10, "randomized property suite", 600.0, criterion10},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.lines.push_back(std::string("  exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = o.pass && dt <= c.budget_s;
    if (!ok) ++failed;
    std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.title, dt);
    for (const auto& l : o.lines) std::printf("%s\n", l.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
