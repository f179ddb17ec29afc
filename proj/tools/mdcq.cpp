// mdcq: data and reports for molecular dipolar crystal qubits.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "mdc/error.hpp"
#include "mdc/fidelity.hpp"
#include "mdc/homogeneous.hpp"
#include "mdc/lifetime.hpp"
#include "mdc/parallel.hpp"
#include "mdc/rotor.hpp"
#include "mdc/scales.hpp"
#include "mdc/specfun.hpp"
#include "mdc/trapped.hpp"
#include "output.hpp"

namespace {

using namespace mdcq;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

enum Exit { kOk = 0, kBadConfig = 1, kNoConvergence = 2, kRegime = 3 };

struct RegimeViolation {
  std::string what;
};

mdc::RotorLabel parse_label(const std::string& s, const char* flag) {
  std::istringstream in(s);
  int N = 0, M = 0;
  char comma = 0;
  if (!(in >> N >> comma >> M) || comma != ',' || !in.eof())
    throw ConfigError(std::string(flag) + " expects N,M_N");
  return {N, M};
}

std::string label_text(const mdc::RotorLabel& l) {
  return std::to_string(l.first) + "," + std::to_string(l.second);
}

std::vector<double> parse_list(const std::string& s, const char* flag) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string(flag) + " expects a comma separated list of numbers");
    }
  }
  if (out.empty()) throw ConfigError(std::string(flag) + " is empty");
  return out;
}

// Position along Gamma-K-M-Gamma and the point there.
struct PathPoint {
  double s;
  Eigen::Vector2d k;
};

std::vector<PathPoint> bz_path(int points) {
  const Eigen::Vector2d G = Eigen::Vector2d::Zero(), K = mdc::point_K(), M = mdc::point_M();
  const std::vector<Eigen::Vector2d> corners{G, K, M, G};
  double total = 0.0;
  for (int i = 0; i < 3; ++i) total += (corners[i + 1] - corners[i]).norm();
  std::vector<PathPoint> out;
  for (int j = 0; j < points; ++j) {
    double s = total * j / (points - 1);
    const double s_out = s;
    int seg = 0;
    while (seg < 2 && s > (corners[seg + 1] - corners[seg]).norm()) {
      s -= (corners[seg + 1] - corners[seg]).norm();
      ++seg;
    }
    const Eigen::Vector2d d = corners[seg + 1] - corners[seg];
    out.push_back({s_out, corners[seg] + std::min(1.0, s / d.norm()) * d});
  }
  return out;
}

Json pair_json(const mdc::QubitPairParams& p) {
  Json j;
  j["g"] = label_text(p.g);
  j["e"] = label_text(p.e);
  j["E_b"] = number(p.E_b);
  j["mu_g"] = number(p.mu_g);
  j["mu_e"] = number(p.mu_e);
  j["epsilon"] = number(p.epsilon);
  j["kappa"] = number(p.kappa);
  j["D_r"] = number(p.D_r);
  j["eta"] = number(p.eta);
  j["omega_eg"] = number(p.omega_eg);
  j["theta_x"] = number(p.theta_x);
  j["transition"] = number(p.transition);
  j["degenerate_hazard"] = p.degenerate_hazard;
  return j;
}

Json scales_json(const mdc::CrystalScales& s) {
  Json j;
  j["a0_m"] = number(s.a0);
  j["U_dd_J"] = number(s.U_dd);
  j["U_dd_Hz"] = number(s.U_dd_hz());
  j["gamma"] = number(s.gamma);
  j["tau"] = number(s.tau);
  j["temperature_K"] = number(s.temperature);
  return j;
}

Json fidelity_json(const mdc::FidelityResult& f) {
  Json j;
  j["g_N_Hz"] = number(f.g_N);
  j["W_Hz"] = number(f.W);
  j["Gamma_c_Hz"] = number(f.Gamma_c);
  j["Delta_star_Hz"] = number(f.Delta_star);
  j["F_star"] = number(f.F_star);
  j["gate_error"] = number(1.0 - f.F_star);
  j["T_G_s"] = number(f.T_G);
  j["Delta_opt_Hz"] = number(f.Delta_opt);
  j["F_at_Delta_star"] = f.W > 0.0 && std::isfinite(f.Delta_star)
                             ? number(mdc::fidelity_at(f.g_N, f.W, f.Gamma_c, f.Delta_star))
                             : number(f.F_star);
  j["T_G_opt_s"] = number(f.T_G_opt);
  j["failure"] = f.failure;
  return j;
}

Json stability_json(const mdc::StabilityReport& r) {
  Json j;
  j["gamma"] = number(r.gamma);
  j["tau"] = number(r.tau);
  j["nu_perp_tilde"] = number(r.nu_perp);
  j["lindemann_center"] = number(r.lindemann_center);
  j["lindemann_threshold"] = mdc::kLindemannThreshold;
  j["lindemann_violations"] = r.lindemann_violations;
  j["lindemann_ok"] = r.lindemann_ok;
  j["zigzag_product"] = number(r.zigzag_product);
  j["zigzag_constant_derived"] = number(mdc::zigzag_constant());
  j["zigzag_constant_quoted"] = mdc::kZigzagQuoted;
  j["zigzag_ok"] = r.zigzag_ok;
  j["zigzag_ok_quoted"] = r.zigzag_ok_quoted;
  j["zigzag_margin"] = number(r.zigzag_margin);
  j["quantum_ok"] = r.quantum_ok;
  j["thermal_ok"] = r.thermal_ok;
  j["inequality_ok"] = r.inequality_ok;
  j["inequality_ok_derived"] = r.inequality_ok_derived;
  j["temperature_ok"] = r.temperature_ok;
  j["tunneling_exponent"] = number(r.tunneling_exponent);
  j["tunneling_rate_over_omega_D"] = number(r.tunneling_rate);
  j["tunneling_bound_over_omega_D"] = number(r.tunneling_bound);
  return j;
}

bool stability_failed(const mdc::StabilityReport& r) {
  return !r.inequality_ok_derived || !r.lindemann_ok || !r.temperature_ok;
}

void announce(const fs::path& p) { std::cout << p.string() << "\n"; }

struct Context {
  RunConfig cfg;
  std::string out_flag;
  fs::path dir() const { return output_dir(out_flag); }

  std::pair<double, double> kappa_epsilon() const {
    double kappa = cfg.model.kappa, eps = cfg.model.epsilon;
    if (std::isnan(kappa) || std::isnan(eps)) {
      const auto p = mdc::qubit_pair_params({cfg.states.g_N, cfg.states.g_M},
                                            {cfg.states.e_N, cfg.states.e_M}, cfg.states.E_b,
                                            cfg.numerics.N_max);
      if (std::isnan(kappa)) kappa = p.kappa;
      if (std::isnan(eps)) eps = p.epsilon;
    }
    return {kappa, eps};
  }
};

// ---- rotor ----------------------------------------------------------------

int rotor_scan(Context& ctx, double lo, double hi, int points, int levels, int m_max) {
  if (points < 2 || hi <= lo || levels < 1 || m_max < 0)
    throw ConfigError("rotor scan: need points >= 2, Eb-max > Eb-min, levels >= 1, M-max >= 0");
  Table t({"E_b", "N", "M_N", "energy", "dipole"});
  t.comment("energies in B, field in B/mu0, dipoles in mu0");
  Table pairs({"E_b", "mu_g", "mu_e", "epsilon", "kappa", "D_r"});
  pairs.comment("states g=" + std::to_string(ctx.cfg.states.g_N) + "," +
                std::to_string(ctx.cfg.states.g_M) + " e=" + std::to_string(ctx.cfg.states.e_N) +
                "," + std::to_string(ctx.cfg.states.e_M));
  for (int j = 0; j < points; ++j) {
    const double Eb = lo + (hi - lo) * j / (points - 1);
    for (int M = 0; M <= m_max; ++M) {
      const int top = M + levels - 1;
      if (top < M) continue;
      const auto sol = mdc::solve_stark(Eb, M, ctx.cfg.numerics.N_max, top);
      for (int N = M; N <= top; ++N) {
        const auto& l = sol.level(N);
        t.add({Eb, double(N), double(M), l.energy, l.dipole});
      }
    }
    if (Eb > 0.0) {
      const auto p = mdc::qubit_pair_params({ctx.cfg.states.g_N, ctx.cfg.states.g_M},
                                            {ctx.cfg.states.e_N, ctx.cfg.states.e_M}, Eb,
                                            ctx.cfg.numerics.N_max);
      pairs.add({Eb, p.mu_g, p.mu_e, p.epsilon, p.kappa, p.D_r});
    }
  }
  const fs::path dir = ctx.dir();
  t.write(dir / "rotor_scan.csv");
  pairs.write(dir / "rotor_pair_scan.csv");
  announce(dir / "rotor_scan.csv");
  announce(dir / "rotor_pair_scan.csv");
  return kOk;
}

int rotor_pair(Context& ctx) {
  const auto p = mdc::qubit_pair_params({ctx.cfg.states.g_N, ctx.cfg.states.g_M},
                                        {ctx.cfg.states.e_N, ctx.cfg.states.e_M},
                                        ctx.cfg.states.E_b, ctx.cfg.numerics.N_max);
  Json body;
  body["units"] = "field B/mu0, dipoles mu0, energies B";
  body["pair"] = pair_json(p);
  write_json(ctx.dir() / "rotor_pair.json", body);
  std::cout << Json(pair_json(p)).dump(2) << "\n";
  return kOk;
}

int rotor_find(Context& ctx, const std::string& kind, double lo, double hi) {
  mdc::FieldPointKind k;
  if (kind == "sweet") k = mdc::FieldPointKind::Sweet;
  else if (kind == "magic") k = mdc::FieldPointKind::Magic;
  else throw ConfigError("rotor find: --kind must be sweet or magic");
  const auto fp = mdc::find_field_point({ctx.cfg.states.g_N, ctx.cfg.states.g_M},
                                        {ctx.cfg.states.e_N, ctx.cfg.states.e_M}, k, lo, hi,
                                        ctx.cfg.numerics.N_max);
  Json body;
  body["kind"] = kind;
  body["E_b"] = number(fp.E_b);
  body["residual"] = number(fp.residual);
  body["pair"] = pair_json(fp.params);
  write_json(ctx.dir() / "rotor_find.json", body);
  std::cout << body.dump(2) << "\n";
  return kOk;
}

int rotor_spin(Context& ctx, int n_max) {
  const auto mol = ctx.cfg.molecule_params();
  const auto sol = mdc::solve_spin_rotor(mol, ctx.cfg.states.E_b, n_max);
  Table t({"two_M_J", "N", "M_N", "two_M_S", "energy", "dipole"});
  t.comment("energies in B, dipoles in mu0, gamma_sr/B = " + format_number(sol.ratio));
  for (const auto& b : sol.blocks)
    for (const auto& l : b.levels)
      t.add({double(b.two_M_J), double(l.N), double(l.M_N), double(l.two_M_S), l.energy,
             l.dipole});
  const fs::path dir = ctx.dir();
  t.write(dir / "rotor_spin.csv");
  Json body;
  body["E_b"] = number(sol.E_b);
  body["gamma_sr_over_B"] = number(sol.ratio);
  body["theta_x"] = number(sol.theta_x);
  body["mu_g"] = number(sol.mu_g);
  body["kappa"] = number(sol.kappa);
  write_json(dir / "rotor_spin.json", body);
  announce(dir / "rotor_spin.csv");
  announce(dir / "rotor_spin.json");
  return kOk;
}

// ---- homogeneous ----------------------------------------------------------

int band(Context& ctx, int dim, int points) {
  const fs::path dir = ctx.dir();
  if (dim == 1) {
    Table t({"k", "J", "f", "g"});
    t.comment("k in 1/a0 on [0, pi]; J and f dimensionless; g(q) enters M(q,k)");
    for (int j = 0; j < points; ++j) {
      const double k = kPi * j / (points - 1);
      t.add({k, mdc::band_1d(k), mdc::phonon_f_1d(k), mdc::coupling_g_1d(k)});
    }
    t.write(dir / "band_1d.csv");
    announce(dir / "band_1d.csv");
    return kOk;
  }
  const auto& lat = mdc::default_lattice();
  const auto path = bz_path(points);
  Table t({"s", "kx", "ky", "J", "f1", "f2"});
  t.comment("path Gamma-K-M-Gamma; s is the arc length in 1/a0");
  std::vector<std::vector<double>> rows(path.size());
  mdc::parallel_for(path.size(), [&](std::size_t i) {
    const auto& p = path[i];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(mdc::dynamical_matrix_2d(lat, p.k));
    const Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    rows[i] = {p.s, p.k.x(), p.k.y(), mdc::band_2d(lat, p.k), ev[0], ev[1]};
  });
  for (const auto& r : rows) t.add(r);
  t.write(dir / "band_2d.csv");
  announce(dir / "band_2d.csv");
  return kOk;
}

int phonon(Context& ctx, int dim, int points) {
  const fs::path dir = ctx.dir();
  const double gamma = ctx.cfg.model.gamma, nu = ctx.cfg.model.nu_perp_tilde;
  if (dim == 1) {
    Table t({"q", "f", "omega", "omega_y", "omega_z"});
    t.comment("omega in U_dd/hbar at gamma = " + format_number(gamma) +
              ", nu_perp = " + format_number(nu) + "; negative omega marks omega^2 < 0");
    auto signed_root = [](double w2) { return w2 >= 0 ? std::sqrt(w2) : -std::sqrt(-w2); };
    bool unstable = false;
    for (int j = 0; j < points; ++j) {
      const double q = kPi * j / (points - 1);
      const double f = mdc::phonon_f_1d(q);
      const auto tr = mdc::transverse_spectrum_hom(q, nu, gamma);
      unstable = unstable || !tr.stable();
      t.add({q, f, f / std::sqrt(gamma), signed_root(tr.omega_sq_y), signed_root(tr.omega_sq_z)});
    }
    t.write(dir / "phonon_1d.csv");
    announce(dir / "phonon_1d.csv");
    if (unstable) throw RegimeViolation{"transverse branch unstable (zig-zag)"};
    return kOk;
  }
  const auto path = bz_path(points);
  Table t({"s", "qx", "qy", "f1", "f2"});
  t.comment("path Gamma-K-M-Gamma");
  std::vector<std::vector<double>> rows(path.size());
  mdc::parallel_for(path.size(), [&](std::size_t i) {
    const auto m = mdc::phonon_spectrum_hom(2, path[i].k);
    rows[i] = {path[i].s, path[i].k.x(), path[i].k.y(), m[0].f, m[1].f};
  });
  for (const auto& r : rows) t.add(r);
  t.write(dir / "phonon_2d.csv");
  announce(dir / "phonon_2d.csv");
  return kOk;
}

int coupling(Context& ctx, int dim, int points, double k) {
  const auto [kappa, eps] = ctx.kappa_epsilon();
  const double gamma = ctx.cfg.model.gamma;
  const fs::path dir = ctx.dir();
  Table t({"s", "qx", "qy", "branch", "g", "M_re", "M_im", "M_abs"});
  t.comment("M(q,k) sqrt(N) in U_dd; kappa = " + format_number(kappa) +
            ", epsilon = " + format_number(eps) + ", gamma = " + format_number(gamma) +
            ", k = " + format_number(k));
  if (dim == 1) {
    for (int j = 0; j < points; ++j) {
      const double q = kPi * j / (points - 1);
      const auto c = mdc::coupling_matrix_hom(1, {q, 0.0}, {k, 0.0}, 0, kappa, eps, gamma);
      t.add({q, q, 0.0, 0.0, c.g_q, c.M_sqrtN.real(), c.M_sqrtN.imag(), std::abs(c.M_sqrtN)});
    }
  } else {
    for (const auto& p : bz_path(points))
      for (int b = 0; b < 2; ++b) {
        const auto c = mdc::coupling_matrix_hom(2, p.k, {k, 0.0}, b, kappa, eps, gamma);
        t.add({p.s, p.k.x(), p.k.y(), double(b), c.g_q, c.M_sqrtN.real(), c.M_sqrtN.imag(),
               std::abs(c.M_sqrtN)});
      }
  }
  const fs::path file = dir / (dim == 1 ? "coupling_1d.csv" : "coupling_2d.csv");
  t.write(file);
  announce(file);
  return kOk;
}

int lifetime(Context& ctx, int dim, int points) {
  const auto [kappa, eps] = ctx.kappa_epsilon();
  const double gamma = ctx.cfg.model.gamma, tau = ctx.cfg.model.tau;
  const auto rep = mdc::classify_and_lifetime(dim, kappa, eps, gamma, tau);
  const auto I = mdc::integral_I(dim, tau, ctx.cfg.numerics.grid2d);
  Eigen::VectorXd t(points);
  for (int j = 0; j < points; ++j) t[j] = ctx.cfg.numerics.t_max * j / (points - 1);
  const int grid = dim == 1 ? ctx.cfg.numerics.n_grid : ctx.cfg.numerics.grid2d;
  const auto pop = mdc::excited_population(t, dim, kappa, eps, gamma, tau, grid);
  Table tab({"t", "Pe", "Pe_quadratic", "Pe_golden"});
  tab.comment("t in hbar/U_dd; quadratic exp(-W^2 t^2), golden exp(-Gamma t)");
  for (int j = 0; j < points; ++j)
    tab.add({t[j], pop.Pe[j], std::exp(-rep.W * rep.W * t[j] * t[j]),
             std::exp(-rep.Gamma * t[j])});
  const fs::path dir = ctx.dir();
  tab.write(dir / "lifetime_population.csv");
  Json body;
  body["dim"] = dim;
  body["kappa"] = number(kappa);
  body["epsilon"] = number(eps);
  body["gamma"] = number(gamma);
  body["tau"] = number(tau);
  body["I_vacuum"] = number(I.vacuum);
  body["I_thermal"] = number(I.thermal);
  body["W"] = number(rep.W);
  body["Gamma"] = number(rep.Gamma);
  body["Gamma_resonant"] = number(rep.golden.Gamma_resonant);
  body["Gamma_kink"] = number(rep.golden.Gamma_kink);
  body["q0"] = number(rep.golden.q0);
  body["emission"] = rep.golden.emission;
  Json roots = Json::array();
  for (const auto& r : rep.golden.roots) {
    Json jr;
    jr["q0"] = number(r.q0);
    jr["C"] = number(r.C);
    jr["occupation"] = number(r.occupation);
    jr["rate"] = number(r.rate);
    roots.push_back(jr);
  }
  body["roots"] = roots;
  body["note"] = rep.golden.note;
  body["delta_E"] = number(rep.delta_E);
  body["omega_D"] = number(rep.omega_D);
  body["t_c"] = number(rep.t_c);
  body["P_c"] = number(rep.P_c);
  body["P_c_estimate"] = number(rep.P_c_estimate);
  body["regime"] = rep.regime == mdc::Regime::Weak ? "weak" : "strong";
  body["T_e"] = number(rep.T_e);
  body["population_perturbative"] = pop.perturbative;
  write_json(dir / "lifetime.json", body);
  announce(dir / "lifetime_population.csv");
  announce(dir / "lifetime.json");
  return kOk;
}

// ---- trapped ----------------------------------------------------------------

mdc::TrappedCrystal solve_crystal(const Context& ctx, int N) {
  if (N > 2000) throw ConfigError("crystal.N above 2000 exceeds the dense-solver cap");
  return mdc::equilibrium_positions(N);
}

int trap_solve(Context& ctx, const std::string& scan) {
  const int N = ctx.cfg.crystal.N;
  const auto c = solve_crystal(ctx, N);
  const auto prof = mdc::density_profile(N, c.K);
  const double k5 = std::pow(c.K, 0.2);
  Table t({"i", "x", "x_analytic", "n_local", "n_analytic", "x_bar", "n_bar"});
  t.comment("x in a0 = 1/n(0); x_bar, n_bar in abar = (C3/(m nu^2))^{1/5}");
  for (int i = 0; i < N; ++i) {
    double n_loc;
    if (i == 0) n_loc = 1.0 / (c.x[1] - c.x[0]);
    else if (i == N - 1) n_loc = 1.0 / (c.x[i] - c.x[i - 1]);
    else n_loc = 2.0 / (c.x[i + 1] - c.x[i - 1]);
    t.add({double(i), c.x[i], prof.inverse(i + 0.5), n_loc, prof.density(c.x[i]), c.x[i] * k5,
           n_loc / k5});
  }
  const fs::path dir = ctx.dir();
  t.write(dir / "trap_positions.csv");
  announce(dir / "trap_positions.csv");
  const auto dev = mdc::compare_to_profile(c);
  Json body;
  body["N"] = N;
  body["K"] = number(c.K);
  body["L_analytic"] = number(c.L);
  body["L_numeric"] = number(c.x[N - 1] - c.x[0]);
  body["n0_analytic"] = number(c.n0);
  body["residual"] = number(c.residual);
  body["newton_steps"] = c.iterations;
  body["profile_boundary_deviation_cells"] = number(dev.boundary_cells);
  body["profile_site_deviation_spacings"] = number(dev.site_spacings);
  if (!std::isnan(ctx.cfg.crystal.nu_kHz)) {
    const auto mol = ctx.cfg.molecule_params();
    double mu = ctx.cfg.crystal.mu_g_debye;
    if (std::isnan(mu))
      mu = std::abs(mdc::qubit_pair_params({ctx.cfg.states.g_N, ctx.cfg.states.g_M},
                                           {ctx.cfg.states.e_N, ctx.cfg.states.e_M},
                                           ctx.cfg.states.E_b, ctx.cfg.numerics.N_max)
                        .mu_g) *
           mol.mu0;
    const double dip = mu * mdc::si::debye;
    const double C3 = dip * dip / (4.0 * kPi * mdc::si::eps0);
    const double n0 = mdc::center_density_si(N, 2.0 * kPi * ctx.cfg.crystal.nu_kHz * 1e3,
                                             mol.mass * mdc::si::amu, C3);
    body["a0_m"] = number(1.0 / n0);
    body["length_m"] = number(c.L / n0);
  }
  if (!scan.empty()) {
    Table s({"N", "L_numeric", "L_analytic", "n0_numeric", "n0_analytic"});
    s.comment("fixed trap, lengths in abar = (C3/(m nu^2))^{1/5}");
    for (double v : parse_list(scan, "--N-scan")) {
      const int n = int(v);
      if (n < 2 || n > 2000 || double(n) != v) throw ConfigError("--N-scan entries in 2..2000");
      const auto cs = mdc::equilibrium_positions(n, 1.0);
      const double centre = n % 2 ? 2.0 / (cs.x[n / 2 + 1] - cs.x[n / 2 - 1])
                                  : 1.0 / (cs.x[n / 2] - cs.x[n / 2 - 1]);
      s.add({double(n), cs.x[n - 1] - cs.x[0], cs.L, centre, cs.n0});
    }
    s.write(dir / "trap_length_scan.csv");
    announce(dir / "trap_length_scan.csv");
  }
  write_json(dir / "trap_solve.json", body);
  announce(dir / "trap_solve.json");
  return kOk;
}

int trap_spectra(Context& ctx) {
  const int N = ctx.cfg.crystal.N;
  const double gamma = ctx.cfg.model.gamma, nu_perp = ctx.cfg.model.nu_perp_tilde;
  const auto c = solve_crystal(ctx, N);
  const auto exc = mdc::exciton_modes_trapped(c);
  const auto lon = mdc::phonon_modes_trapped(c, mdc::ModeKind::PhononLong, gamma);
  const auto py = mdc::phonon_modes_trapped(c, mdc::ModeKind::PhononY, gamma, nu_perp);
  const auto pz = mdc::phonon_modes_trapped(c, mdc::ModeKind::PhononZ, gamma, nu_perp);
  const double nu = c.nu_tilde(gamma);
  const int fit_count = std::max(2, N / 40);
  const double By = mdc::fit_perp_sw_B(py, nu_perp, fit_count);
  const double Bz = mdc::fit_perp_sw_B(pz, nu_perp, fit_count);

  Table e({"n", "E", "E_lw", "E_sw"});
  e.comment("E / (kappa U_dd), offset hbar omega_eg removed; n = 1 is the top of the band");
  for (int n = 1; n <= N; ++n)
    e.add({double(n), exc.values[n - 1], mdc::exciton_lw(n, N), mdc::exciton_sw(n, N)});

  Table p({"m", "omega", "omega_lw", "omega_sw", "omega_y", "omega_y_lw", "omega_y_sw",
           "omega_z", "omega_z_lw", "omega_z_sw"});
  p.comment("omega in U_dd/hbar at gamma = " + format_number(gamma) + ", nu_perp = " +
            format_number(nu_perp) + "; transverse m = 1 is the uniform mode; short-wavelength "
            "transverse lines use the fitted B");
  for (int m = 1; m <= N; ++m) {
    const int t = N - m;  // transverse modes are stored ascending
    p.add({double(m), lon.values[m - 1], mdc::phonon_long_lw(m, nu),
           mdc::phonon_long_sw(m, N, nu), py.values[t],
           mdc::phonon_perp_lw(m, N, nu_perp, gamma, 1.0),
           mdc::phonon_perp_sw(m, N, nu_perp, gamma, 1.0, By), pz.values[t],
           mdc::phonon_perp_lw(m, N, nu_perp, gamma, 3.0),
           mdc::phonon_perp_sw(m, N, nu_perp, gamma, 3.0, Bz)});
  }
  const fs::path dir = ctx.dir();
  e.write(dir / "trap_exciton_spectrum.csv");
  p.write(dir / "trap_phonon_spectrum.csv");
  Json body;
  body["N"] = N;
  body["gamma"] = number(gamma);
  body["nu_perp_tilde"] = number(nu_perp);
  body["nu_tilde"] = number(nu);
  body["exciton_top"] = number(exc.values[0]);
  body["exciton_bottom"] = number(exc.values[N - 1]);
  body["exciton_top_asymptote"] = number(2.0 * mdc::zeta3());
  body["exciton_bottom_asymptote"] = number(mdc::exciton_sw_min());
  body["exciton_trace"] = number(exc.values.sum());
  body["omega_top"] = number(lon.values[N - 1]);
  body["omega_D_homogeneous"] = number(mdc::debye_f_1d() / std::sqrt(gamma));
  body["omega_D_trap_formula"] = number(mdc::phonon_debye_trapped(N, nu));
  body["transverse_B_fit_y"] = number(By);
  body["transverse_B_fit_z"] = number(Bz);
  body["transverse_B_quoted"] = number(mdc::phonon_perp_sw_B_quoted());
  body["unstable_y"] = py.unstable;
  body["unstable_z"] = pz.unstable;
  write_json(dir / "trap_spectra.json", body);
  announce(dir / "trap_exciton_spectrum.csv");
  announce(dir / "trap_phonon_spectrum.csv");
  announce(dir / "trap_spectra.json");
  if (py.unstable || pz.unstable) throw RegimeViolation{"transverse branch unstable (zig-zag)"};
  return kOk;
}

int trap_lindemann(Context& ctx, const std::string& taus, bool soundwave, double tau_max,
                   int curve_points) {
  const int N = ctx.cfg.crystal.N;
  const auto list = parse_list(taus, "--taus");
  for (double v : list)
    if (v < 0) throw ConfigError("--taus entries must be non-negative");
  if (!(tau_max > 0) || curve_points < 2) throw ConfigError("--tau-max > 0 and --curve-points >= 2");
  const auto c = solve_crystal(ctx, N);
  const auto lon = mdc::phonon_modes_trapped(c, mdc::ModeKind::PhononLong, ctx.cfg.model.gamma);
  std::vector<std::string> cols{"xi"};
  std::vector<mdc::LindemannProfile> prof;
  for (double tau : list) {
    cols.push_back("F_tau_" + format_number(tau));
    prof.push_back(mdc::lindemann(c, lon, tau, soundwave));
  }
  Table t(cols);
  t.comment(std::string("F(xi, tau) on neighbour pairs, ") +
            (soundwave ? "sound-wave spectrum" : "exact spectrum") + ", N = " + std::to_string(N));
  for (Eigen::Index i = 0; i < prof[0].xi.size(); ++i) {
    std::vector<double> row{prof[0].xi[i]};
    for (const auto& p : prof) row.push_back(p.F[i]);
    t.add(row);
  }
  Table h({"tau", "F_h", "F_trap_center", "low_tau_limit", "high_tau_line"});
  h.comment("homogeneous F_h(tau) against the trap centre value");
  const double c_high = mdc::lindemann_high_tau_coefficient(10.0, 100.0, 19);
  const double f0 = mdc::lindemann_homogeneous(0.0);
  for (int j = 0; j < curve_points; ++j) {
    const double tau = tau_max * j / (curve_points - 1);
    h.add({tau, mdc::lindemann_homogeneous(tau), mdc::lindemann(c, lon, tau, soundwave).center(),
           f0, c_high * std::sqrt(tau)});
  }
  const fs::path dir = ctx.dir();
  t.write(dir / "trap_lindemann_profile.csv");
  h.write(dir / "trap_lindemann_center.csv");
  Json body;
  body["N"] = N;
  body["soundwave"] = soundwave;
  body["F_h_zero"] = number(f0);
  body["F_h_high_tau_coefficient"] = number(c_high);
  Json centres = Json::array();
  for (const auto& p : prof) {
    Json jc;
    jc["tau"] = number(p.tau);
    jc["F_center"] = number(p.center());
    jc["F_max"] = number(p.F.maxCoeff());
    centres.push_back(jc);
  }
  body["profiles"] = centres;
  write_json(dir / "trap_lindemann.json", body);
  announce(dir / "trap_lindemann_profile.csv");
  announce(dir / "trap_lindemann_center.csv");
  announce(dir / "trap_lindemann.json");
  return kOk;
}

// ---- stability and fidelity --------------------------------------------------

int stability(Context& ctx, bool with_crystal) {
  mdc::TrappedCrystal c;
  if (with_crystal) c = solve_crystal(ctx, ctx.cfg.crystal.N);
  const auto r = mdc::stability_report(ctx.cfg.model.gamma, ctx.cfg.model.tau,
                                       ctx.cfg.model.nu_perp_tilde, with_crystal ? &c : nullptr);
  const fs::path dir = ctx.dir();
  Json body = stability_json(r);
  body["crystal_N"] = with_crystal ? ctx.cfg.crystal.N : 0;
  write_json(dir / "stability.json", body);
  if (with_crystal) {
    Table t({"xi", "Gamma_L"});
    for (Eigen::Index i = 0; i < r.lindemann_xi.size(); ++i)
      t.add({r.lindemann_xi[i], r.lindemann_profile[i]});
    t.write(dir / "stability_lindemann.csv");
    announce(dir / "stability_lindemann.csv");
  }
  announce(dir / "stability.json");
  if (stability_failed(r)) throw RegimeViolation{"stability conditions violated"};
  return kOk;
}

Json case_json(const mdc::CaseStudyReport& r) {
  Json body;
  Json in;
  in["mu0_debye"] = number(r.in.mol.mu0);
  in["B_Hz"] = number(r.in.mol.B);
  in["mass_amu"] = number(r.in.mol.mass);
  in["g"] = label_text({r.in.g_N_rot, r.in.g_M});
  in["e"] = label_text({r.in.e_N_rot, r.in.e_M});
  in["E_b"] = number(r.in.E_b);
  in["mu_g_debye"] = number(r.in.mu_g_debye);
  in["a0_m"] = number(r.in.a0);
  in["tau"] = number(r.in.tau);
  in["N"] = r.in.N;
  in["N_surrogate"] = r.in.N_surrogate;
  in["nu_perp_Hz"] = number(r.in.nu_perp_hz);
  in["d_m"] = number(r.in.cavity.d);
  in["Gamma_c_Hz"] = number(r.in.cavity.Gamma_c);
  in["lambda_c_m"] = number(r.in.cavity.lambda_c);
  in["g_ref_Hz"] = number(r.in.cavity.g_ref);
  body["inputs"] = in;
  Json rot;
  rot["mu_g_debye"] = number(r.mu_g_computed);
  rot["kappa"] = number(r.kappa);
  rot["epsilon"] = number(r.epsilon);
  body["rotor"] = rot;
  Json sc = scales_json(r.scales);
  sc["T_lindemann_max_K"] = number(r.T_lindemann_max);
  sc["T_bound_K"] = number(r.T_bound);
  sc["nu_perp_min_Hz"] = number(r.nu_perp_min_derived);
  sc["nu_perp_min_quoted_constant_Hz"] = number(r.nu_perp_min_quoted);
  body["scales"] = sc;
  body["stability"] = stability_json(r.stability);
  Json dimless;
  dimless["I_exc"] = number(r.inhom.I_exc);
  dimless["I_phon"] = number(r.inhom.I_phon);
  dimless["I_phon_converged_m"] = r.inhom.m_converged;
  dimless["W_over_U_dd"] = number(r.inhom.W);
  body["dimensionless"] = dimless;
  Json si;
  si["length_m"] = number(r.length);
  si["length_over_lambda_c"] = number(r.coupling.length_ratio);
  si["length_ok"] = r.coupling.length_ok;
  si["N_eff"] = number(r.coupling.N_eff);
  si["W_Hz"] = number(r.W_hz);
  si["fidelity"] = fidelity_json(r.fidelity);
  si["T_G_quoted_s"] = 0.14e-6;
  body["si"] = si;
  Json alt = scales_json(r.scales_alt);
  alt["W_Hz"] = number(r.W_alt_hz);
  alt["fidelity"] = fidelity_json(r.fidelity_alt);
  body["second_set"] = alt;
  return body;
}

int finish_case(const Context& ctx, const mdc::CaseStudyReport& r, const char* file) {
  const fs::path path = ctx.dir() / file;
  write_json(path, case_json(r));
  announce(path);
  if (r.fidelity.failure) throw RegimeViolation{"gate fidelity below zero"};
  if (stability_failed(r.stability)) throw RegimeViolation{"stability conditions violated"};
  return kOk;
}

int fidelity(Context& ctx, double gN_MHz, double W_MHz) {
  const auto cav = ctx.cfg.cavity_params();
  if (!std::isnan(gN_MHz) || !std::isnan(W_MHz)) {
    if (std::isnan(gN_MHz) || std::isnan(W_MHz))
      throw ConfigError("fidelity: --gN-MHz and --W-MHz go together");
    const auto f = mdc::gate_fidelity(gN_MHz * 1e6, W_MHz * 1e6, cav.Gamma_c);
    const fs::path path = ctx.dir() / "fidelity.json";
    Json body;
    body["fidelity"] = fidelity_json(f);
    write_json(path, body);
    announce(path);
    if (f.failure) throw RegimeViolation{"gate fidelity below zero"};
    return kOk;
  }
  mdc::CaseStudyInputs in;
  const auto& c = ctx.cfg;
  in.mol = c.molecule_params();
  in.g_N_rot = c.states.g_N;
  in.g_M = c.states.g_M;
  in.e_N_rot = c.states.e_N;
  in.e_M = c.states.e_M;
  in.E_b = c.states.E_b;
  in.a0 = c.crystal.a0_nm * 1e-9;
  in.N = c.crystal.N;
  in.N_surrogate = std::min(c.numerics.N_surrogate, c.crystal.N);
  if (in.N_surrogate > 2000) throw ConfigError("numerics.N_surrogate above 2000");
  in.nu_perp_hz = c.crystal.nu_perp_kHz * 1e3;
  in.cavity = cav;
  if (std::isnan(c.crystal.mu_g_debye)) {
    const auto p = mdc::qubit_pair_params({in.g_N_rot, in.g_M}, {in.e_N_rot, in.e_M}, in.E_b,
                                          c.numerics.N_max);
    in.mu_g_debye = std::abs(p.mu_g) * in.mol.mu0;
  } else {
    in.mu_g_debye = c.crystal.mu_g_debye;
  }
  if (std::isnan(c.crystal.temperature_uK)) {
    in.tau = c.model.tau;
  } else {
    const auto s = mdc::derive_scales(in.mol, in.mu_g_debye, in.a0, 0.0, 1);
    in.tau = s.tau_of_kelvin(c.crystal.temperature_uK * 1e-6);
  }
  return finish_case(ctx, mdc::case_study_cabr(in), "fidelity.json");
}

int case_study(Context& ctx, const std::string& name) {
  if (name != "cabr") throw ConfigError("case-study: only 'cabr' is available");
  return finish_case(ctx, mdc::case_study_cabr(), "case_study_cabr.json");
}

std::string prescan_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  try {
    const std::string cfg_path = prescan_config(argc, argv);
    if (!cfg_path.empty()) ctx.cfg = load_config(cfg_path);
  } catch (const std::exception& e) {
    std::cerr << "mdcq: " << e.what() << "\n";
    return kBadConfig;
  }
  RunConfig& cfg = ctx.cfg;

  CLI::App app{"Spectra, decay rates, stability and gate fidelities of molecular dipolar crystals"};
  app.require_subcommand(1);
  std::string cfg_path;
  app.add_option("--config", cfg_path, "JSON config; flags override its values");
  app.add_option("--out", ctx.out_flag, "Output directory (default: $MDC_OUTPUT_DIR or .)");
  app.add_option("--threads", cfg.numerics.threads, "Worker threads, 0 = all cores");

  std::string g_text = std::to_string(cfg.states.g_N) + "," + std::to_string(cfg.states.g_M);
  std::string e_text = std::to_string(cfg.states.e_N) + "," + std::to_string(cfg.states.e_M);
  auto add_states = [&](CLI::App* s) {
    s->add_option("--g", g_text, "Ground state N,M_N");
    s->add_option("--e", e_text, "Excited state N,M_N");
    s->add_option("--Eb", cfg.states.E_b, "Bias field in B/mu0");
    s->add_option("--Nmax", cfg.numerics.N_max, "Rotor basis cutoff, 0 = automatic");
  };
  auto add_model = [&](CLI::App* s) {
    s->add_option("--gamma", cfg.model.gamma, "Interaction to kinetic energy ratio");
    s->add_option("--tau", cfg.model.tau, "sqrt(gamma) kB T / U_dd");
    s->add_option("--kappa", cfg.model.kappa, "Exchange strength (default: from states)");
    s->add_option("--eps", cfg.model.epsilon, "Dipole difference (default: from states)");
    s->add_option("--nu-perp", cfg.model.nu_perp_tilde, "hbar nu_perp / U_dd");
  };
  int dim = cfg.crystal.dimension;
  auto add_dim = [&](CLI::App* s) {
    s->add_option("--dim", dim, "Dimension 1 or 2")->check(CLI::IsMember({1, 2}));
    s->add_option("--points", cfg.numerics.points, "Samples along the path");
  };

  auto* rotor = app.add_subcommand("rotor", "Rigid-rotor Stark problem");
  rotor->require_subcommand(1);
  double eb_lo = 0.0, eb_hi = 6.0, find_lo = 0.5, find_hi = 6.0;
  int scan_points = 61, scan_levels = 4, scan_m = 2, spin_nmax = 14;
  std::string find_kind = "sweet";
  auto* r_scan = rotor->add_subcommand("scan", "Levels and dipoles against the bias field");
  add_states(r_scan);
  r_scan->add_option("--Eb-min", eb_lo);
  r_scan->add_option("--Eb-max", eb_hi);
  r_scan->add_option("--points", scan_points);
  r_scan->add_option("--levels", scan_levels, "Levels per M_N");
  r_scan->add_option("--M-max", scan_m);
  auto* r_pair = rotor->add_subcommand("pair", "Qubit pair parameters at one field");
  add_states(r_pair);
  auto* r_find = rotor->add_subcommand("find", "Sweet spot or magic field inside a bracket");
  add_states(r_find);
  r_find->add_option("--kind", find_kind)->check(CLI::IsMember({"sweet", "magic"}));
  r_find->add_option("--lo", find_lo);
  r_find->add_option("--hi", find_hi);
  auto* r_spin = rotor->add_subcommand("spin", "Rotor with spin-rotation coupling");
  r_spin->add_option("--Eb", cfg.states.E_b);
  r_spin->add_option("--gamma-sr-MHz", cfg.molecule.gamma_sr_MHz);
  r_spin->add_option("--B-GHz", cfg.molecule.B_GHz);
  r_spin->add_option("--Nmax", spin_nmax);

  auto* c_band = app.add_subcommand("band", "Exciton band J(k) with f(q) and g(q)");
  add_dim(c_band);
  auto* c_phonon = app.add_subcommand("phonon", "Homogeneous phonon branches");
  add_dim(c_phonon);
  add_model(c_phonon);
  double k_exc = 0.0;
  auto* c_coupling = app.add_subcommand("coupling", "Exciton-phonon matrix elements M(q,k)");
  add_dim(c_coupling);
  add_model(c_coupling);
  add_states(c_coupling);
  c_coupling->add_option("--k", k_exc, "Exciton momentum along x");
  auto* c_life = app.add_subcommand("lifetime", "Decay of the k = 0 exciton");
  c_life->add_option("--dim", dim)->check(CLI::IsMember({1, 2}));
  c_life->add_option("--points", cfg.numerics.points, "Time samples");
  c_life->add_option("--t-max", cfg.numerics.t_max, "Final time in hbar/U_dd");
  c_life->add_option("--n-grid", cfg.numerics.n_grid, "1D momentum grid");
  c_life->add_option("--grid2d", cfg.numerics.grid2d, "2D grid per side");
  add_model(c_life);
  add_states(c_life);

  auto* trap = app.add_subcommand("trap", "Harmonically confined chain");
  trap->require_subcommand(1);
  std::string n_scan, taus = "0,1,2,5,10";
  bool soundwave = false;
  double tau_max = 20.0;
  int curve_points = 41;
  auto* t_solve = trap->add_subcommand("solve", "Equilibrium positions and density");
  t_solve->add_option("--N", cfg.crystal.N);
  t_solve->add_option("--N-scan", n_scan, "Comma separated N for length and centre density");
  t_solve->add_option("--nu-kHz", cfg.crystal.nu_kHz, "Trap frequency for SI lengths");
  auto* t_spec = trap->add_subcommand("spectra", "Exciton and phonon spectra with asymptotes");
  t_spec->add_option("--N", cfg.crystal.N);
  t_spec->add_option("--gamma", cfg.model.gamma);
  t_spec->add_option("--nu-perp", cfg.model.nu_perp_tilde, "hbar nu_perp / U_dd");
  auto* t_lind = trap->add_subcommand("lindemann", "Position dependent Lindemann function");
  t_lind->add_option("--N", cfg.crystal.N);
  t_lind->add_option("--taus", taus, "Comma separated tau values for profiles");
  t_lind->add_flag("--soundwave", soundwave, "Use omega = omega_D m / N");
  t_lind->add_option("--tau-max", tau_max, "End of the centre-value curve");
  t_lind->add_option("--curve-points", curve_points);

  bool stab_crystal = false;
  auto* c_stab = app.add_subcommand("stability", "Crystal stability conditions");
  add_model(c_stab);
  c_stab->add_option("--N", cfg.crystal.N);
  c_stab->add_flag("--trapped", stab_crystal, "Profile from a trapped chain of N molecules");

  double gN_MHz = kUnset, W_MHz = kUnset;
  auto* c_fid = app.add_subcommand("fidelity", "Cavity state-transfer fidelity");
  add_states(c_fid);
  c_fid->add_option("--gN-MHz", gN_MHz, "Direct mode: collective coupling g_N/2pi");
  c_fid->add_option("--W-MHz", W_MHz, "Direct mode: decay rate W/2pi");
  c_fid->add_option("--a0-nm", cfg.crystal.a0_nm);
  c_fid->add_option("--N", cfg.crystal.N);
  c_fid->add_option("--tau", cfg.model.tau);
  c_fid->add_option("--d-um", cfg.cavity.d_um);
  c_fid->add_option("--Gamma-c-kHz", cfg.cavity.Gamma_c_kHz);
  c_fid->add_option("--lambda-c-mm", cfg.cavity.lambda_c_mm);
  c_fid->add_option("--mode", cfg.cavity.mode)->check(CLI::IsMember({"cosine", "flat"}));

  std::string case_name;
  auto* c_case = app.add_subcommand("case-study", "End-to-end worked example");
  c_case->add_option("name", case_name, "Example name (cabr)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    const auto g = parse_label(g_text, "--g");
    const auto e = parse_label(e_text, "--e");
    cfg.states.g_N = g.first;
    cfg.states.g_M = g.second;
    cfg.states.e_N = e.first;
    cfg.states.e_M = e.second;
    cfg.crystal.dimension = dim;
    validate(cfg);
    mdc::set_threads(cfg.numerics.threads);

    if (*r_scan) return rotor_scan(ctx, eb_lo, eb_hi, scan_points, scan_levels, scan_m);
    if (*r_pair) return rotor_pair(ctx);
    if (*r_find) return rotor_find(ctx, find_kind, find_lo, find_hi);
    if (*r_spin) return rotor_spin(ctx, spin_nmax);
    if (*c_band) return band(ctx, dim, cfg.numerics.points);
    if (*c_phonon) return phonon(ctx, dim, cfg.numerics.points);
    if (*c_coupling) return coupling(ctx, dim, cfg.numerics.points, k_exc);
    if (*c_life) return lifetime(ctx, dim, cfg.numerics.points);
    if (*t_solve) return trap_solve(ctx, n_scan);
    if (*t_spec) return trap_spectra(ctx);
    if (*t_lind) return trap_lindemann(ctx, taus, soundwave, tau_max, curve_points);
    if (*c_stab) return stability(ctx, stab_crystal);
    if (*c_fid) return fidelity(ctx, gN_MHz, W_MHz);
    if (*c_case) return case_study(ctx, case_name);
  } catch (const RegimeViolation& v) {
    std::cerr << "mdcq: regime violation: " << v.what << "\n";
    return kRegime;
  } catch (const ConfigError& ex) {
    std::cerr << "mdcq: " << ex.what() << "\n";
    return kBadConfig;
  } catch (const mdc::DomainError& ex) {
    std::cerr << "mdcq: " << ex.what() << "\n";
    return kBadConfig;
  } catch (const mdc::ConvergenceError& ex) {
    std::cerr << "mdcq: no convergence: " << ex.what() << "\n";
    return kNoConvergence;
  } catch (const mdc::NotFoundError& ex) {
    std::cerr << "mdcq: " << ex.what() << "\n";
    return kNoConvergence;
  } catch (const std::exception& ex) {
    std::cerr << "mdcq: " << ex.what() << "\n";
    return kNoConvergence;
  }
  return kBadConfig;
}
