#include <cmath>

#include "doctest.h"
#include "mdc/fidelity.hpp"
#include "mdc/trapped.hpp"
#include "oracles.hpp"

using namespace mdc;

TEST_CASE("collective coupling of a flat mode counts every molecule") {
  CavityParams cav;
  cav.shape = ModeShape::Flat;
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(10000, -1e-4, 1e-4);
  const auto c = collective_coupling(cav, x);
  CHECK(c.N_eff == doctest::Approx(10000.0));
  CHECK(c.g_N == doctest::Approx(8e6).epsilon(1e-12));
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(100000, -1e-4, 1e-4);
  CHECK(collective_coupling(cav, y).g_N == doctest::Approx(25.3e6).epsilon(2e-3));
}

TEST_CASE("cosine mode reduces N_eff and flags long crystals") {
  CavityParams cav;
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(2001, -cav.lambda_c / 4, cav.lambda_c / 4);
  const auto c = collective_coupling(cav, x);
  // Mean of cos^2 over [-pi/4, pi/4] is 1/2 + 1/pi.
  CHECK(c.N_eff / 2001 == doctest::Approx(0.5 + 1.0 / oracle::kPi).epsilon(1e-3));
  CHECK(c.length_ok);
  const Eigen::VectorXd w = 3.0 * x;
  CHECK_FALSE(collective_coupling(cav, w).length_ok);
}

TEST_CASE("tabulated mode interpolates linearly and validates") {
  CavityParams cav;
  cav.shape = ModeShape::Tabulated;
  cav.table_x = {-1.0, 0.0, 1.0};
  cav.table_u = {0.0, 1.0, 0.5};
  CHECK(cav.u(0.5) == doctest::Approx(0.75));
  CHECK(cav.u(-2.0) == 0.0);
  cav.table_u = {0.0, 1.5, 0.5};
  CHECK_THROWS(validate(cav));
}

TEST_CASE("optimal detuning is a stationary point of the fidelity") {
  for (double W : {1e5, 2e6}) {
    const double g = 8e6, Gc = 1e4;
    const auto r = gate_fidelity(g, W, Gc);
    const double D = r.Delta_opt;
    const double h = 1e-4 * D;
    const double d = (fidelity_at(g, W, Gc, D + h) - fidelity_at(g, W, Gc, D - h)) / (2 * h);
    CHECK(std::abs(d) * D < 1e-9);
    CHECK(r.F_star == doctest::Approx(fidelity_at(g, W, Gc, D)).epsilon(1e-12));
    CHECK(fidelity_at(g, W, Gc, 0.5 * D) < r.F_star);
    CHECK(fidelity_at(g, W, Gc, 2.0 * D) < r.F_star);
    // The closed-form detuning sits 2^{1/3} above the stationary point.
    CHECK(r.Delta_star == doctest::Approx(std::cbrt(oracle::kPi * g * g * W * W / Gc)).epsilon(1e-14));
    CHECK(fidelity_at(g, W, Gc, r.Delta_star) < r.F_star);
  }
  // F* falls as W grows and rises with g_N.
  CHECK(gate_fidelity(8e6, 3e6, 1e4).F_star < gate_fidelity(8e6, 2e6, 1e4).F_star);
  CHECK(gate_fidelity(9e6, 2e6, 1e4).F_star > gate_fidelity(8e6, 2e6, 1e4).F_star);
}

TEST_CASE("gate time and degenerate limits") {
  const auto r = gate_fidelity(8e6, 2e6, 1e4);
  const double gw = 2 * oracle::kPi * 8e6;
  CHECK(r.T_G == doctest::Approx(oracle::kPi * 2 * oracle::kPi * r.Delta_star / (2 * gw * gw)));
  CHECK(r.T_G_opt == doctest::Approx(r.T_G / std::cbrt(2.0)));
  const auto z = gate_fidelity(8e6, 0.0, 1e4);
  CHECK(z.F_star == 1.0);
  CHECK(z.Delta_star == 0.0);
  CHECK(std::isinf(gate_fidelity(8e6, 1e6, 0.0).Delta_star));
  CHECK(gate_fidelity(1e3, 1e7, 1e6).failure);
}

TEST_CASE("exciton variance vanishes on an eigenmode and is non-negative") {
  const auto c = equilibrium_positions(100);
  const auto e = exciton_modes_trapped(c);
  CHECK(exciton_variance(e, e.modes.col(0)) < 1e-20);
  const Eigen::VectorXd flat = Eigen::VectorXd::Ones(100);
  const double v = exciton_variance(e, flat);
  CHECK(v >= 0.0);
  // Direct form: <H^2> - <H>^2 on the normalized vector.
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(100, 100);
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j)
      if (i != j) H(i, j) = std::pow(std::abs(c.x[i] - c.x[j]), -3);
  const Eigen::VectorXd p = flat.normalized();
  const double m1 = p.dot(H * p), m2 = (H * p).squaredNorm();
  CHECK(v == doctest::Approx(m2 - m1 * m1).epsilon(1e-10));
}

TEST_CASE("phonon integral: physical and pairwise contractions") {
  const auto c = equilibrium_positions(80);
  const auto e = exciton_modes_trapped(c);
  const auto lon = phonon_modes_trapped(c, ModeKind::PhononLong, 13.0);
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(80);
  int mc = 0;
  const double phys = phonon_integral(c, lon, u, 0.0, &mc);
  CHECK(phys > 0.0);
  CHECK(mc >= 1);
  CHECK(mc <= 80);
  // Physical contraction through the slices directly.
  const Eigen::VectorXd z = e.modes.transpose() * u.normalized();
  double ref = 0.0;
  for (int m = 1; m <= 80; ++m) ref += (coupling_slice(c, e, lon, m) * z).squaredNorm();
  CHECK(phys == doctest::Approx(ref).epsilon(1e-10));
  const double pw = phonon_integral_pairwise(c, e, lon, u, 0.0);
  CHECK(std::isfinite(pw));
  CHECK(phonon_integral(c, lon, u, 2.0) > phys);
}

TEST_CASE("inhomogeneous width combines both integrals") {
  const auto c = equilibrium_positions(80);
  const auto e = exciton_modes_trapped(c);
  const auto lon = phonon_modes_trapped(c, ModeKind::PhononLong, 13.0);
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(80);
  const auto r = inhomogeneous_W(c, e, lon, u, -2.0, 13.0, 1.0);
  CHECK(r.W == doctest::Approx(2.0 * std::sqrt(r.I_exc + r.I_phon / std::sqrt(13.0))).epsilon(1e-14));
}
