#include <cmath>

#include "doctest.h"
#include "mdc/scales.hpp"
#include "mdc/specfun.hpp"
#include "oracles.hpp"

using namespace mdc;

namespace {
const MoleculeParams kCaBr{4.3, 2.8e9, 120.0, 84e6};
}

TEST_CASE("CaBr energy scale at a0 = 70 nm") {
  const auto s = derive_scales(kCaBr, 0.7, 70e-9, 0.0, 1);
  // Independent arithmetic in Gaussian-style units: U = mu^2 / (4 pi eps0 a^3).
  const double mu = 0.7 * 3.33564095198152e-30;
  const double U = mu * mu / (4 * oracle::kPi * 8.8541878128e-12 * std::pow(70e-9, 3));
  CHECK(s.U_dd == doctest::Approx(U).epsilon(1e-10));
  CHECK(s.U_dd_hz() == doctest::Approx(215e3).epsilon(0.03));
  CHECK(s.gamma == doctest::Approx(13.0).epsilon(0.05));
  const double hb = 1.054571817e-34;
  CHECK(s.gamma == doctest::Approx(120 * 1.66053906660e-27 * 70e-9 * 70e-9 * U / (hb * hb)).epsilon(1e-10));
}

TEST_CASE("gamma scales as 1/a0 and U_dd as 1/a0^3") {
  const auto a = derive_scales(kCaBr, 0.7, 70e-9, 0.0, 1);
  const auto b = derive_scales(kCaBr, 0.7, 100e-9, 0.0, 1);
  CHECK(b.gamma / a.gamma == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(b.U_dd / a.U_dd == doctest::Approx(0.343).epsilon(1e-12));
  CHECK(b.gamma == doctest::Approx(9.0).epsilon(0.05));
  CHECK(b.U_dd_hz() == doctest::Approx(75e3).epsilon(0.03));
}

TEST_CASE("scales_at_gamma inverts derive_scales") {
  const auto s = scales_at_gamma(kCaBr, 0.7, 20.0, 1e-6, 1);
  CHECK(s.gamma == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(s.tau_of_kelvin(s.to_kelvin(2.5)) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(s.to_seconds(1.0) == doctest::Approx(1.054571817e-34 / s.U_dd));
  CHECK(s.from_angular(s.to_angular(0.3)) == doctest::Approx(0.3));
}

TEST_CASE("k_B T = U_dd / sqrt(gamma) is about 3 uK for CaBr") {
  const auto s = derive_scales(kCaBr, 0.7, 70e-9, 0.0, 1);
  CHECK(s.to_kelvin(1.0) == doctest::Approx(3e-6).epsilon(0.05));
  CHECK(s.to_kelvin(2.0 * std::sqrt(s.gamma)) == doctest::Approx(20e-6).epsilon(0.05));
}

TEST_CASE("density constant normalizes the profile") {
  const double integral =
      oracle::simpson([](double t) { return std::pow(std::cos(t), 5.0 / 3.0); }, -oracle::kPi / 2,
                      oracle::kPi / 2, 20000);
  CHECK(trap_lambda() == doctest::Approx(2.0 / integral).epsilon(1e-9));
  CHECK(std::abs(trap_lambda() - 1.190) < 0.005);
}

TEST_CASE("trap frequency relation gamma nu^2 L^2 = 32 zeta3") {
  for (int N : {10, 800, 10000}) {
    const double g = 13.0;
    const double nu = trap_frequency_relation(g, N);
    const double L = trap_lambda() * N;
    CHECK(g * nu * nu * L * L == doctest::Approx(32 * zeta3()).epsilon(1e-12));
  }
}

TEST_CASE("spin-flip estimate is a small rate") {
  MoleculeParams m = kCaBr;
  m.gamma_sr = 0.03 * m.B;
  const double r = spin_flip_rate_estimate(m, 50e-9);
  CHECK(r > 1.0);
  CHECK(r < 1e3);
  CHECK(spin_flip_rate_estimate(m, 100e-9) == doctest::Approx(r / 64).epsilon(1e-12));
}

TEST_CASE("validation") {
  CHECK_THROWS(derive_scales({0.0, 1e9, 100, 0}, 0.5, 1e-7, 0, 1));
  CHECK_THROWS(derive_scales(kCaBr, 0.0, 1e-7, 0, 1));
  CHECK_THROWS(derive_scales(kCaBr, 0.5, -1e-7, 0, 1));
  CHECK_THROWS(derive_scales(kCaBr, 0.5, 1e-7, 0, 3));
}
