#include <cmath>
#include <random>

#include "doctest.h"
#include "mdc/homogeneous.hpp"
#include "mdc/specfun.hpp"
#include "oracles.hpp"

using namespace mdc;

TEST_CASE("1D band, phonon and coupling against direct lattice sums") {
  for (double k : {0.0, 0.4, 1.3, 2.5, 3.1}) {
    CHECK(band_1d(k) == doctest::Approx(oracle::band_direct(k)).epsilon(1e-9));
    CHECK(phonon_f_1d(k) == doctest::Approx(oracle::phonon_f_direct(k)).epsilon(1e-10));
    CHECK(std::abs(coupling_g_1d(k) - oracle::coupling_g_direct(k)) < 1e-10);
  }
}

TEST_CASE("slopes by central differences") {
  const double h = 1e-5;
  for (double k : {0.3, 1.0, 2.0, 2.9}) {
    CHECK(band_1d_slope(k) == doctest::Approx((band_1d(k + h) - band_1d(k - h)) / (2 * h)).epsilon(1e-6));
    CHECK(phonon_f_1d_slope(k) ==
          doctest::Approx((phonon_f_1d(k + h) - phonon_f_1d(k - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("band edge and width values") {
  CHECK(band_1d(0.0) == doctest::Approx(2 * zeta3()).epsilon(1e-14));
  CHECK(band_1d(oracle::kPi) == doctest::Approx(-1.5 * zeta3()).epsilon(1e-13));
  CHECK(band_width_1d() == doctest::Approx(3.5 * zeta3()).epsilon(1e-14));
  CHECK(debye_f_1d() == doctest::Approx(phonon_f_1d(oracle::kPi)).epsilon(1e-12));
  CHECK(coupling_g_1d(0.0) == 0.0);
  CHECK(std::abs(coupling_g_1d(oracle::kPi)) < 1e-13);
}

TEST_CASE("grid mean of the band equals the aliasing sum") {
  for (int n : {8, 16, 64, 1024}) {
    CHECK(band_grid_mean_1d(n) == doctest::Approx(2 * zeta3() / (double(n) * n * n)).epsilon(1e-8));
  }
}

TEST_CASE("BZ folding") {
  bool folded = false;
  CHECK(fold_bz_1d(1.0, &folded) == doctest::Approx(1.0));
  CHECK_FALSE(folded);
  CHECK(fold_bz_1d(1.0 + 2 * oracle::kPi, &folded) == doctest::Approx(1.0));
  CHECK(folded);
  const Eigen::Vector2d k0(0.7, 0.3);
  CHECK((fold_bz_2d(k0 + reciprocal_b1() - 2 * reciprocal_b2(), &folded) - k0).norm() < 1e-12);
  CHECK(folded);
  // Zone corners fold onto an equivalent corner.
  CHECK(fold_bz_2d(point_K() + reciprocal_b1()).norm() == doctest::Approx(point_K().norm()));
}

namespace {
// Explicit triangular lattice inside radius R, origin excluded.
Eigen::Matrix2Xd disc_sites(double R) {
  std::vector<Eigen::Vector2d> pts;
  const int n = int(R) + 2;
  for (int i = -2 * n; i <= 2 * n; ++i)
    for (int j = -2 * n; j <= 2 * n; ++j) {
      Eigen::Vector2d r(i + 0.5 * j, j * std::sqrt(3.0) / 2);
      const double d = r.norm();
      if (d > 0 && d <= R) pts.push_back(r);
    }
  Eigen::Matrix2Xd m(2, pts.size());
  for (std::size_t c = 0; c < pts.size(); ++c) m.col(c) = pts[c];
  return m;
}
}  // namespace

TEST_CASE("2D band at Gamma against a plain sum with continuum tail") {
  const double J0 = band_2d(default_lattice(), Eigen::Vector2d::Zero());
  CHECK(J0 == doctest::Approx(11.034).epsilon(1e-3));
  const double R = 150.0;
  const double rho = 2.0 / std::sqrt(3.0);
  const double plain = band_sites(disc_sites(R), Eigen::Vector2d::Zero()) + 2 * oracle::kPi * rho / R;
  CHECK(J0 == doctest::Approx(plain).epsilon(2e-4));
  // Away from Gamma the plain sum converges on its own.
  const auto disc = disc_sites(R);
  for (const Eigen::Vector2d k : {Eigen::Vector2d(1.0, 0.5), Eigen::Vector2d(2.5, -0.7), point_K(), point_M()})
    CHECK(std::abs(band_2d(default_lattice(), k) - band_sites(disc, k)) < 1e-4);
}

TEST_CASE("2D phonons: plain sums at a zone-interior point and acoustic limit") {
  const Eigen::Vector2d q(0.9, 0.4);
  const Eigen::Matrix2d D = dynamical_matrix_2d(default_lattice(), q);
  // The (1 - cos) kernel decays as r^-3 so a plain sum converges absolutely.
  const Eigen::Matrix2d P = dynamical_matrix_sites(disc_sites(200.0), q);
  CHECK((D - P).norm() / D.norm() < 2e-3);
  CHECK(D(0, 1) == doctest::Approx(D(1, 0)).epsilon(1e-14));
  const auto modes = phonon_spectrum_hom(2, q);
  CHECK(modes.size() == 2);
  CHECK(modes[0].f <= modes[1].f);
  CHECK(modes[1].f <= phonon_fmax_2d(default_lattice()) * 1.001);
}

TEST_CASE("chain embedded in the plane reproduces the 1D phonon") {
  Eigen::Matrix2Xd chain(2, 40000);
  for (int j = 0; j < 20000; ++j) {
    chain.col(2 * j) = Eigen::Vector2d(j + 1.0, 0.0);
    chain.col(2 * j + 1) = Eigen::Vector2d(-(j + 1.0), 0.0);
  }
  for (double q : {0.5, 2.0}) {
    const Eigen::Matrix2d D = dynamical_matrix_sites(chain, Eigen::Vector2d(q, 0.0));
    CHECK(std::sqrt(D(0, 0)) == doctest::Approx(phonon_f_1d(q)).epsilon(1e-9));
    CHECK(band_sites(chain, Eigen::Vector2d(q, 0.0)) == doctest::Approx(band_1d(q)).epsilon(1e-8));
  }
}

TEST_CASE("zig-zag constant and transverse branches") {
  CHECK(zigzag_constant() == doctest::Approx(std::sqrt(3.0) * debye_f_1d() / 2).epsilon(1e-13));
  CHECK(zigzag_constant() == doctest::Approx(6.013).epsilon(1e-3));
  const double gamma = 16.0;
  const double nu = 1.01 * zigzag_constant() / std::sqrt(gamma);
  CHECK(transverse_spectrum_hom(oracle::kPi, nu, gamma).stable());
  CHECK_FALSE(transverse_spectrum_hom(oracle::kPi, 0.99 * zigzag_constant() / std::sqrt(gamma), gamma)
                  .stable());
}

TEST_CASE("coupling vanishes at q = 0 and is odd under (eps, kappa) -> -(eps, kappa)") {
  const auto z = coupling_matrix_hom(1, Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), 0, 1.0, 0.3, 10);
  CHECK(z.M_sqrtN == std::complex<double>(0.0, 0.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d q(u(rng), 0.0), k(u(rng), 0.0);
    const double kap = u(rng), eps = u(rng);
    if (std::abs(q.x()) < 1e-3) continue;
    const auto a = coupling_matrix_hom(1, q, k, 0, kap, eps, 12.0);
    const auto b = coupling_matrix_hom(1, q, k, 0, -kap, -eps, 12.0);
    CHECK(std::abs(a.M_sqrtN + b.M_sqrtN) < 1e-14);
    // Independent assembly from the direct sums.
    const double amp = eps * oracle::coupling_g_direct(q.x()) +
                       kap * (oracle::coupling_g_direct(k.x() + q.x()) - oracle::coupling_g_direct(k.x()));
    const double ref = std::pow(12.0, -0.25) * amp / std::sqrt(oracle::phonon_f_direct(q.x()));
    CHECK(std::abs(std::abs(a.M_sqrtN) - std::abs(ref)) < 1e-8);
  }
}

TEST_CASE("band energy mirrors under the sign flip") {
  const Eigen::Vector2d k(1.1, 0.0);
  const auto a = exciton_band(1, k, 0.7, -0.2, 0.0);
  const auto b = exciton_band(1, k, -0.7, 0.2, 0.0);
  CHECK(a.E == doctest::Approx(-b.E).epsilon(1e-14));
}
