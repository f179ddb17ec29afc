#include "mdc/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mdc/error.hpp"
#include "mdc/parallel.hpp"
#include "mdc/quadrature.hpp"
#include "mdc/specfun.hpp"

namespace mdc {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

double window(double r, double R, double s) { return 0.5 * std::erfc((r - R) / s); }

double j0(double x) { return std::cyl_bessel_j(0.0, x); }
double j1(double x) { return std::cyl_bessel_j(1.0, x); }
double j2(double x) { return std::cyl_bessel_j(2.0, x); }

// int_0^y J0 = 2 sum_k J_{2k+1}(y), with the J_n from Miller's backward
// recurrence normalized by J0 + 2 sum J_{2k} = 1.
double integral_j0(double y) {
  if (y <= 0.0) return 0.0;
  int top = int(y + 30.0 + 6.0 * std::sqrt(y));
  top += top % 2;
  double next = 0.0, cur = 1e-300, even = 0.0, odd = 0.0;
  for (int n = top; n >= 1; --n) {
    const double prev = 2.0 * n / y * cur - next;
    next = cur;
    cur = prev;  // J_{n-1}
    if ((n - 1) % 2 == 0) even += (n - 1 == 0 ? 1.0 : 2.0) * cur;
    else odd += cur;
    if (std::abs(cur) > 1e250) {
      next *= 1e-250;
      cur *= 1e-250;
      even *= 1e-250;
      odd *= 1e-250;
    }
  }
  return 2.0 * odd / even;
}

// int_b^inf J0(k r)/r^2 dr, through int J0/x^2 = J0/y - 1 + int_0^y J0 - J1.
double bessel_tail_j0_r2(double k, double b) {
  const double y = k * b;
  if (y < 1e-8) return 1.0 / b;
  const double int_j0 = integral_j0(y);
  return k * (j0(y) / y - 1.0 + int_j0 - j1(y));
}

}  // namespace

double band_1d(double k) { return 2.0 * polylog_circle(3, k).re; }

double band_1d_slope(double k) { return -2.0 * polylog_circle(2, k).im; }

double phonon_f_1d(double q) {
  const double d = -polylog_circle_delta(5, q).real();  // zeta5 - Re Li5 >= 0
  return std::sqrt(24.0 * std::max(0.0, d));
}

double phonon_f_1d_slope(double q) {
  const double qq = fold_phase(q);
  if (qq == 0.0) return std::sqrt(12.0 * zeta3());
  return 12.0 * polylog_circle(4, qq).im / phonon_f_1d(qq);
}

double coupling_g_1d(double q) { return 3.0 * kSqrt2 * polylog_circle(4, q).im; }

double band_width_1d() { return 3.5 * zeta3(); }

double debye_f_1d() { return std::sqrt(93.0 * zeta5() / 2.0); }

double fold_bz_1d(double k, bool* folded) {
  const bool out = k < -kPi || k > kPi;
  if (folded) *folded = out;
  return out ? fold_phase(k) : k;
}

double band_grid_mean_1d(int n) {
  require(n >= 2, "band_grid_mean_1d: n must be >= 2");
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += band_1d(2.0 * kPi * j / n - kPi);
  return s / n;
}

Lattice2D triangular_lattice(double R, double s) {
  require(R > 8.0 * s && s > 0, "triangular_lattice: need R > 8 s > 0");
  Lattice2D lat;
  lat.R = R;
  lat.s = s;
  lat.rho = 2.0 / kSqrt3;
  const double rmax = R + 8.0 * s;
  const int n = static_cast<int>(std::ceil(rmax / (kSqrt3 / 2.0))) + 1;
  std::vector<Eigen::Vector2d> pts;
  for (int j = -n; j <= n; ++j)
    for (int i = -2 * n; i <= 2 * n; ++i) {
      if (i == 0 && j == 0) continue;
      const Eigen::Vector2d r(i + 0.5 * j, 0.5 * kSqrt3 * j);
      if (r.norm() < rmax) pts.push_back(r);
    }
  lat.r.resize(2, static_cast<Eigen::Index>(pts.size()));
  lat.dist.resize(lat.r.cols());
  lat.w.resize(lat.r.cols());
  for (Eigen::Index i = 0; i < lat.r.cols(); ++i) {
    lat.r.col(i) = pts[i];
    lat.dist[i] = pts[i].norm();
    lat.w[i] = window(lat.dist[i], R, s);
  }
  lat.w_r3 = lat.w.array() / lat.dist.array().cube();
  lat.w_r5 = lat.w_r3.array() / lat.dist.array().square();
  return lat;
}

const Lattice2D& default_lattice() {
  static const Lattice2D lat = triangular_lattice();
  return lat;
}

Eigen::Vector2d reciprocal_b1() { return 2.0 * kPi * Eigen::Vector2d(1.0, -1.0 / kSqrt3); }
Eigen::Vector2d reciprocal_b2() { return 2.0 * kPi * Eigen::Vector2d(0.0, 2.0 / kSqrt3); }
Eigen::Vector2d point_K() { return {4.0 * kPi / 3.0, 0.0}; }
Eigen::Vector2d point_M() { return {kPi, kPi / kSqrt3}; }

Eigen::Vector2d fold_bz_2d(const Eigen::Vector2d& k, bool* folded) {
  Eigen::Matrix2d B;
  B.col(0) = reciprocal_b1();
  B.col(1) = reciprocal_b2();
  const Eigen::Vector2d uv = B.partialPivLu().solve(k);
  const Eigen::Vector2d base = k - B * uv.array().round().matrix();
  Eigen::Vector2d best = base;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) {
      const Eigen::Vector2d c = base - a * B.col(0) - b * B.col(1);
      if (c.norm() < best.norm() - 1e-12) best = c;
    }
  if (folded) *folded = (best - k).norm() > 1e-12;
  return best;
}

double band_2d(const Lattice2D& lat, const Eigen::Vector2d& k) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lat.r.cols(); ++i) s += lat.w_r3[i] * std::cos(k.dot(lat.r.col(i)));
  const double kn = k.norm();
  const double a = lat.R - 8.0 * lat.s, b = lat.R + 8.0 * lat.s;
  auto inner = [&](double r) { return (1.0 - window(r, lat.R, lat.s)) * j0(kn * r) / (r * r); };
  const double tail = integrate(inner, a, b, 1e-15, 1e-13).value + bessel_tail_j0_r2(kn, b);
  return s + 2.0 * kPi * lat.rho * tail;
}

Eigen::Matrix2d dynamical_matrix_sites(const Eigen::Matrix2Xd& r, const Eigen::Vector2d& q) {
  Eigen::Matrix2d D = Eigen::Matrix2d::Zero();
  for (Eigen::Index i = 0; i < r.cols(); ++i) {
    const double d = r.col(i).norm();
    const Eigen::Vector2d u = r.col(i) / d;
    const double c = (1.0 - std::cos(q.dot(r.col(i)))) / std::pow(d, 5);
    D += c * (5.0 * u * u.transpose() - Eigen::Matrix2d::Identity());
  }
  return 3.0 * D;
}

double band_sites(const Eigen::Matrix2Xd& r, const Eigen::Vector2d& k) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < r.cols(); ++i) s += std::cos(k.dot(r.col(i))) / std::pow(r.col(i).norm(), 3);
  return s;
}

// Radial continuum integrals beyond the window. The oscillatory Bessel parts
// are integrated over 16 periods past b; what is left is bounded by
// sqrt(2/(pi q B)) B^{1-p}/(p-1) for an r^{-p} envelope and is dropped.
struct RadialTail {
  double a, b, B;
};

RadialTail radial_tail(const Lattice2D& lat, double qn) {
  const double a = lat.R - 8.0 * lat.s, b = lat.R + 8.0 * lat.s;
  return {a, b, b + std::min(1e7, 32.0 * kPi / qn)};
}

Eigen::Matrix2d dynamical_matrix_2d(const Lattice2D& lat, const Eigen::Vector2d& q) {
  // (5 rr/r^2 - I) summed as xx, yy, xy moments.
  double sxx = 0.0, syy = 0.0, sxy = 0.0, s0 = 0.0;
  for (Eigen::Index i = 0; i < lat.r.cols(); ++i) {
    const double x = lat.r(0, i), y = lat.r(1, i), d2 = lat.dist[i] * lat.dist[i];
    const double c = lat.w_r5[i] * (1.0 - std::cos(q.x() * x + q.y() * y));
    s0 += c;
    sxx += c * x * x / d2;
    syy += c * y * y / d2;
    sxy += c * x * y / d2;
  }
  Eigen::Matrix2d D;
  D << 5.0 * sxx - s0, 5.0 * sxy, 5.0 * sxy, 5.0 * syy - s0;
  D *= 3.0;
  const double qn = q.norm();
  if (qn == 0.0) return D;
  const RadialTail t = radial_tail(lat, qn);
  auto cw = [&](double r) { return 1.0 - window(r, lat.R, lat.s); };
  auto iso = [&](double r) { return (1.0 - j0(qn * r)) / std::pow(r, 4); };
  auto aniso = [&](double r) { return j2(qn * r) / std::pow(r, 4); };
  const double t_iso = integrate([&](double r) { return cw(r) * iso(r); }, t.a, t.b, 1e-13, 1e-11).value +
                       integrate(iso, t.b, t.B, 1e-13, 1e-11, 8000).value + 1.0 / (3.0 * std::pow(t.B, 3));
  const double t_an = integrate([&](double r) { return cw(r) * aniso(r); }, t.a, t.b, 1e-13, 1e-11).value +
                      integrate(aniso, t.b, t.B, 1e-13, 1e-11, 8000).value;
  const Eigen::Vector2d qh = q / qn;
  const Eigen::Matrix2d P = 2.0 * qh * qh.transpose() - Eigen::Matrix2d::Identity();
  D += 6.0 * kPi * lat.rho * (1.5 * t_iso * Eigen::Matrix2d::Identity() + 2.5 * t_an * P);
  return D;
}

Eigen::Vector2d coupling_vector_2d(const Lattice2D& lat, const Eigen::Vector2d& q) {
  Eigen::Vector2d G = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < lat.r.cols(); ++i)
    G += lat.w_r5[i] * std::sin(q.dot(lat.r.col(i))) * lat.r.col(i);
  const double qn = q.norm();
  if (qn > 0.0) {
    const RadialTail t = radial_tail(lat, qn);
    auto f = [&](double r) { return j1(qn * r) / (r * r * r); };
    const double v =
        integrate([&](double r) { return (1.0 - window(r, lat.R, lat.s)) * f(r); }, t.a, t.b, 1e-13, 1e-11)
            .value +
        integrate(f, t.b, t.B, 1e-13, 1e-11, 8000).value;
    G += 2.0 * kPi * lat.rho * v * q / qn;
  }
  return 3.0 / kSqrt2 * G;
}

BandSample exciton_band(int dim, const Eigen::Vector2d& k, double kappa, double epsilon,
                        double omega_eg, bool* folded) {
  require(dim == 1 || dim == 2, "exciton_band: dimension must be 1 or 2");
  BandSample b;
  if (dim == 1) {
    b.k = Eigen::Vector2d(fold_bz_1d(k.x(), folded), 0.0);
    b.J = band_1d(b.k.x());
    b.E = omega_eg + epsilon * 2.0 * zeta3() + kappa * b.J;
  } else {
    b.k = fold_bz_2d(k, folded);
    b.J = band_2d(default_lattice(), b.k);
    static const double J0 = band_2d(default_lattice(), Eigen::Vector2d::Zero());
    b.E = omega_eg + epsilon * J0 + kappa * b.J;
  }
  return b;
}

std::vector<PhononMode> phonon_spectrum_hom(int dim, const Eigen::Vector2d& q,
                                            const std::vector<PhononMode>* prev) {
  require(dim == 1 || dim == 2, "phonon_spectrum_hom: dimension must be 1 or 2");
  if (dim == 1) {
    PhononMode m;
    m.q = Eigen::Vector2d(q.x(), 0.0);
    m.f = phonon_f_1d(q.x());
    return {m};
  }
  const Eigen::Matrix2d D = dynamical_matrix_2d(default_lattice(), q);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(D);
  std::vector<PhononMode> out(2);
  for (int l = 0; l < 2; ++l) {
    const double ev = es.eigenvalues()[l];
    if (ev < -1e-10) throw ConvergenceError("phonon_spectrum_hom: negative eigenvalue");
    out[l].q = q;
    out[l].branch = l;
    out[l].f = std::sqrt(std::max(0.0, ev));
    Eigen::Vector2d e = es.eigenvectors().col(l);
    if (e.x() < 0 || (e.x() == 0 && e.y() < 0)) e = -e;
    out[l].polarization = e;
  }
  if (prev && prev->size() == 2 && std::abs(out[1].f - out[0].f) < 1e-9) {
    const Eigen::Vector2d p0 = (*prev)[0].polarization;
    if (std::abs(p0.dot(out[1].polarization)) > std::abs(p0.dot(out[0].polarization)))
      std::swap(out[0].polarization, out[1].polarization);
  }
  return out;
}

double phonon_fmax_2d(const Lattice2D& lat, int grid) {
  // Irreducible wedge Gamma-M-K; the maximum sits on its boundary but the
  // whole wedge is sampled.
  const Eigen::Vector2d M = point_M(), K = point_K();
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid - i; ++j) pts.push_back((i * M + j * K) / grid);
  std::vector<double> fmax(pts.size());
  parallel_for(pts.size(), [&](std::size_t n) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(dynamical_matrix_2d(lat, pts[n]),
                                                      Eigen::EigenvaluesOnly);
    fmax[n] = std::sqrt(std::max(0.0, es.eigenvalues()[1]));
  });
  auto it = std::max_element(fmax.begin(), fmax.end());
  Eigen::Vector2d best = pts[it - fmax.begin()];
  double fbest = *it;
  // Pattern search polish around the best grid point.
  double h = (K.norm() / grid);
  while (h > 1e-6) {
    bool moved = false;
    for (const Eigen::Vector2d& d :
         {Eigen::Vector2d(h, 0), Eigen::Vector2d(-h, 0), Eigen::Vector2d(0, h), Eigen::Vector2d(0, -h)}) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(dynamical_matrix_2d(lat, best + d),
                                                        Eigen::EigenvaluesOnly);
      const double f = std::sqrt(std::max(0.0, es.eigenvalues()[1]));
      if (f > fbest) {
        fbest = f;
        best += d;
        moved = true;
        break;
      }
    }
    if (!moved) h *= 0.5;
  }
  return fbest;
}

TransverseFreq transverse_spectrum_hom(double q, double nu_perp, double gamma) {
  require(gamma > 0, "transverse_spectrum_hom: gamma must be positive");
  require(nu_perp >= 0, "transverse_spectrum_hom: nu_perp must be non-negative");
  const double f = phonon_f_1d(q);
  const double base = f * f / (4.0 * gamma);
  return {nu_perp * nu_perp - base, nu_perp * nu_perp - 3.0 * base};
}

double zigzag_constant() { return std::sqrt(279.0 * zeta5() / 8.0); }

CouplingElement coupling_matrix_hom(int dim, const Eigen::Vector2d& q, const Eigen::Vector2d& k,
                                    int branch, double kappa, double epsilon, double gamma) {
  require(gamma > 0, "coupling_matrix_hom: gamma must be positive");
  require(dim == 1 || dim == 2, "coupling_matrix_hom: dimension must be 1 or 2");
  CouplingElement c;
  c.q = q;
  c.k = k;
  c.branch = branch;
  if (q.norm() == 0.0) return c;
  const double pre = std::pow(gamma, -0.25);
  if (dim == 1) {
    require(branch == 0, "coupling_matrix_hom: 1D has a single branch");
    const double f = phonon_f_1d(q.x());
    c.g_q = coupling_g_1d(q.x());
    const double amp = epsilon * c.g_q + kappa * (coupling_g_1d(k.x() + q.x()) - coupling_g_1d(k.x()));
    c.M_sqrtN = std::complex<double>(0.0, pre * amp / std::sqrt(f));
    return c;
  }
  require(branch == 0 || branch == 1, "coupling_matrix_hom: 2D branch must be 0 or 1");
  const auto modes = phonon_spectrum_hom(2, q);
  const Eigen::Vector2d e = modes[branch].polarization;
  const Lattice2D& lat = default_lattice();
  const Eigen::Vector2d Gq = coupling_vector_2d(lat, q);
  c.g_q = Gq.dot(e);
  const double amp =
      epsilon * c.g_q + kappa * (coupling_vector_2d(lat, k + q) - coupling_vector_2d(lat, k)).dot(e);
  c.M_sqrtN = std::complex<double>(0.0, pre * amp / std::sqrt(modes[branch].f));
  return c;
}

}  // namespace mdc
