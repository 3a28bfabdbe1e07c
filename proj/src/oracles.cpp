#include "rlab/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rlab/quadrature.hpp"

namespace rlab {

cplx beta_sphere(int n, cplx z) {
  if (n < 2) throw std::invalid_argument("beta_sphere: n >= 2");
  return std::pow(cplx(2.0), z + double(n - 2)) * sphere_volume(n - 1) * sphere_volume(n - 2) *
         beta_fn((z + double(n - 1)) / 2.0, (n - 1) / 2.0);
}

cplx beta_ball(int n, cplx z) {
  if (n < 2) throw std::invalid_argument("beta_ball: n >= 2");
  return std::pow(cplx(2.0), z + double(n)) * sphere_volume(n - 1) * sphere_volume(n - 2) /
         (double(n - 1) * (z + double(n))) * beta_fn((z + double(n + 1)) / 2.0, (n + 1) / 2.0);
}

cplx beta_ball_relative(int n, cplx z) {
  if (n < 2) throw std::invalid_argument("beta_ball_relative: n >= 2");
  return std::pow(cplx(2.0), z + double(n - 1)) * (z + 2.0 * n) * sphere_volume(n - 1) * sphere_volume(n - 2) /
         (double(n - 1) * (z + double(n))) * beta_fn((z + double(n + 1)) / 2.0, (n + 1) / 2.0);
}

double contour_residue(const std::function<cplx(cplx)>& f, double z0, double radius) {
  return laurent(f, cplx(z0, 0.0), radius, 128).residue.real();
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, int panels, int order) {
  Rule1D g = gauss_legendre(order, -1.0, 1.0);
  std::vector<double> parts;
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h, c = lo + 0.5 * h;
    for (int k = 0; k < order; ++k) parts.push_back(0.5 * h * g.w[k] * f(c + 0.5 * h * g.x[k]));
  }
  return pairwise_sum(parts);
}

namespace {

// power series in u = a^2 - 1, truncated
using Series = std::vector<double>;
constexpr int kTerms = 48;

Series poly_in_a2(const std::vector<double>& c) {
  // c[k] multiplies a^{2k}; (1 + u)^k expanded
  Series s(kTerms, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    double b = 1.0;
    for (std::size_t j = 0; j <= k && j < kTerms; ++j) {
      s[j] += c[k] * b;
      b = b * double(k - j) / double(j + 1);
    }
  }
  return s;
}

Series t_series() {
  Series s(kTerms);
  for (int k = 0; k < kTerms; ++k) s[k] = (k % 2 ? -1.0 : 1.0) / (2.0 * k + 1.0);
  return s;
}

Series mul(const Series& a, const Series& b) {
  Series r(kTerms, 0.0);
  for (int i = 0; i < kTerms; ++i)
    for (int j = 0; i + j < kTerms; ++j) r[i + j] += a[i] * b[j];
  return r;
}

double eval(const Series& s, double u) {
  double r = 0.0;
  for (int k = kTerms - 1; k >= 0; --k) r = r * u + s[k];
  return r;
}

// (P(a^2) + Q(a^2) T) / u near u = 0, where the constant term cancels
double removable(const std::vector<double>& P, const std::vector<double>& Q, double u) {
  Series num = poly_in_a2(P);
  Series qt = mul(poly_in_a2(Q), t_series());
  for (int k = 0; k < kTerms; ++k) num[k] += qt[k];
  Series shifted(kTerms, 0.0);
  for (int k = 1; k < kTerms; ++k) shifted[k - 1] = num[k];
  return eval(shifted, u);
}

double direct(const std::vector<double>& P, const std::vector<double>& Q, double a) {
  double a2 = a * a, p = 0.0, q = 0.0;
  for (int k = static_cast<int>(P.size()) - 1; k >= 0; --k) p = p * a2 + P[k];
  for (int k = static_cast<int>(Q.size()) - 1; k >= 0; --k) q = q * a2 + Q[k];
  return (p + q * spheroid_t(a)) / (a2 - 1.0);
}

double bracket(const std::vector<double>& P, const std::vector<double>& Q, double a) {
  double u = a * a - 1.0;
  if (std::abs(u) < 0.05) return removable(P, Q, u);
  return direct(P, Q, a);
}

void check_a(double a) {
  if (!(a > 0)) throw std::invalid_argument("spheroid: a must be positive");
}

}  // namespace

double spheroid_t(double a) {
  check_a(a);
  double u = a * a - 1.0;
  if (u == 0.0) return 1.0;
  if (std::abs(u) < 1e-3) return eval(t_series(), u);
  if (u > 0) {
    double s = std::sqrt(u);
    return std::atan(s) / s;
  }
  double s = std::sqrt(-u);
  return std::atanh(s) / s;
}

double spheroid_gw(double a) {
  check_a(a);
  // coefficients in powers of a^2
  const std::vector<double> P = {-128, -16, -2376, -7778, 10613};
  const std::vector<double> Q = {0, 0, 0, 0, 4725.0 * (-16.0 / 15.0), 4725.0};
  return kPi * kPi / (17920.0 * std::pow(a, 6)) * bracket(P, Q, a);
}

double spheroid_r8(double a) {
  check_a(a);
  const std::vector<double> P = {-256, 1648, -2232, -1346, 1241};
  const std::vector<double> Q = {0, 0, 0, 0, -1575.0 * (-8.0 / 5.0), -1575.0};
  return std::pow(kPi, 4) / (40320.0 * std::pow(a, 6)) * bracket(P, Q, a);
}

double spheroid_r8_nu(double a) {
  check_a(a);
  if (a == 1.0) return std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> P = {-16, -24, -50, 105};
  const std::vector<double> Q = {0, 0, 0, -105.0 * (-8.0 / 7.0), -105.0};
  return std::pow(kPi, 4) / (384.0 * std::pow(a, 4)) * direct(P, Q, a);
}

double spheroid_gw_reduced(double a) {
  check_a(a);
  auto f = [a](double t) {
    double s = std::sin(t), c = std::cos(t), A = a * a * s * s + c * c, u = a * a - 1.0;
    double br = 9 * u * u * s * s * c * c * (A + 1) * (A + 1) +
                135.0 / 16.0 * a * a * (A + 3) * (A + 1.0 / 3.0) * (A + 1.0 / 3.0) * (A - 0.2);
    return a * a / std::pow(A, 6) * br * std::sqrt(A) * s * s * s;
  };
  return 2 * kPi * kPi / 128.0 * integrate_1d(f, 0.0, kPi);
}

double spheroid_r8_reduced(double a) {
  check_a(a);
  auto f = [a](double t) {
    double s = std::sin(t), c = std::cos(t), A = a * a * s * s + c * c, u = a * a - 1.0;
    double a2 = a * a, a4 = a2 * a2, a6 = a4 * a2, c2 = c * c;
    double br = u * u * (5 * a2 - 8) * c2 * c2 * c2 + (-15 * a6 + 22 * a4 - 55 * a2 + 48) * c2 * c2 +
                (15 * a6 + 10 * a4 + 31 * a2 - 8) * c2 - 5 * a6 - 14 * a4 + 3 * a2;
    return 3 * a2 * u * u * s * s / std::pow(A, 6) * br * std::sqrt(A) * s * s * s;
  };
  return std::pow(kPi, 4) / 768.0 * integrate_1d(f, 0.0, kPi);
}

double spheroid_r8_nu_reduced(double a) {
  check_a(a);
  auto f = [a](double t) {
    double s = std::sin(t), c = std::cos(t), A = a * a * s * s + c * c, u = a * a - 1.0;
    double a2 = a * a, a4 = a2 * a2, a6 = a4 * a2, a8 = a4 * a4, a10 = a8 * a2, c2 = c * c;
    double br = std::pow(u, 4) * (105 * a2 - 120) * std::pow(c2, 4) -
                4 * std::pow(u, 3) * (105 * a4 - 33 * a2 + 66) * std::pow(c2, 3) +
                6 * u * u * (105 * a6 + 54 * a4 + 85 * a2 - 44) * c2 * c2 -
                (420 * a10 + 144 * a8 - 336 * a6 - 408 * a4 + 300 * a2 - 120) * c2 +
                a2 * (105 * a8 + 228 * a6 - 18 * a4 + 84 * a2 - 15);
    return a2 / std::pow(A, 6) * br * std::sqrt(A) * s * s * s;
  };
  return std::pow(kPi, 4) / 768.0 * integrate_1d(f, 0.0, kPi);
}

std::array<double, 4> spheroid_curvatures(double a, double t) {
  double s = std::sin(t), c = std::cos(t), A = a * a * s * s + c * c;
  double k1 = -a / std::pow(A, 1.5), k2 = -a / std::sqrt(A);
  return {k1, k2, k2, k2};
}

std::array<double, 4> spheroid_inverted_curvatures(double a, double t) {
  double s2 = std::sin(t) * std::sin(t), c2 = std::cos(t) * std::cos(t), A = a * a * s2 + c2;
  double k1 = -((2 * a * a - 1) * s2 + (2 - a * a) * c2) / std::pow(A, 1.5) * a;
  double k2 = -(-(a * a - 1) * c2 + 1) / std::sqrt(A) * a;
  return {k1, k2, k2, k2};
}

double spheroid_Ra_closed(double a) {
  double a2 = a * a;
  return 5 * (7 * a2 * a2 + 2 * a2 - 1) * kPi / (16 * a2 * a2);
}

double spheroid_Ra_tilde_closed(double a) {
  double a2 = a * a;
  return (13 * std::pow(a, 10) + 153 * std::pow(a, 8) + 138 * std::pow(a, 6) + 18 * std::pow(a, 4) - 7 * a2 + 5) *
         kPi / (16 * a2 * a2 * std::pow(a2 + 1, 3));
}

PolygonResidues polygon_knot_residues(const std::vector<Eigen::VectorXd>& v) {
  const std::size_t k = v.size();
  if (k < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
  PolygonResidues r;
  double len = 0.0, sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const Eigen::VectorXd& p = v[j];
    Eigen::VectorXd a = v[(j + k - 1) % k] - p, b = v[(j + 1) % k] - p;
    len += b.norm();
    if (a.norm() == 0.0 || b.norm() == 0.0) throw std::invalid_argument("polygon: repeated vertex");
    double cs = a.dot(b) / (a.norm() * b.norm());
    cs = std::max(-1.0, std::min(1.0, cs));
    double th = std::acos(cs);
    if (kPi - th < 1e-12) throw std::invalid_argument("polygon: collinear adjacent edges at vertex " + std::to_string(j));
    if (th < 1e-12) throw std::invalid_argument("polygon: edge folds back at vertex " + std::to_string(j));
    sum += (kPi - th) / std::sin(th);
  }
  r.r1 = 2.0 * len;
  r.r2 = -2.0 * double(k) + 2.0 * sum;
  return r;
}

}  // namespace rlab
