#include "rlab/special.hpp"

#include <cmath>

namespace rlab {

namespace {

// Lanczos g = 7, n = 9
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx gamma_right(cplx z) {
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
  cplx t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

bool nonpositive_integer(cplx z, int& k) {
  if (z.imag() != 0.0 || z.real() > 0.0) return false;
  double r = std::round(z.real());
  if (r != z.real()) return false;
  k = static_cast<int>(-r);
  return true;
}

}  // namespace

GammaValue gamma_checked(cplx z) {
  GammaValue g;
  int k;
  if (nonpositive_integer(z, k)) {
    g.is_pole = true;
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    g.residue = (k % 2 ? -1.0 : 1.0) / f;
    return g;
  }
  g.value = gamma(z);
  return g;
}

cplx gamma(cplx z) {
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_right(1.0 - z));
  return gamma_right(z);
}

double gamma(double x) {
  int k;
  if (nonpositive_integer(cplx(x, 0.0), k)) return std::nan("");
  return std::tgamma(x);
}

cplx rgamma(cplx z) {
  int k;
  if (nonpositive_integer(z, k)) return 0.0;
  if (z.real() < 0.5) return std::sin(kPi * z) * gamma_right(1.0 - z) / kPi;
  return 1.0 / gamma_right(z);
}

cplx beta_fn(cplx a, cplx b) { return gamma(a) * gamma(b) * rgamma(a + b); }

double sphere_volume(int k) { return 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1)); }

double ball_volume(int k) { return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0); }

Laurent laurent(const std::function<cplx(cplx)>& f, cplx z0, double radius, int points) {
  cplx res = 0.0, fin = 0.0;
  for (int j = 0; j < points; ++j) {
    // offset by half a step so that real-axis points are avoided
    double th = 2.0 * kPi * (j + 0.5) / points;
    cplx e = std::polar(1.0, th);
    cplx v = f(z0 + radius * e);
    fin += v;
    res += v * radius * e;
  }
  return {res / double(points), fin / double(points)};
}

}  // namespace rlab
