#pragma once

#include <complex>
#include <functional>

namespace rlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

struct GammaValue {
  bool is_pole = false;
  cplx value{0.0, 0.0};
  double residue = 0.0;  // (-1)^k / k! at z = -k
};

cplx gamma(cplx z);
GammaValue gamma_checked(cplx z);
double gamma(double x);

// 1/Gamma(z), entire
cplx rgamma(cplx z);

cplx beta_fn(cplx a, cplx b);

// volume of the unit k-sphere and of the unit k-ball
double sphere_volume(int k);
double ball_volume(int k);

struct Laurent {
  cplx residue;
  cplx finite_part;
};

// Coefficients a_{-1} and a_0 of f around z0 from the trapezoid rule on a circle.
Laurent laurent(const std::function<cplx(cplx)>& f, cplx z0, double radius = 0.25, int points = 64);

}  // namespace rlab
