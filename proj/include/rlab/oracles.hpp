#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rlab/special.hpp"

namespace rlab {

// Closed forms for the unit sphere S^{n-1} and the unit ball B^n.
cplx beta_sphere(int n, cplx z);
cplx beta_ball(int n, cplx z);
// relative energy of the unit ball and its boundary sphere
cplx beta_ball_relative(int n, cplx z);

// Residue of a meromorphic function at z0 by a contour average.
double contour_residue(const std::function<cplx(cplx)>& f, double z0, double radius = 0.1);

// arctan(sqrt(a^2-1))/sqrt(a^2-1) with the log branch for a < 1 and the limit 1 at a = 1
double spheroid_t(double a);

// 4-dimensional a-hyper-spheroid: closed forms
double spheroid_gw(double a);
double spheroid_r8(double a);
double spheroid_r8_nu(double a);  // NaN at a = 1 (the form has a pole there)

// the same three quantities from one-variable reduced integrals
double spheroid_gw_reduced(double a);
double spheroid_r8_reduced(double a);
double spheroid_r8_nu_reduced(double a);

// principal curvatures at theta_1 of S_a and of its image under the unit inversion
std::array<double, 4> spheroid_curvatures(double a, double theta);
std::array<double, 4> spheroid_inverted_curvatures(double a, double theta);

// pieces of the relative residue at -7 for the body between S_a and S^3_{1/2}
double spheroid_Ra_closed(double a);
double spheroid_Ra_tilde_closed(double a);

struct PolygonResidues {
  double r1 = 0.0;  // at z = -1
  double r2 = 0.0;  // at z = -2
};
PolygonResidues polygon_knot_residues(const std::vector<Eigen::VectorXd>& vertices);

// integral of f over [a, b] by composite Gauss-Legendre
double integrate_1d(const std::function<double(double)>& f, double a, double b, int panels = 16, int order = 32);

}  // namespace rlab
