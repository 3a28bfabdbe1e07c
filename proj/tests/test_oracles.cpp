#include <cmath>

#include "doctest.h"
#include "rlab/oracles.hpp"

using namespace rlab;

TEST_CASE("sphere and ball closed forms") {
  CHECK(std::abs(beta_sphere(2, 0.0) - 4 * kPi * kPi) < 1e-12);
  CHECK(std::abs(beta_sphere(2, 1.0) - 16 * kPi) < 1e-12);
  // S^2: integral of |x-y|^z is 2^{z+2}(4pi)(2pi)... check z = 2 directly: 2 * area^2
  CHECK(std::abs(beta_sphere(3, 2.0).real() - 2 * 16 * kPi * kPi) < 1e-10);
  double r = contour_residue([](cplx z) { return beta_ball(5, z); }, -10.0);
  CHECK(std::abs(r + std::pow(kPi, 4) / 60) < 1e-12);
  // B^3 at z = 0 is vol^2
  CHECK(std::abs(beta_ball(3, 0.0).real() - std::pow(4 * kPi / 3, 2)) < 1e-12);
}

TEST_CASE("spheroid closed forms match the reduced integrals") {
  for (double a : {0.5, 0.8, 0.99, 1.0, 1.01, 1.5, 2.0, 3.0}) {
    CAPTURE(a);
    CHECK(std::abs(spheroid_gw(a) - spheroid_gw_reduced(a)) < 1e-11 * std::max(1.0, std::abs(spheroid_gw(a))));
    CHECK(std::abs(spheroid_r8(a) - spheroid_r8_reduced(a)) < 1e-11 * std::max(1.0, std::abs(spheroid_r8(a))));
  }
  CHECK(std::abs(spheroid_gw(1.0) - kPi * kPi) < 1e-12);
  CHECK(std::abs(spheroid_r8(1.0)) < 1e-12);
  CHECK(std::isnan(spheroid_r8_nu(1.0)));
  CHECK(std::abs(spheroid_t(1.0 + 1e-9) - 1.0) < 1e-9);
}

TEST_CASE("square polygon residues") {
  std::vector<Eigen::VectorXd> v;
  for (auto [x, y] : {std::pair{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}}) {
    Eigen::VectorXd p(3);
    p << x, y, 0.0;
    v.push_back(p);
  }
  auto r = polygon_knot_residues(v);
  CHECK(std::abs(r.r1 - 16) < 1e-14);
  CHECK(std::abs(r.r2 - (-8 + 4 * kPi)) < 1e-13);
  v.insert(v.begin() + 1, (v[0] + v[1]) / 2);
  CHECK_THROWS(polygon_knot_residues(v));
}
