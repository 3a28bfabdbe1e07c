#include <cmath>

#include "doctest.h"
#include "rlab/mobius.hpp"
#include "rlab/oracles.hpp"
#include "rlab/residues.hpp"

using namespace rlab;

TEST_CASE("map composition") {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
  auto inv = MobiusMap::inversion(c, 2.0);
  Eigen::VectorXd x(3);
  x << 1, 2, 2;
  CHECK((inv.apply(inv.apply(x)) - x).norm() < 1e-14);
  CHECK(inv.apply(x).norm() == doctest::Approx(4.0 / 3.0));
  CHECK(inv.conformal_factor(x) == doctest::Approx(4.0 / 9.0));
  auto m = inv.then(MobiusMap::similarity(3.0));
  CHECK(m.inversion_count() == 1);
  CHECK(m.conformal_factor(x) == doctest::Approx(4.0 / 3.0));
  CHECK(m.preserves_last_axis(3));
  Eigen::VectorXd off(3);
  off << 1, 0, 0;
  CHECK_FALSE(MobiusMap::inversion(off).preserves_last_axis(3));
  Eigen::MatrixXd notrot = Eigen::MatrixXd::Identity(3, 3) * 2.0;
  CHECK_THROWS(MobiusMap::similarity(1.0, notrot));
}

TEST_CASE("inverted spheres stay round and outward") {
  auto s = transform_spec(make_sphere(3, 0.5), MobiusMap::inversion(Eigen::VectorXd::Zero(4)));
  CHECK(s.round_radius == doctest::Approx(2.0));
  CHECK(volume(s) == doctest::Approx(2 * kPi * kPi * 8).epsilon(1e-10));
  CHECK(enclosed_volume(s) > 0.0);
}

TEST_CASE("inversion through a body is rejected") {
  CHECK_THROWS_AS(transform_spec(make_ball(3, 1.0), MobiusMap::inversion(Eigen::VectorXd::Zero(3))), GeometryError);
  Eigen::VectorXd on(3);
  on << 1, 0, 0;
  CHECK_THROWS_AS(transform_spec(make_sphere(2, 1.0), MobiusMap::inversion(on)), GeometryError);
}

TEST_CASE("curvatures under inversion") {
  // unit sphere about the origin inverted in the unit sphere centred at (0,0,-3): image radius 1/8
  Eigen::VectorXd p(3), nu(3);
  p << 0, 0, 4;
  nu << 0, 0, 1;
  auto k = transformed_curvatures({-1.0, -1.0}, p, nu, false);
  CHECK(k[0] == doctest::Approx(-8.0));
  CHECK(k[1] == doctest::Approx(-8.0));
}

TEST_CASE("second residues are Moebius invariant") {
  auto t = make_torus(2.0, 1.0);
  Eigen::VectorXd c(3);
  c << 0.0, 0.0, 3.0;
  auto r = invariance_report(t, MobiusMap::inversion(c, 1.3), "residue");
  CHECK(std::abs(r.diff) < 1e-8 * std::abs(r.before));
  auto rn = invariance_report(t, MobiusMap::inversion(c, 1.3), "nu-residue");
  CHECK(std::abs(rn.diff) < 1e-8 * std::abs(rn.before));
}
