#include <doctest.h>

#include <cmath>

#include "rlab/manifold.hpp"
#include "rlab/special.hpp"

using namespace rlab;

TEST_CASE("sphere area and curvature") {
  auto s = make_sphere(2, 1.0);
  CHECK(volume(s, 12) == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(enclosed_volume(s, 12) == doctest::Approx(4 * kPi / 3).epsilon(1e-12));
  double u[2] = {0.3, -0.2};
  auto fr = curvature_frame(s, 0, u);
  CHECK(fr.kappa(0) == doctest::Approx(-1.0));
  CHECK(fr.kappa(1) == doctest::Approx(-1.0));
  CHECK(fr.x.dot(fr.normal.col(0)) > 0);
}

TEST_CASE("torus principal curvatures") {
  double R = 2, r = 0.5;
  auto t = make_torus(R, r);
  CHECK(volume(t, 16) == doctest::Approx(4 * kPi * kPi * R * r).epsilon(1e-10));
  double u[2] = {0.1, 0.2};
  auto fr = curvature_frame(t, 5, u);
  auto id = intrinsic_data(t, 5, u);
  CHECK(fr.mean_curvature_scalar() == doctest::Approx(id.H).epsilon(1e-9));
  CHECK(fr.scalar_curvature() == doctest::Approx(id.sc).epsilon(1e-9));
  auto L = laplacian_invariants(fr);
  CHECK(L.lap_sc == doctest::Approx(id.lap_sc).epsilon(1e-7));
  CHECK(L.lap_h2 == doctest::Approx(id.lap_H2).epsilon(1e-7));
  CHECK(L.grad_perp_h2 == doctest::Approx(id.grad_perp_H2).epsilon(1e-7));
}

TEST_CASE("4-d ellipsoid laplacians agree between frame and intrinsic paths") {
  auto e = make_ellipsoid({1.0, 1.2, 0.9, 1.1, 0.8});
  double u[4] = {0.2, -0.3, 0.1, 0.4};
  auto fr = curvature_frame(e, 3, u);
  auto id = intrinsic_data(e, 3, u);
  auto L = laplacian_invariants(fr);
  CHECK(L.lap_sc == doctest::Approx(id.lap_sc).epsilon(1e-7));
  CHECK(L.lap_h2 == doctest::Approx(id.lap_H2).epsilon(1e-7));
  CHECK(L.lap_h == doctest::Approx(id.lap_H).epsilon(1e-7));
  CHECK(L.grad_h2 == doctest::Approx(id.grad_H2).epsilon(1e-7));
}
