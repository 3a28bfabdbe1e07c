#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rlab/continuation.hpp"
#include "rlab/oracles.hpp"
#include "rlab/residues.hpp"

using namespace rlab;

TEST_CASE("circle profile reproduces the closed form") {
  auto c = make_circle(1.0);
  auto p = distance_profile(c, Weight::of(WeightKind::One));
  for (double z : {1.0, 0.0, -0.5, -1.5, -2.5}) {
    CAPTURE(z);
    double ref = beta_sphere(2, z).real();
    CHECK(std::abs(profile_value(p, z).real() - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
  }
  double deep = beta_sphere(2, -3.7).real();
  CHECK(std::abs(profile_value(p, -3.7).real() - deep) < 1e-6 * std::abs(deep));
  CHECK(std::abs(residue_from_profile(p, -1) - 4 * kPi) < 1e-9);
  CHECK(std::abs(residue_from_profile(p, -3) - kPi / 2) < 1e-8);
  CHECK(std::abs(profile_value(p, -2.0).real()) < 1e-8);
}

TEST_CASE("profile text round trip is exact") {
  auto p = distance_profile(make_ellipse(1.0, 0.7), Weight::of(WeightKind::One));
  std::stringstream ss;
  write_profile(ss, p);
  auto q = read_profile(ss);
  for (double z : {0.3, -1.4, -2.6}) CHECK(profile_value(p, z) == profile_value(q, z));
  std::stringstream s2;
  write_profile(s2, q);
  std::stringstream s1;
  write_profile(s1, p);
  CHECK(s1.str() == s2.str());
}

TEST_CASE("pole guard") {
  auto p = distance_profile(make_circle(1.0), Weight::of(WeightKind::One));
  auto f = profile_function(p);
  CHECK_THROWS_AS(f.eval(cplx(-1.0 + 1e-4, 0.0)), PoleProximity);
  try {
    f.eval(cplx(-3.0, 0.0));
  } catch (const PoleProximity& e) {
    CHECK(e.pole == -3.0);
    CHECK(std::abs(e.residue - kPi / 2) < 1e-8);
  }
  CHECK_NOTHROW(f.eval(cplx(-1.01, 0.0)));
}

TEST_CASE("ellipse profile against direct quadrature") {
  auto e = make_ellipse(1.0, 0.6);
  auto p = distance_profile(e, Weight::of(WeightKind::One));
  for (double z : {0.5, -0.4}) {
    double d = direct_beta_ellipsoid(e, WeightKind::One, z, 48);
    CHECK(std::abs(profile_value(p, z).real() - d) < 1e-8 * std::abs(d));
  }
  auto pn = distance_profile(e, Weight::of(WeightKind::Nu));
  double d = direct_beta_ellipsoid(e, WeightKind::Nu, -0.6, 48);
  CHECK(std::abs(profile_value(pn, -0.6).real() - d) < 1e-8 * std::abs(d));
}

TEST_CASE("ball bodies") {
  auto b = make_ball(3, 1.0);
  for (double z : {0.5, -1.5, -4.5}) {
    CAPTURE(z);
    double ref = beta_ball(3, z).real();
    CHECK(std::abs(body_beta(b, z).value.real() - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
    double rr = beta_ball_relative(3, z).real();
    CHECK(std::abs(relative_beta(b, z).value.real() - rr) < 1e-8 * std::max(1.0, std::abs(rr)));
  }
  auto f = body_function(b);
  CHECK(std::abs(f.residue(-3) - 16 * kPi * kPi / 3) < 1e-8);
  CHECK(std::abs(f.residue(-4) + 4 * kPi * kPi) < 1e-8);
  CHECK(std::abs(f.residue(-6) - kPi * kPi / 3) < 1e-7);
  auto g = relative_function(b);
  CHECK(std::abs(g.residue(-3) - 8 * kPi * kPi) < 1e-8);
  CHECK(std::abs(g.residue(-4) + 4 * kPi * kPi) < 1e-8);
}

TEST_CASE("relative beta as a derivative of body betas") {
  auto b = make_ellipse(1.0, 0.8, true);
  double z = -0.7;
  double a = relative_beta(b, z).value.real();
  double fd = relative_beta_fd(b, z, 1e-3);
  CHECK(std::abs(a - fd) < 1e-5 * std::abs(a));
}

TEST_CASE("polygonal knots") {
  std::vector<Eigen::VectorXd> sq;
  for (auto [x, y] : {std::pair{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}}) {
    Eigen::VectorXd v(3);
    v << x, y, 0.0;
    sq.push_back(v);
  }
  auto f = polygon_function(sq);
  CHECK(std::abs(f.residue(-1) - 16) < 1e-12);
  CHECK(std::abs(f.residue(-2) - (-8 + 4 * kPi)) < 1e-12);
  // at z = 0 the double integral is the squared length
  CHECK(std::abs(polygon_beta(sq, 0.0).real() - 64) < 1e-9);
  CHECK(std::abs(polygon_beta(sq, 1.0).real() - f.eval(cplx(1.0, 0.0)).value.real()) < 1e-12);
}

TEST_CASE("relative local residues at a boundary point") {
  auto b = make_ellipse(1.0, 0.7, true);
  std::vector<double> u{0.3};
  double bl = relative_boundary_local_residue(b, 0, u);
  CHECK(std::abs(bl - kPi) < 1e-7);
}

TEST_CASE("local relative residue at -n varies along an ellipse") {
  auto e = make_ellipse(1.0, 0.7, true);
  auto c = make_ellipse(1.0, 1.0, true);
  double lo = 1e300, hi = -1e300;
  for (double u : {-0.9, -0.5, 0.0, 0.4}) {
    std::vector<double> uu{u};
    double v = relative_local_residue(e, 0, uu);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    CHECK(std::abs(relative_local_residue(c, 0, uu) - kPi) < 1e-7);
  }
  CHECK(hi - lo > 0.1);
}
