#include <cmath>

#include "doctest.h"
#include "rlab/oracles.hpp"
#include "rlab/residues.hpp"

using namespace rlab;

TEST_CASE("closed residues of round spheres") {
  auto c = closed_residues(make_circle(1.0));
  CHECK(std::abs(c.value(-1) - 4 * kPi) < 1e-12);
  CHECK(std::abs(c.value(-3, "closed") - kPi / 2) < 1e-12);
  auto s = closed_residues(make_sphere(2, 1.0));
  CHECK(std::abs(s.value(-2) - 8 * kPi * kPi) < 1e-10);
  CHECK(std::abs(s.value(-4, "closed")) < 1e-12);
}

TEST_CASE("local second residues and curvature") {
  auto s2 = make_sphere(2, 1.0);
  auto fr = curvature_frame(s2, 0, std::vector<double>{0.2, -0.3});
  CHECK(std::abs(scalar_from_residues(fr) - 2.0) < 1e-8);
  CHECK(std::abs(meansq_from_residues(fr) - 4.0) < 1e-8);
  auto e = make_ellipsoid({1.0, 1.3, 0.8});
  auto fe = curvature_frame(e, 2, std::vector<double>{0.1, 0.35});
  auto loc = local_residues_second(fe);
  CHECK(std::abs(graph_local_residue(fe, 1, WeightKind::One) - loc.R) < 1e-8);
  CHECK(std::abs(graph_local_residue(fe, 1, WeightKind::Nu) - loc.Rnu) < 1e-8);
  CHECK(std::abs(graph_local_residue(fe, 0, WeightKind::One) - 2 * kPi) < 1e-12);
  CHECK(std::abs(scalar_from_residues(fe) - fe.scalar_curvature()) < 1e-8);
}

TEST_CASE("ball body and relative residues") {
  auto b = make_ball(3, 1.0);
  auto r = body_residues(b);
  CHECK(std::abs(r.value(-3) - 16 * kPi * kPi / 3) < 1e-10);
  CHECK(std::abs(r.value(-4) + 4 * kPi * kPi) < 1e-10);
  CHECK(std::abs(r.value(-6, "closed") - kPi * kPi / 3) < 1e-10);
  auto q = relative_residues(b);
  CHECK(std::abs(q.value(-3) - 8 * kPi * kPi) < 1e-10);
  CHECK(std::abs(q.value(-4) + 4 * kPi * kPi) < 1e-10);
}

TEST_CASE("four-dimensional sphere at -8") {
  auto s4 = make_sphere(4, 1.0);
  auto fr = curvature_frame(s4, 1, std::vector<double>{0.1, 0.2, -0.1, 0.3});
  auto a = local_residue_m8(fr);
  auto b = local_nu_residue_m8(fr);
  double area = sphere_volume(4);
  CHECK(std::abs(a.raw) < 1e-9);
  CHECK(std::abs(a.graph) < 1e-9);
  CHECK(std::abs(b.graph * area - 2 * std::pow(kPi, 4) / 3) < 1e-7);
  CHECK(std::abs(b.raw * area - 2 * std::pow(kPi, 4) / 3) < 1e-7);
  // from the ball: -z(z+3) Res B_{B^5}(z-2) at z = -8
  double res = contour_residue([](cplx z) { return beta_ball(5, z); }, -10.0);
  CHECK(std::abs(-(-8.0) * (-5.0) * res - 2 * std::pow(kPi, 4) / 3) < 1e-10);
}

TEST_CASE("spheroid -8 routes agree") {
  auto sp = make_spheroid(std::sqrt(2.0));
  auto r = residue_m8(sp, 16);
  CHECK(std::abs(r.raw - r.modified) < 1e-6);
  CHECK(std::abs(r.raw - r.graph) < 1e-6);
  CHECK(std::abs(r.raw - spheroid_r8(std::sqrt(2.0))) < 1e-6 * std::max(1.0, std::abs(r.raw)));
  auto rn = nu_residue_m8(sp, 16);
  CHECK(std::abs(rn.raw - rn.graph) < 1e-6);
  CHECK(std::abs(rn.raw - spheroid_r8_nu_reduced(std::sqrt(2.0))) < 1e-6 * std::abs(rn.raw));
}

TEST_CASE("intrinsic residues and heat coefficients") {
  auto ir = intrinsic_residues(3, curvature_integrals(make_sphere(3, 1.0)));
  CHECK(std::abs(ir.r_m - 8 * std::pow(kPi, 3)) < 1e-8);
  CHECK(std::abs(ir.r_m2 + 8 * std::pow(kPi, 3) / 3) < 1e-8);
  auto h = heat_coefficients(curvature_integrals(make_sphere(2, 1.0)));
  CHECK(std::abs(h.a0 - 4 * kPi) < 1e-10);
  CHECK(std::abs(h.a1 - 4 * kPi / 3) < 1e-10);
  CHECK(std::abs(h.a2 - 4 * kPi / 15) < 1e-10);
}

TEST_CASE("Lipschitz-Killing curvatures") {
  auto b = make_ball(3, 1.0);
  auto C = lk_curvatures(b);
  CHECK(std::abs(C[0] - 1) < 1e-10);
  CHECK(std::abs(C[1] - 4) < 1e-10);
  CHECK(std::abs(C[2] - 2 * kPi) < 1e-10);
  CHECK(std::abs(C[3] - 4 * kPi / 3) < 1e-10);
  auto R = lk_from_residues(b);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(R[k] - C[k]) < 1e-8);
  CHECK(std::abs(steiner_volume(C, 0.1) - 4 * kPi / 3 * std::pow(1.1, 3)) < 1e-10);

  auto e = make_ellipsoid({1.0, 1.3, 0.8}, true);
  auto Ce = lk_curvatures(e);
  auto Re = lk_from_residues(e);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(Re[k] - Ce[k]) < 1e-5 * std::abs(Ce[k]));
  CHECK(std::abs(Ce[0] - 1) < 1e-8);
  auto off = make_offset(e, 0.05);
  CHECK(std::abs(steiner_volume(Ce, 0.05) - enclosed_volume(off)) < 1e-6);
}

TEST_CASE("Weyl tube and Willmore") {
  auto t = make_torus(2.0, 1.0);
  auto w = weyl_tube_k2(t);
  CHECK(std::abs(w.intrinsic) < 1e-8);
  CHECK(std::abs(w.residue - w.intrinsic) < 1e-8);
  double will = 0.25 * integrate_frames(t, {}, 1, [](const CurvatureFrame& fr, double* v) {
                  v[0] = fr.mean_curvature_sq();
                })[0];
  double rhs = -(residue_second(t) + nu_residue_second(t)) / kPi;
  CHECK(std::abs(will - rhs) < 1e-6);
  CHECK(std::abs(will - 4 * kPi * kPi / std::sqrt(3.0)) < 1e-6);
}

TEST_CASE("t^6 coefficient of the extrinsic ball volume") {
  auto s2 = make_sphere(2, 1.0);
  std::vector<double> u{0.1, 0.2};
  auto fr = curvature_frame(s2, 0, u);
  double g = graph_local_residue(fr, 2, WeightKind::One) / 6.0;
  CHECK(std::abs(extrinsic_ball_t6(intrinsic_data(s2, 0, u.data())) - g) < 1e-6);
  auto t = make_torus(2.0, 1.0);
  std::vector<double> v{0.3, 0.7};
  auto ft = curvature_frame(t, 0, v);
  double gt = graph_local_residue(ft, 2, WeightKind::One) / 6.0;
  CHECK(std::abs(extrinsic_ball_t6(intrinsic_data(t, 0, v.data())) - gt) < 1e-5);
}

TEST_CASE("codimension two local residues do not depend on the tangent frame") {
  auto t = make_clifford_torus(1.0, 0.6);
  auto fr = curvature_frame(t, 0, std::vector<double>{0.3, 0.7});
  Eigen::MatrixXd Q(2, 2);
  Q << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  auto fq = rotate_frame(fr, Q);
  for (int j : {1, 2})
    for (auto w : {WeightKind::One, WeightKind::Nu})
      CHECK(std::abs(graph_local_residue(fr, j, w) - graph_local_residue(fq, j, w)) < 1e-10);
  // flat metric
  CHECK(std::abs(scalar_from_residues(fr)) < 1e-10);
}
