#include <cmath>

#include "doctest.h"
#include "rlab/conformal.hpp"
#include "rlab/oracles.hpp"

using namespace rlab;

TEST_CASE("curvature polynomials: coefficient and product forms") {
  for (Kappa4 k : {Kappa4{1, 2, 3, 4}, Kappa4{-0.5, 0.3, 2.2, -1.7}, Kappa4{1, 1, 1, 1}}) {
    CHECK(weyl_norm_hyp(k) == doctest::Approx(weyl_norm_hyp_product(k)).epsilon(1e-12));
    CHECK(q_energy(k) == doctest::Approx(q_energy_product(k)).epsilon(1e-12));
  }
  // umbilic points
  CHECK(std::abs(weyl_norm_hyp({2, 2, 2, 2})) < 1e-14);
  CHECK(std::abs(q_energy({2, 2, 2, 2})) < 1e-14);
  // doubled pairs vanish, a lone distinct value does not
  CHECK(q_energy_product({1, 1, 3, 3}) == 0.0);
  CHECK(q_energy_product({1, 2, 2, 2}) > 0.0);
  CHECK(chern_density({1, 2, 3, 4}) == doctest::Approx(144.0));
}

TEST_CASE("round S4 energies") {
  auto s = make_sphere(4, 1.0);
  CHECK(graham_witten(s) == doctest::Approx(kPi * kPi).epsilon(1e-10));
  auto e = gw_identity(s);
  CHECK(std::abs(e.weyl) < 1e-10);
  CHECK(std::abs(e.z_energy) < 1e-10);
  CHECK(e.chern / (8 * kPi * kPi) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(std::abs(e.r8) < 1e-8);
  CHECK(e.r8_nu == doctest::Approx(2 * std::pow(kPi, 4) / 3).epsilon(1e-10));
  CHECK(std::abs(e.residual) < 1e-10);
}

TEST_CASE("spheroid energies follow the closed forms") {
  const double a = std::sqrt(3.0);
  auto e = gw_identity(make_spheroid(a));
  CHECK(e.gw == doctest::Approx(spheroid_gw(a)).epsilon(1e-8));
  CHECK(e.r8 == doctest::Approx(spheroid_r8(a)).epsilon(1e-8));
  CHECK(e.r8_nu == doctest::Approx(spheroid_r8_nu_reduced(a)).epsilon(1e-8));
  CHECK(std::abs(e.residual) < 1e-8 * e.gw);
  CHECK(e.gw > kPi * kPi);
}

TEST_CASE("Graham-Witten energy is scale invariant") {
  auto s = make_spheroid(1.5);
  CHECK(graham_witten(make_scaled(s, 2.5)) == doctest::Approx(graham_witten(s)).epsilon(1e-10));
}

TEST_CASE("classification harness and relative spheroid data") {
  CHECK(std::abs(classification_harness(3, -4, 6, 1.7)) < 1e-10);
  CHECK(std::abs(classification_harness(0, 1, 0, 1.7)) > 1e-3);
  CHECK_THROWS(classification_harness(3, -4, 6, 1.0));
  auto r = spheroid_relative_check(2.0);
  CHECK(r.Ra == doctest::Approx(r.Ra_closed).epsilon(1e-10));
  CHECK(r.Ra_tilde == doctest::Approx(r.Ra_tilde_closed).epsilon(1e-10));
  CHECK(r.R1 == doctest::Approx(2.5 * kPi));
}
