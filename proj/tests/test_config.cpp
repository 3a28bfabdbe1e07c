#include <cmath>

#include "doctest.h"
#include "rlab/config.hpp"
#include "rlab/continuation.hpp"
#include "rlab/jet.hpp"
#include "rlab/oracles.hpp"

using namespace rlab;

TEST_CASE("expression parser") {
  std::map<std::string, double> c{{"a", 2.0}};
  double u[2] = {0.5, -1.0};
  CHECK(Expression::parse("1 + 2 * 3", c).eval(u) == doctest::Approx(7.0));
  CHECK(Expression::parse("-u1^2", c).eval(u) == doctest::Approx(-1.0));
  CHECK(Expression::parse("2^3^2", c).eval(u) == doctest::Approx(512.0));
  CHECK(Expression::parse("a*cos(pi*u0) + sqrt(4)", c).eval(u) == doctest::Approx(2.0 + 2.0 * std::cos(kPi / 2)));
  CHECK(Expression::parse("exp(log(3)) - sinh(0) + cosh(0)", c).eval(u) == doctest::Approx(4.0));
  CHECK(Expression::parse("u1", c).max_variable() == 1);
  CHECK(Expression::parse("a", c).max_variable() == -1);
  CHECK_THROWS_AS(Expression::parse("1 +", c), ConfigError);
  CHECK_THROWS_AS(Expression::parse("b * u0", c), ConfigError);
  CHECK_THROWS_AS(Expression::parse("foo(u0)", c), ConfigError);
  CHECK_THROWS_AS(Expression::parse("(u0", c), ConfigError);
  CHECK_THROWS_AS(Expression::parse("u0^u1", c), ConfigError);
}

TEST_CASE("expressions differentiate through jets") {
  auto e = Expression::parse("sin(u0) * u0^3", {});
  Jet<2> x[1] = {Jet<2>::variable(0, 0.7)};
  Jet<2> v = e.eval(x);
  double d = std::cos(0.7) * std::pow(0.7, 3) + 3 * std::sin(0.7) * 0.7 * 0.7;
  CHECK(v.value() == doctest::Approx(std::sin(0.7) * std::pow(0.7, 3)));
  CHECK(v.derivative({1, 0, 0, 0}) == doctest::Approx(d));
}

TEST_CASE("shape documents are validated") {
  CHECK_NOTHROW(spec_from_json_text(R"({"kind":"circle","params":{"r":2}})"));
  CHECK_THROWS_AS(spec_from_json_text(R"({"kind":"circle","params":{"r":2},"extra":1})"), ConfigError);
  CHECK_THROWS_AS(spec_from_json_text(R"({"kind":"circle","params":{"radius":2}})"), ConfigError);
  CHECK_THROWS_AS(spec_from_json_text(R"({"kind":"blob"})"), ConfigError);
  CHECK_THROWS_AS(spec_from_json_text(R"({"kind":"ball","params":{"n":3,"r":1},"body":true})"), ConfigError);
  CHECK_THROWS_AS(spec_from_json_text("{not json"), ConfigError);
  CHECK_THROWS_AS(spec_from_json_text(R"({"kind":"custom","m":1,"n":2,"patches":[{"lo":[0],"hi":[1],"x":["u1","0"]}]})"),
                  ConfigError);
  CHECK_THROWS_AS(
      spec_from_json_text(R"({"kind":"torus","params":{"R":2,"r":1},"transforms":[{"type":"shear"}]})"),
      ConfigError);
  auto s = spec_from_json_text(R"({"kind":"ellipsoid","params":{"a0":1,"a1":1.3,"a2":0.8},"body":true})");
  CHECK(s.is_body);
  CHECK(s.n == 3);
}

TEST_CASE("custom patches reproduce the built-in circle") {
  // clockwise parametrization: auto orientation must make the normal outward
  auto s = spec_from_json_text(R"j({
    "kind": "custom", "m": 1, "n": 2, "closed": true, "params": {"r": 1.5},
    "patches": [{"lo": [0], "hi": [6.283185307179586], "x": ["r*cos(u0)", "-r*sin(u0)"]}]})j");
  CHECK(volume(s) == doctest::Approx(3 * kPi));
  CHECK(enclosed_volume(s) == doctest::Approx(kPi * 2.25));
  auto f = beta_function(s, Weight::of(WeightKind::One));
  for (double z : {1.0, -0.5}) {
    double ref = std::pow(1.5, z + 2) * beta_sphere(2, z).real();
    CHECK(std::abs(f.eval(z).value.real() / ref - 1) < 1e-9);
  }
}

TEST_CASE("transforms in shape documents") {
  auto s = spec_from_json_text(R"({"kind":"sphere","params":{"m":2,"r":0.5},
    "transforms":[{"type":"inversion","center":[0,0,0],"radius":1},{"type":"similarity","scale":3}]})");
  CHECK(volume(s) == doctest::Approx(4 * kPi * 36));
  auto m = map_from_json_text(R"([{"type":"similarity","scale":2,"translation":[1,0,0]}])", 3);
  Eigen::VectorXd x(3);
  x << 1, 1, 1;
  CHECK((m.apply(x) - Eigen::Vector3d(3, 2, 2)).norm() < 1e-15);
}
