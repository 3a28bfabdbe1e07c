#include <cmath>

#include "geometry_util.hpp"
#include "rlab/manifold.hpp"
#include "rlab/special.hpp"

namespace rlab {

namespace detail {

FirstOrder first_order(const Eigen::MatrixXd& Xu, int orientation) {
  const int n = static_cast<int>(Xu.rows()), m = static_cast<int>(Xu.cols());
  FirstOrder fo;
  fo.Xu = Xu;
  Eigen::MatrixXd G = Xu.transpose() * Xu;
  double det = G.determinant();
  if (!(det > 0.0)) throw GeometryError("degenerate Jacobian");
  fo.sqrt_g = std::sqrt(det);
  // Gram-Schmidt keeps the orientation of the parametrization
  Eigen::MatrixXd E(n, m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd v = Xu.col(i);
    for (int j = 0; j < i; ++j) v -= E.col(j).dot(v) * E.col(j);
    for (int j = 0; j < i; ++j) v -= E.col(j).dot(v) * E.col(j);
    double nv = v.norm();
    if (!(nv > 1e-14 * Xu.norm())) throw GeometryError("rank-deficient tangent frame");
    E.col(i) = v / nv;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(E);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd N = Q.rightCols(n - m);
  for (int k = 0; k < n - m; ++k) {
    Eigen::VectorXd v = N.col(k);
    v -= E * (E.transpose() * v);
    N.col(k) = v.normalized();
  }
  if (n == m + 1) {
    Eigen::MatrixXd M(n, n);
    M << E, N;
    if (M.determinant() < 0) N = -N;
    if (orientation < 0) {
      N = -N;
      E.col(m - 1) = -E.col(m - 1);
    }
  } else if (orientation < 0) {
    E.col(m - 1) = -E.col(m - 1);
  }
  fo.E = E;
  fo.N = N;
  return fo;
}

}  // namespace detail

namespace {

using detail::scalar_t;

Eigen::MatrixXd jacobian(const PatchMap& map, int m, int n, const double* u) {
  std::array<Jet<1>, kMaxAmbient> X;
  map.jet<1>(u, X.data());
  Eigen::MatrixXd Xu(n, m);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) Xu(a, i) = X[a].c[1 + i];
  return Xu;
}

Eigen::VectorXd position(const PatchMap& map, int n, const double* u) {
  std::array<double, kMaxAmbient> x{};
  map.eval(u, x.data());
  Eigen::VectorXd v(n);
  for (int a = 0; a < n; ++a) v(a) = x[a];
  return v;
}

std::vector<double> box_center(const Patch& p) {
  std::vector<double> c(p.lo.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (p.lo[i] + p.hi[i]);
  return c;
}

// Orient a hypersurface patch so that the normal points away from ref(x) at the box centre.
template <class Ref>
void orient_outward(Patch& p, int m, int n, Ref ref) {
  p.orientation = 1;
  auto c = box_center(p);
  auto fo = detail::first_order(jacobian(p.map, m, n, c.data()), 1);
  Eigen::VectorXd x = position(p.map, n, c.data());
  if (fo.N.col(0).dot(x - ref(x, c)) < 0) p.orientation = -1;
}

// Cube face (axis, sign) of S^m, equiangular coordinates, scaled by the axes.
Patch ellipsoid_face(int m, int axis, int sign, const std::vector<double>& axes) {
  Patch p;
  p.lo.assign(m, -1.0);
  p.hi.assign(m, 1.0);
  p.map = make_patch_map(m, [m, axis, sign, axes](const auto* u, auto* x) {
    using T = scalar_t<decltype(u[0])>;
    using std::sqrt;
    using std::tan;
    std::array<T, kMaxAmbient> v;
    int k = 0;
    for (int a = 0; a <= m; ++a) {
      if (a == axis) {
        v[a] = T(double(sign));
      } else {
        v[a] = tan(u[k] * (kPi / 4.0));
        ++k;
      }
    }
    T r2 = v[0] * v[0];
    for (int a = 1; a <= m; ++a) r2 = r2 + v[a] * v[a];
    T inv = 1.0 / sqrt(r2);
    for (int a = 0; a <= m; ++a) x[a] = (v[a] * inv) * axes[a];
  });
  return p;
}

// locate a unit-sphere point on the cube faces
std::pair<int, std::vector<double>> locate_sphere_point(int m, const Eigen::VectorXd& q) {
  int axis = 0;
  for (int a = 1; a <= m; ++a)
    if (std::abs(q(a)) > std::abs(q(axis))) axis = a;
  int sign = q(axis) >= 0 ? 1 : -1;
  std::vector<double> u;
  for (int a = 0; a <= m; ++a)
    if (a != axis) u.push_back(std::atan(q(a) / std::abs(q(axis))) * 4.0 / kPi);
  return {2 * axis + (sign > 0 ? 0 : 1), u};
}

void add_ellipsoid_patches(ManifoldSpec& s, const std::vector<double>& axes, int component, int flip) {
  const int m = static_cast<int>(axes.size()) - 1;
  for (int axis = 0; axis <= m; ++axis)
    for (int sign : {1, -1}) {
      Patch p = ellipsoid_face(m, axis, sign, axes);
      orient_outward(p, m, m + 1, [](const Eigen::VectorXd& x, const std::vector<double>&) {
        return Eigen::VectorXd::Zero(x.size());
      });
      p.orientation *= flip;
      p.component = component;
      s.patches.push_back(std::move(p));
    }
}

// axisymmetric about the last axis when axes[0..m-1] agree
bool axisymmetric(const std::vector<double>& axes) {
  for (std::size_t i = 1; i + 1 < axes.size(); ++i)
    if (axes[i] != axes[0]) return false;
  return true;
}

AxialComponent ellipsoid_axial(const std::vector<double>& axes, int patch_offset) {
  const int m = static_cast<int>(axes.size()) - 1;
  const double b = axes[0], a = axes[m];
  AxialComponent ac;
  ac.theta_lo = 0.0;
  ac.theta_hi = kPi;
  ac.locate = [m, patch_offset](double th) {
    Eigen::VectorXd q = Eigen::VectorXd::Zero(m + 1);
    q(0) = std::sin(th);
    q(m) = std::cos(th);
    auto r = locate_sphere_point(m, q);
    r.first += patch_offset;
    return r;
  };
  const double fiber = sphere_volume(m - 1);
  ac.measure = [m, a, b, fiber](double th) {
    double s = std::sin(th), c = std::cos(th);
    return fiber * std::pow(b * s, m - 1) * std::sqrt(b * b * c * c + a * a * s * s);
  };
  return ac;
}

}  // namespace

ManifoldSpec make_ellipsoid(const std::vector<double>& axes, bool body) {
  if (axes.size() < 2 || axes.size() > kMaxIntrinsic + 1)
    throw std::invalid_argument("ellipsoid: dimension out of range");
  for (double v : axes)
    if (!(v > 0)) throw std::invalid_argument("ellipsoid: axes must be positive");
  ManifoldSpec s;
  s.kind = "ellipsoid";
  s.m = static_cast<int>(axes.size()) - 1;
  s.n = s.m + 1;
  s.is_body = body;
  for (std::size_t i = 0; i < axes.size(); ++i) s.params["a" + std::to_string(i)] = axes[i];
  add_ellipsoid_patches(s, axes, 0, 1);
  if (axisymmetric(axes)) s.axial.push_back(ellipsoid_axial(axes, 0));
  s.ellipsoid_axes = Eigen::Map<const Eigen::VectorXd>(axes.data(), axes.size());
  return s;
}

ManifoldSpec make_circle(double r) {
  auto s = make_ellipsoid({r, r});
  s.kind = "circle";
  s.params = {{"r", r}};
  s.round_radius = r;
  return s;
}

ManifoldSpec make_ellipse(double a, double b, bool body) {
  auto s = make_ellipsoid({a, b}, body);
  s.kind = "ellipse";
  s.params = {{"a", a}, {"b", b}};
  return s;
}

ManifoldSpec make_sphere(int m, double r) {
  auto s = make_ellipsoid(std::vector<double>(m + 1, r));
  s.kind = "sphere";
  s.params = {{"m", double(m)}, {"r", r}};
  s.round_radius = r;
  return s;
}

ManifoldSpec make_ball(int n, double r) {
  auto s = make_ellipsoid(std::vector<double>(n, r), true);
  s.kind = "ball";
  s.params = {{"n", double(n)}, {"r", r}};
  s.round_radius = r;
  return s;
}

ManifoldSpec make_spheroid(double a, int m) {
  std::vector<double> axes(m + 1, 1.0);
  axes[m] = a;
  auto s = make_ellipsoid(axes);
  s.kind = "spheroid";
  s.params = {{"a", a}, {"m", double(m)}};
  return s;
}

ManifoldSpec make_shell(const std::vector<double>& outer_axes, double inner_radius) {
  ManifoldSpec s;
  s.kind = "shell";
  s.m = static_cast<int>(outer_axes.size()) - 1;
  s.n = s.m + 1;
  s.is_body = true;
  for (std::size_t i = 0; i < outer_axes.size(); ++i) s.params["a" + std::to_string(i)] = outer_axes[i];
  s.params["inner"] = inner_radius;
  for (int i = 0; i <= s.m; ++i)
    if (!(outer_axes[i] > inner_radius)) throw std::invalid_argument("shell: inner sphere must lie inside");
  add_ellipsoid_patches(s, outer_axes, 0, 1);
  int off = static_cast<int>(s.patches.size());
  std::vector<double> inner(outer_axes.size(), inner_radius);
  add_ellipsoid_patches(s, inner, 1, -1);
  if (axisymmetric(outer_axes)) {
    s.axial.push_back(ellipsoid_axial(outer_axes, 0));
    s.axial.push_back(ellipsoid_axial(inner, off));
  }
  return s;
}

ManifoldSpec make_torus(double R, double r, int splits_theta, int splits_phi) {
  if (!(R > r && r > 0)) throw std::invalid_argument("torus: need R > r > 0");
  ManifoldSpec s;
  s.kind = "torus";
  s.params = {{"R", R}, {"r", r}};
  s.m = 2;
  s.n = 3;
  auto map = make_patch_map(2, [R, r](const auto* u, auto* x) {
    using std::cos;
    using std::sin;
    auto rho = R + r * cos(u[0]);
    x[0] = rho * cos(u[1]);
    x[1] = rho * sin(u[1]);
    x[2] = r * sin(u[0]);
  });
  for (int i = 0; i < splits_theta; ++i)
    for (int j = 0; j < splits_phi; ++j) {
      Patch p;
      p.lo = {2 * kPi * i / splits_theta, 2 * kPi * j / splits_phi};
      p.hi = {2 * kPi * (i + 1) / splits_theta, 2 * kPi * (j + 1) / splits_phi};
      p.map = map;
      orient_outward(p, 2, 3, [R](const Eigen::VectorXd&, const std::vector<double>& c) {
        Eigen::VectorXd core(3);
        core << R * std::cos(c[1]), R * std::sin(c[1]), 0.0;
        return core;
      });
      s.patches.push_back(std::move(p));
    }
  AxialComponent ac;
  ac.theta_lo = 0.0;
  ac.theta_hi = 2 * kPi;
  ac.locate = [splits_theta, splits_phi](double th) {
    int i = std::min(splits_theta - 1, std::max(0, int(th / (2 * kPi) * splits_theta)));
    double phi = kPi / splits_phi;  // centre of the first phi strip
    return std::make_pair(i * splits_phi, std::vector<double>{th, phi});
  };
  ac.measure = [R, r](double th) { return 2 * kPi * r * (R + r * std::cos(th)); };
  s.axial.push_back(ac);
  return s;
}

ManifoldSpec make_clifford_torus(double r1, double r2) {
  ManifoldSpec s;
  s.kind = "clifford_torus";
  s.params = {{"r1", r1}, {"r2", r2}};
  s.m = 2;
  s.n = 4;
  auto map = make_patch_map(2, [r1, r2](const auto* u, auto* x) {
    using std::cos;
    using std::sin;
    x[0] = r1 * cos(u[0]);
    x[1] = r1 * sin(u[0]);
    x[2] = r2 * cos(u[1]);
    x[3] = r2 * sin(u[1]);
  });
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Patch p;
      p.lo = {kPi / 2 * i, kPi / 2 * j};
      p.hi = {kPi / 2 * (i + 1), kPi / 2 * (j + 1)};
      p.map = map;
      s.patches.push_back(std::move(p));
    }
  return s;
}

ManifoldSpec make_polygon_knot(const std::vector<Eigen::VectorXd>& vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
  ManifoldSpec s;
  s.kind = "polygon";
  s.m = 1;
  s.n = static_cast<int>(vertices[0].size());
  for (const auto& v : vertices)
    if (v.size() != s.n) throw std::invalid_argument("polygon: inconsistent vertex dimension");
  s.polygon = vertices;
  return s;
}

ManifoldSpec make_offset(const ManifoldSpec& spec, double eps) {
  if (!spec.hypersurface()) throw GeometryError("offset: only hypersurfaces");
  ManifoldSpec s = spec;
  s.kind = spec.kind + "+offset";
  s.params["offset"] = eps;
  s.axial.clear();
  s.ellipsoid_axes.resize(0);
  s.round_radius = 0.0;
  const int m = spec.m, n = spec.n;
  for (auto& p : s.patches) {
    PatchMap base = p.map;
    int orient = p.orientation;
    auto nu_at = [base, m, n, orient](const double* u0) {
      return detail::first_order(jacobian(base, m, n, u0), orient).N.col(0).eval();
    };
    PatchMap q;
    q.eval = [base, nu_at, eps, n](const double* u, double* x) {
      base.eval(u, x);
      Eigen::VectorXd nu = nu_at(u);
      for (int a = 0; a < n; ++a) x[a] += eps * nu(a);
    };
    auto mk = [base, nu_at, eps, m, n](auto tag) {
      using J = decltype(tag);
      constexpr int D = J::kDegree;
      return [base, nu_at, eps, m, n](const double* u0, J* x) {
        std::array<Jet<D + 1>, kMaxAmbient> X;
        base.template jet<D + 1>(u0, X.data());
        std::array<Jet<D>, kMaxAmbient> nu;
        detail::normal_jets<D>(X.data(), m, n, nu_at(u0), nu.data());
        for (int a = 0; a < n; ++a) x[a] = truncate<D>(X[a]) + nu[a] * eps;
      };
    };
    q.jet1 = mk(Jet<1>());
    q.jet2 = mk(Jet<2>());
    q.jet3 = mk(Jet<3>());
    q.jet4 = mk(Jet<4>());
    p.map = q;
  }
  return s;
}

ManifoldSpec make_scaled(const ManifoldSpec& spec, double c) {
  ManifoldSpec s = spec;
  s.params["scale"] = c;
  const int n = spec.n;
  for (auto& p : s.patches)
    p.map = detail::post_compose(p.map, n, [c, n](const auto* y, auto* x) {
      for (int a = 0; a < n; ++a) x[a] = y[a] * c;
    });
  for (auto& v : s.polygon) v *= c;
  for (auto& ac : s.axial) {
    auto meas = ac.measure;
    const double f = std::pow(c, spec.m);
    ac.measure = [meas, f](double th) { return meas(th) * f; };
  }
  if (s.ellipsoid_axes.size()) s.ellipsoid_axes *= c;
  s.round_radius *= c;
  return s;
}

ManifoldSpec with_orientation(const ManifoldSpec& spec, int sign) {
  ManifoldSpec s = spec;
  if (sign < 0)
    for (auto& p : s.patches) p.orientation = -p.orientation;
  return s;
}

ManifoldSpec reparametrize_swap(const ManifoldSpec& spec) {
  ManifoldSpec s = spec;
  const int m = spec.m;
  const int perm_sign = ((m * (m - 1) / 2) % 2) ? -1 : 1;
  for (auto& p : s.patches) {
    std::reverse(p.lo.begin(), p.lo.end());
    std::reverse(p.hi.begin(), p.hi.end());
    PatchMap base = p.map;
    p.map = PatchMap();
    p.map.eval = [base, m](const double* u, double* x) {
      std::array<double, kMaxIntrinsic> v{};
      for (int i = 0; i < m; ++i) v[i] = u[m - 1 - i];
      base.eval(v.data(), x);
    };
    // jets: evaluate the base with reversed centre, then permute jet variables
    const int n = spec.n;
    auto mk = [base, m, n](auto tag) {
      using J = decltype(tag);
      constexpr int D = J::kDegree;
      return [base, m, n](const double* u0, J* x) {
        std::array<double, kMaxIntrinsic> v{};
        for (int i = 0; i < m; ++i) v[i] = u0[m - 1 - i];
        std::array<J, kMaxAmbient> y;
        base.template jet<D>(v.data(), y.data());
        const auto& tab = JetTables<D>::get();
        for (int a = 0; a < n; ++a) {
          J r;
          for (int k = 0; k < J::kSize; ++k) {
            Exponent e = tab.exps[k], f{0, 0, 0, 0};
            for (int i = 0; i < m; ++i) f[i] = e[m - 1 - i];
            for (int i = m; i < kJetVars; ++i) f[i] = e[i];
            r.c[tab.index(f)] = y[a].c[k];
          }
          x[a] = r;
        }
      };
    };
    p.map.jet1 = mk(Jet<1>());
    p.map.jet2 = mk(Jet<2>());
    p.map.jet3 = mk(Jet<3>());
    p.map.jet4 = mk(Jet<4>());
    if (base.jet5) p.map.jet5 = mk(Jet<5>());
    p.orientation *= perm_sign;
  }
  s.axial.clear();
  return s;
}

}  // namespace rlab
