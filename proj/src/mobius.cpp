#include "rlab/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geometry_util.hpp"
#include "rlab/conformal.hpp"
#include "rlab/continuation.hpp"
#include "rlab/residues.hpp"

namespace rlab {

MobiusMap MobiusMap::inversion(const Eigen::VectorXd& center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("inversion radius must be positive");
  MobiusStep s;
  s.kind = MobiusStep::Kind::Inversion;
  s.center = center;
  s.radius = radius;
  return {{s}};
}

MobiusMap MobiusMap::similarity(double scale, const Eigen::MatrixXd& rotation, const Eigen::VectorXd& translation) {
  if (!(scale > 0)) throw std::invalid_argument("similarity scale must be positive");
  if (rotation.size()) {
    if (rotation.rows() != rotation.cols()) throw std::invalid_argument("rotation must be square");
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(rotation.rows(), rotation.cols());
    if ((rotation.transpose() * rotation - I).norm() > 1e-10) throw std::invalid_argument("rotation is not orthogonal");
  }
  MobiusStep s;
  s.scale = scale;
  s.rotation = rotation;
  s.translation = translation;
  return {{s}};
}

MobiusMap MobiusMap::then(const MobiusMap& next) const {
  MobiusMap r = *this;
  r.steps.insert(r.steps.end(), next.steps.begin(), next.steps.end());
  return r;
}

namespace {

Eigen::VectorXd apply_step(const MobiusStep& s, const Eigen::VectorXd& x) {
  if (s.kind == MobiusStep::Kind::Inversion) {
    Eigen::VectorXd d = x - s.center;
    return s.center + s.radius * s.radius * d / d.squaredNorm();
  }
  Eigen::VectorXd y = s.rotation.size() ? Eigen::VectorXd(s.rotation * x) : x;
  y *= s.scale;
  if (s.translation.size()) y += s.translation;
  return y;
}

double step_factor(const MobiusStep& s, const Eigen::VectorXd& x) {
  if (s.kind == MobiusStep::Kind::Inversion) return s.radius * s.radius / (x - s.center).squaredNorm();
  return s.scale;
}

void check_dim(const MobiusStep& s, int n) {
  auto bad = [n](const Eigen::VectorXd& v) { return v.size() && v.size() != n; };
  if (s.kind == MobiusStep::Kind::Inversion && s.center.size() != n)
    throw std::invalid_argument("inversion center has the wrong dimension");
  if (bad(s.translation) || (s.rotation.size() && s.rotation.rows() != n))
    throw std::invalid_argument("similarity has the wrong dimension");
}

bool on_last_axis(const Eigen::VectorXd& v) {
  if (!v.size()) return true;
  for (int i = 0; i + 1 < v.size(); ++i)
    if (std::abs(v(i)) > 1e-14) return false;
  return true;
}

// distance from c to the shape: coarse nodes, then Gauss-Newton in the chart of the nearest few
double distance_to_shape(const ManifoldSpec& spec, const Eigen::VectorXd& c) {
  const int n = spec.n, m = spec.m;
  auto nodes = sample_quadrature(spec, m >= 3 ? 4 : 12);
  std::vector<std::pair<double, std::size_t>> near;
  for (std::size_t i = 0; i < nodes.size(); ++i) near.push_back({(nodes[i].x - c).norm(), i});
  const std::size_t keep = std::min<std::size_t>(8, near.size());
  std::partial_sort(near.begin(), near.begin() + keep, near.end());
  double best = near.empty() ? 1e300 : near[0].first;
  for (std::size_t k = 0; k < keep; ++k) {
    const QuadratureNode& q = nodes[near[k].second];
    const Patch& P = spec.patches[q.patch];
    std::vector<double> u = q.u, up(m);
    Eigen::VectorXd x(n), xp(n);
    Eigen::MatrixXd Jm(n, m);
    for (int it = 0; it < 30; ++it) {
      P.map.eval(u.data(), x.data());
      for (int i = 0; i < m; ++i) {
        const double h = 1e-7 * std::max(1.0, P.hi[i] - P.lo[i]);
        up = u;
        up[i] += h;
        P.map.eval(up.data(), xp.data());
        Jm.col(i) = (xp - x) / h;
      }
      Eigen::VectorXd step = Jm.colPivHouseholderQr().solve(c - x);
      for (int i = 0; i < m; ++i) u[i] = std::clamp(u[i] + step(i), P.lo[i], P.hi[i]);
      if (step.norm() < 1e-13) break;
    }
    P.map.eval(u.data(), x.data());
    best = std::min(best, (x - c).norm());
  }
  return best;
}

ManifoldSpec apply_one(const ManifoldSpec& spec, const MobiusStep& st, double guard_factor) {
  const int n = spec.n, m = spec.m;
  check_dim(st, n);
  ManifoldSpec s = spec;
  s.kind = spec.kind + (st.kind == MobiusStep::Kind::Inversion ? "+inversion" : "+similarity");
  const bool inv = st.kind == MobiusStep::Kind::Inversion;
  if (inv) {
    if (spec.is_polygon()) throw GeometryError("inversion of a polygonal knot is not polygonal");
    double diam = diameter_estimate(spec);
    double guard = guard_factor * diam;
    if (distance_to_shape(spec, st.center) < guard)
      throw GeometryError("inversion center within the guard distance of the shape; the image is not compact");
    const Eigen::VectorXd c = st.center;
    const double r2 = st.radius * st.radius;
    for (auto& p : s.patches) {
      p.map = detail::post_compose(p.map, n, [c, r2, n](const auto* y, auto* x) {
        auto d2 = (y[0] - c(0)) * (y[0] - c(0));
        for (int a = 1; a < n; ++a) d2 += (y[a] - c(a)) * (y[a] - c(a));
        auto f = r2 / d2;
        for (int a = 0; a < n; ++a) x[a] = c(a) + (y[a] - c(a)) * f;
      });
      p.orientation = -p.orientation;
    }
    const bool round_at_center = spec.round_radius > 0 && c.norm() == 0.0;
    s.round_radius = round_at_center ? r2 / spec.round_radius : 0.0;
    if (round_at_center)
      s.ellipsoid_axes = Eigen::VectorXd::Constant(n, s.round_radius);
    else
      s.ellipsoid_axes.resize(0);
  } else {
    const double sc = st.scale;
    const Eigen::MatrixXd Q = st.rotation.size() ? st.rotation : Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd t = st.translation.size() ? st.translation : Eigen::VectorXd::Zero(n);
    for (auto& p : s.patches)
      p.map = detail::post_compose(p.map, n, [sc, Q, t, n](const auto* y, auto* x) {
        for (int a = 0; a < n; ++a) {
          x[a] = y[0] * (sc * Q(a, 0));
          for (int b = 1; b < n; ++b) x[a] += y[b] * (sc * Q(a, b));
          x[a] += t(a);
        }
      });
    for (auto& v : s.polygon) v = apply_step(st, v);
    // a reflection reverses the induced orientation as well
    if (Q.determinant() < 0)
      for (auto& p : s.patches) p.orientation = -p.orientation;
    const bool plain = st.rotation.size() == 0 && t.norm() == 0.0;
    s.round_radius = plain ? spec.round_radius * sc : 0.0;
    if (plain && spec.ellipsoid_axes.size())
      s.ellipsoid_axes = spec.ellipsoid_axes * sc;
    else
      s.ellipsoid_axes.resize(0);
  }
  // axial reductions survive maps that keep the symmetry axis
  MobiusMap one{{st}};
  if (!s.axial.empty() && one.preserves_last_axis(n)) {
    for (auto& ac : s.axial) {
      auto meas = ac.measure;
      auto loc = ac.locate;
      const std::vector<Patch> before = spec.patches;
      ac.measure = [meas, loc, before, st, m, n](double th) {
        auto [pi, u] = loc(th);
        Eigen::VectorXd x(n);
        before[pi].map.eval(u.data(), x.data());
        return meas(th) * std::pow(step_factor(st, x), m);
      };
    }
  } else {
    s.axial.clear();
  }
  if (spec.hypersurface() && spec.closed && !spec.is_polygon()) {
    double vol = enclosed_volume(s, m >= 3 ? 8 : 16);
    if (vol < 0) {
      if (spec.is_body) throw GeometryError("the inversion center lies inside the body; its image is not compact");
      for (auto& p : s.patches) p.orientation = -p.orientation;
    }
  }
  return s;
}

}  // namespace

Eigen::VectorXd MobiusMap::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x;
  for (const auto& s : steps) y = apply_step(s, y);
  return y;
}

double MobiusMap::conformal_factor(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x;
  double f = 1.0;
  for (const auto& s : steps) {
    f *= step_factor(s, y);
    y = apply_step(s, y);
  }
  return f;
}

int MobiusMap::inversion_count() const {
  int c = 0;
  for (const auto& s : steps) c += s.kind == MobiusStep::Kind::Inversion;
  return c;
}

bool MobiusMap::preserves_last_axis(int n) const {
  for (const auto& s : steps) {
    if (s.kind == MobiusStep::Kind::Inversion) {
      if (!on_last_axis(s.center)) return false;
    } else {
      if (!on_last_axis(s.translation)) return false;
      if (s.rotation.size()) {
        Eigen::VectorXd e = Eigen::VectorXd::Unit(n, n - 1);
        if (std::abs(std::abs((s.rotation * e)(n - 1)) - 1.0) > 1e-12) return false;
      }
    }
  }
  return true;
}

ManifoldSpec transform_spec(const ManifoldSpec& spec, const MobiusMap& map, double guard_factor) {
  ManifoldSpec s = spec;
  for (const auto& st : map.steps) s = apply_one(s, st, guard_factor);
  return s;
}

std::vector<double> transformed_curvatures(const std::vector<double>& kappa, const Eigen::VectorXd& p,
                                           const Eigen::VectorXd& nu, bool center_inside, double radius) {
  const double p2 = p.squaredNorm();
  if (p2 == 0.0) throw std::invalid_argument("transformed_curvatures: point at the inversion center");
  const double sg = center_inside ? -1.0 : 1.0, pn = p.dot(nu), r2 = radius * radius;
  std::vector<double> out;
  for (double k : kappa) out.push_back(sg * (p2 * k + 2.0 * pn) / r2);
  return out;
}

double invariance_quantity(const ManifoldSpec& spec, const std::string& q, int order) {
  const int m = spec.m;
  if (q == "residue" || q == "nu-residue") {
    const bool nu = q == "nu-residue";
    if (m == 2) return nu ? nu_residue_second(spec, order) : residue_second(spec, order);
    if (m == 4) return nu ? nu_residue_m8(spec, order, false).raw : residue_m8(spec, order, false).raw;
    throw std::invalid_argument("residue at -2m is available for m = 2 and m = 4");
  }
  if (q == "beta") {
    auto f = beta_function(spec, Weight::of(WeightKind::One));
    return f.finite_part(-2.0 * m);
  }
  if (q == "body") return body_residues(spec, order).value(-2.0 * spec.n, "closed");
  if (q == "relative") return relative_residues(spec, order).value(-spec.n - 3.0);
  if (q == "gw") return graham_witten(spec, order);
  if (q == "weyl" || q == "z") {
    auto e = gw_identity(spec, order);
    return q == "weyl" ? e.weyl : e.z_energy;
  }
  throw std::invalid_argument("unknown quantity '" + q +
                              "' (residue, nu-residue, beta, body, relative, gw, weyl, z)");
}

InvarianceReport invariance_report(const ManifoldSpec& spec, const MobiusMap& map, const std::string& quantity,
                                   int order) {
  InvarianceReport r;
  r.quantity = quantity;
  r.before = invariance_quantity(spec, quantity, order);
  r.after = invariance_quantity(transform_spec(spec, map), quantity, order);
  r.diff = std::abs(r.after - r.before);
  return r;
}

}  // namespace rlab
