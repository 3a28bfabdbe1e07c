#include <algorithm>
#include <cmath>
#include <sstream>

#include "geometry_util.hpp"
#include "rlab/manifold.hpp"
#include "rlab/parallel.hpp"
#include "rlab/quadrature.hpp"

namespace rlab {

namespace {

Exponent exponent_of(std::initializer_list<int> idx) {
  Exponent e{0, 0, 0, 0};
  for (int i : idx) e[i] += 1;
  return e;
}

std::string describe(int patch, const double* u, int m) {
  std::ostringstream os;
  os << "patch " << patch << " at u = (";
  for (int i = 0; i < m; ++i) os << (i ? ", " : "") << u[i];
  os << ")";
  return os.str();
}

// substitute t = Q tau into every polynomial
std::vector<Jet<4>> linear_substitute(const std::vector<Jet<4>>& F, const Eigen::MatrixXd& Q) {
  std::array<Jet<4>, kJetVars> s;
  const int m = static_cast<int>(Q.rows());
  for (int i = 0; i < kJetVars; ++i) {
    Jet<4> v;
    if (i < m)
      for (int j = 0; j < m; ++j) v.c[1 + j] = Q(i, j);
    s[i] = v;
  }
  Composer<4> C(s);
  std::vector<Jet<4>> out;
  for (const auto& f : F) out.push_back(C.apply(f));
  return out;
}

}  // namespace

// ---------------- first-order data and quadrature ----------------

QuadratureNode point_data(const ManifoldSpec& spec, int patch, const double* u) {
  const Patch& p = spec.patches.at(patch);
  const int m = spec.m, n = spec.n;
  std::array<Jet<1>, kMaxAmbient> X;
  p.map.jet<1>(u, X.data());
  QuadratureNode q;
  q.patch = patch;
  q.u.assign(u, u + m);
  q.x.resize(n);
  Eigen::MatrixXd Xu(n, m);
  for (int a = 0; a < n; ++a) {
    q.x(a) = X[a].c[0];
    for (int i = 0; i < m; ++i) Xu(a, i) = X[a].c[1 + i];
  }
  detail::FirstOrder fo;
  try {
    fo = detail::first_order(Xu, p.orientation);
  } catch (const GeometryError& e) {
    throw GeometryError(std::string(e.what()) + " at " + describe(patch, u, m));
  }
  q.w = fo.sqrt_g;
  q.tangent = fo.E;
  if (spec.hypersurface()) q.normal = fo.N.col(0);
  return q;
}

std::vector<QuadratureNode> sample_quadrature(const ManifoldSpec& spec, const std::vector<int>& orders) {
  if (spec.patches.empty()) throw GeometryError("sample_quadrature: spec has no patches");
  std::vector<QuadratureNode> out;
  const int m = spec.m;
  for (std::size_t pi = 0; pi < spec.patches.size(); ++pi) {
    const Patch& p = spec.patches[pi];
    int order = orders.at(pi);
    if (order < 2) throw std::invalid_argument("sample_quadrature: order must be at least 2");
    std::vector<Rule1D> rules;
    for (int i = 0; i < m; ++i) rules.push_back(gauss_legendre(order, p.lo[i], p.hi[i]));
    long total = 1;
    for (int i = 0; i < m; ++i) total *= order;
    std::size_t base = out.size();
    out.resize(base + total);
    parallel_for(total, 0, [&](std::size_t idx) {
      std::array<double, kMaxIntrinsic> u{};
      double w = 1.0;
      std::size_t r = idx;
      for (int i = 0; i < m; ++i) {
        int k = static_cast<int>(r % order);
        r /= order;
        u[i] = rules[i].x[k];
        w *= rules[i].w[k];
      }
      QuadratureNode q = point_data(spec, static_cast<int>(pi), u.data());
      q.w *= w;
      out[base + idx] = std::move(q);
    });
  }
  return out;
}

std::vector<QuadratureNode> sample_quadrature(const ManifoldSpec& spec, int order) {
  return sample_quadrature(spec, std::vector<int>(spec.patches.size(), order));
}

double nu_weight(const Eigen::MatrixXd& Ex, const Eigen::MatrixXd& Ey) {
  return (Ex.transpose() * Ey).determinant();
}

// ---------------- curvature frames ----------------

Eigen::VectorXd CurvatureFrame::f(std::initializer_list<int> idx) const {
  Exponent e = exponent_of(idx);
  Eigen::VectorXd v(graph.size());
  for (std::size_t r = 0; r < graph.size(); ++r) v(r) = graph[r].derivative(e);
  return v;
}

double CurvatureFrame::c(int i, int j, int k) const { return graph.at(0).coef(exponent_of({i, j, k})); }

double CurvatureFrame::d(int i, int j, int k, int l) const {
  return graph.at(0).coef(exponent_of({i, j, k, l}));
}

Eigen::VectorXd CurvatureFrame::mean_curvature() const {
  Eigen::VectorXd H = Eigen::VectorXd::Zero(graph.size());
  for (int i = 0; i < m; ++i) H += f({i, i});
  return H;
}

double CurvatureFrame::mean_curvature_scalar() const { return mean_curvature()(0); }

double CurvatureFrame::norm_h2() const {
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s += f({i, j}).squaredNorm();
  return s;
}

double CurvatureFrame::mean_curvature_sq() const { return mean_curvature().squaredNorm(); }

double CurvatureFrame::scalar_curvature() const { return mean_curvature_sq() - norm_h2(); }

CurvatureFrame curvature_frame(const ManifoldSpec& spec, int patch, const double* u, const FrameOptions& opt) {
  if (spec.is_polygon()) throw GeometryError("curvature frames are not defined for polygonal knots");
  const Patch& p = spec.patches.at(patch);
  const int m = spec.m, n = spec.n, cd = n - m;
  std::array<Jet<4>, kMaxAmbient> X;
  p.map.jet<4>(u, X.data());
  Eigen::VectorXd x0(n);
  Eigen::MatrixXd Xu(n, m);
  for (int a = 0; a < n; ++a) {
    x0(a) = X[a].c[0];
    for (int i = 0; i < m; ++i) Xu(a, i) = X[a].c[1 + i];
  }
  detail::FirstOrder fo;
  try {
    fo = detail::first_order(Xu, p.orientation);
  } catch (const GeometryError& e) {
    throw GeometryError(std::string(e.what()) + " at " + describe(patch, u, m));
  }
  const Eigen::MatrixXd& E0 = fo.E;
  const Eigen::MatrixXd& N0 = fo.N;

  // tangential coordinates t(s) and their reversion s(t)
  std::array<Jet<4>, kJetVars> t, nl;
  for (int i = 0; i < m; ++i) {
    Jet<4> v;
    for (int a = 0; a < n; ++a) v += (X[a] - x0(a)) * E0(a, i);
    t[i] = v;
  }
  Eigen::MatrixXd J(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) J(i, k) = t[i].c[1 + k];
  Eigen::MatrixXd Ji = J.inverse();
  for (int i = 0; i < m; ++i) {
    nl[i] = t[i];
    for (int k = 0; k <= m; ++k) nl[i].c[k] = 0.0;
  }
  std::array<Jet<4>, kJetVars> s;
  for (int k = 0; k < m; ++k) {
    Jet<4> v;
    for (int i = 0; i < m; ++i) v.c[1 + i] = Ji(k, i);
    s[k] = v;
  }
  for (int it = 0; it < 3; ++it) {
    Composer<4> C(s);
    std::array<Jet<4>, kJetVars> nls;
    for (int i = 0; i < m; ++i) nls[i] = C.apply(nl[i]);
    for (int k = 0; k < m; ++k) {
      Jet<4> v;
      for (int i = 0; i < m; ++i) {
        v.c[1 + i] += Ji(k, i);
        v -= nls[i] * Ji(k, i);
      }
      s[k] = v;
    }
  }
  Composer<4> C(s);
  std::vector<Jet<4>> F(cd);
  for (int a = 0; a < n; ++a) {
    Jet<4> ya = X[a] - x0(a);
    Jet<4> y = C.apply(ya);
    for (int r = 0; r < cd; ++r) F[r] += y * N0(a, r);
  }

  CurvatureFrame fr;
  fr.m = m;
  fr.n = n;
  fr.x = x0;
  fr.tangent = E0;
  fr.normal = N0;
  fr.graph = F;
  if (cd == 1) {
    Eigen::MatrixXd Hs(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Exponent e{0, 0, 0, 0};
        e[i] += 1;
        e[j] += 1;
        Hs(i, j) = F[0].derivative(e);
      }
    if (opt.principal) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
      std::vector<int> order(m);
      for (int i = 0; i < m; ++i) order[i] = i;
      const auto& ev = es.eigenvalues();
      Eigen::MatrixXd V0 = es.eigenvectors();
      // sign-normalise eigenvectors: first nonzero component positive
      for (int i = 0; i < m; ++i) {
        for (int a = 0; a < m; ++a)
          if (std::abs(V0(a, i)) > 1e-12) {
            if (V0(a, i) < 0) V0.col(i) = -V0.col(i);
            break;
          }
      }
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        double tol = 1e-12 * (1.0 + std::abs(ev(a)) + std::abs(ev(b)));
        if (std::abs(ev(a) - ev(b)) > tol) return ev(a) > ev(b);
        for (int k = 0; k < m; ++k)
          if (std::abs(V0(k, a) - V0(k, b)) > 1e-12) return V0(k, a) > V0(k, b);
        return false;
      });
      Eigen::MatrixXd V(m, m);
      for (int i = 0; i < m; ++i) V.col(i) = V0.col(order[i]);
      if (V.determinant() < 0) V.col(m - 1) = -V.col(m - 1);
      fr.tangent = E0 * V;
      fr.graph = linear_substitute(F, V);
    }
    fr.kappa.resize(m);
    for (int i = 0; i < m; ++i) fr.kappa(i) = fr.f({i, i})(0);
  }
  return fr;
}

CurvatureFrame curvature_frame(const ManifoldSpec& spec, int patch, const std::vector<double>& u,
                               const FrameOptions& opt) {
  return curvature_frame(spec, patch, u.data(), opt);
}

CurvatureFrame rotate_frame(const CurvatureFrame& fr, const Eigen::MatrixXd& Q) {
  CurvatureFrame r = fr;
  r.tangent = fr.tangent * Q;
  r.graph = linear_substitute(fr.graph, Q);
  if (fr.codim() == 1) {
    r.kappa.resize(fr.m);
    for (int i = 0; i < fr.m; ++i) r.kappa(i) = r.f({i, i})(0);
  }
  return r;
}

CurvatureFrame flip_frame(const CurvatureFrame& fr) {
  CurvatureFrame r = fr;
  r.normal = -fr.normal;
  for (auto& g : r.graph) g = -g;
  if (r.kappa.size()) r.kappa = -fr.kappa;
  return r;
}

// ---------------- Laplacians at the origin from graph derivatives ----------------

LaplacianInvariants laplacian_invariants(const CurvatureFrame& fr) {
  const int m = fr.m;
  if (fr.graph.empty()) throw GeometryError("laplacian_invariants: missing graph data");
  using V = Eigen::VectorXd;
  std::vector<V> f2(m * m), f3(m * m * m), f4(m * m * m * m);
  auto i2 = [m](int i, int j) { return i * m + j; };
  auto i3 = [m](int i, int j, int k) { return (i * m + j) * m + k; };
  auto i4 = [m](int i, int j, int k, int l) { return ((i * m + j) * m + k) * m + l; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      f2[i2(i, j)] = fr.f({i, j});
      for (int k = 0; k < m; ++k) {
        f3[i3(i, j, k)] = fr.f({i, j, k});
        for (int l = 0; l < m; ++l) f4[i4(i, j, k, l)] = fr.f({i, j, k, l});
      }
    }
  V H = fr.mean_curvature();
  LaplacianInvariants L;
  double s = 0.0;
  // Delta Sc
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double hij = H.dot(f2[i2(i, j)]);
      double ikjk = 0.0;
      for (int k = 0; k < m; ++k) ikjk += f2[i2(i, k)].dot(f2[i2(j, k)]);
      s += -4.0 * hij * ikjk - 2.0 * hij * hij + 2.0 * ikjk * ikjk;
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double a = f2[i2(i, j)].dot(f2[i2(k, l)]);
          s += 2.0 * a * a;
          s += 2.0 * f2[i2(i, k)].dot(f2[i2(i, l)]) * f2[i2(j, k)].dot(f2[i2(j, l)]);
        }
    }
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l)
      for (int k = 0; k < m; ++k) {
        s += 2.0 * f3[i3(j, j, k)].dot(f3[i3(l, l, k)]) + 2.0 * f2[i2(j, j)].dot(f4[i4(l, l, k, k)]);
        s -= 2.0 * f3[i3(j, l, k)].squaredNorm() + 2.0 * f2[i2(j, l)].dot(f4[i4(j, l, k, k)]);
      }
  L.lap_sc = s;
  // Delta |H|^2
  s = 0.0;
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      double a = H.dot(f2[i2(k, l)]);
      s += -2.0 * a * a;
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double a = 0.0;
      for (int l = 0; l < m; ++l) a += f2[i2(i, l)].dot(f2[i2(j, l)]);
      s += -4.0 * a * f2[i2(i, j)].dot(H);
    }
  for (int k = 0; k < m; ++k) {
    V g = V::Zero(H.size());
    for (int i = 0; i < m; ++i) g += f3[i3(i, i, k)];
    s += 2.0 * g.squaredNorm();
    for (int i = 0; i < m; ++i)
      for (int l = 0; l < m; ++l) s += 2.0 * f2[i2(k, k)].dot(f4[i4(i, i, l, l)]);
  }
  L.lap_h2 = s;
  // |grad^perp H|^2 at the origin: sum_j |sum_k f_jkk|^2
  s = 0.0;
  for (int j = 0; j < m; ++j) {
    V g = V::Zero(H.size());
    for (int k = 0; k < m; ++k) g += f3[i3(j, k, k)];
    s += g.squaredNorm();
  }
  L.grad_perp_h2 = s;
  if (fr.codim() == 1 && m == 4) {
    const auto& k = fr.kappa;
    double Hs = k.sum(), k2 = k.squaredNorm(), k3 = 0.0;
    for (int i = 0; i < 4; ++i) k3 += k(i) * k(i) * k(i);
    double d1 = 0.0, d2 = 0.0;
    for (int i = 0; i < 4; ++i) {
      d1 += fr.d(i, i, i, i);
      for (int j = i + 1; j < 4; ++j) d2 += fr.d(i, i, j, j);
    }
    L.lap_h = -2.0 * k3 - Hs * k2 + 24.0 * d1 + 8.0 * d2;
    double g = 0.0;
    for (int i = 0; i < 4; ++i) {
      double a = 2.0 * fr.c(i, i, i);
      for (int j = 0; j < 4; ++j) a += fr.c(i, j, j);
      g += a * a;
    }
    L.grad_h2 = 4.0 * g;
  }
  return L;
}

// ---------------- frame-free quantities from the parametrization ----------------

namespace {

template <int D>
using JMat = std::array<std::array<Jet<D>, kMaxIntrinsic>, kMaxIntrinsic>;

template <int D>
JMat<D> invert(const JMat<D>& G, int m) {
  JMat<D> A = G, Gi;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) Gi[i][j] = Jet<D>(i == j ? 1.0 : 0.0);
  for (int col = 0; col < m; ++col) {
    Jet<D> piv = recip(A[col][col]);
    for (int j = 0; j < m; ++j) {
      A[col][j] = A[col][j] * piv;
      Gi[col][j] = Gi[col][j] * piv;
    }
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      Jet<D> f = A[r][col];
      for (int j = 0; j < m; ++j) {
        A[r][j] -= f * A[col][j];
        Gi[r][j] -= f * Gi[col][j];
      }
    }
  }
  return Gi;
}

}  // namespace

IntrinsicData intrinsic_data(const ManifoldSpec& spec, int patch, const double* u) {
  const Patch& p = spec.patches.at(patch);
  const int m = spec.m, n = spec.n;
  std::array<Jet<4>, kMaxAmbient> X;
  p.map.jet<4>(u, X.data());
  using J2 = Jet<2>;
  std::array<std::array<J2, kMaxAmbient>, kMaxIntrinsic> Xi;
  std::array<std::array<std::array<J2, kMaxAmbient>, kMaxIntrinsic>, kMaxIntrinsic> Xij;
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < n; ++a) {
      Jet<3> d = diff(X[a], i);
      Xi[i][a] = truncate<2>(d);
      for (int j = 0; j < m; ++j) Xij[i][j][a] = diff(d, j);
    }
  JMat<2> G;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      J2 s;
      for (int a = 0; a < n; ++a) s += Xi[i][a] * Xi[j][a];
      G[i][j] = s;
    }
  JMat<2> Gi = invert(G, m);
  // Christoffel symbols Gamma^k_ij
  std::array<JMat<2>, kMaxIntrinsic> Gam;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::array<J2, kMaxIntrinsic> q;
      for (int l = 0; l < m; ++l) {
        J2 s;
        for (int a = 0; a < n; ++a) s += Xij[i][j][a] * Xi[l][a];
        q[l] = s;
      }
      for (int k = 0; k < m; ++k) {
        J2 s;
        for (int l = 0; l < m; ++l) s += Gi[k][l] * q[l];
        Gam[k][i][j] = s;
      }
    }
  // second fundamental form vectors
  std::array<std::array<std::array<J2, kMaxAmbient>, kMaxIntrinsic>, kMaxIntrinsic> II;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int a = 0; a < n; ++a) {
        J2 v = Xij[i][j][a];
        for (int k = 0; k < m; ++k) v -= Gam[k][i][j] * Xi[k][a];
        II[i][j][a] = v;
      }
  std::array<J2, kMaxAmbient> Hv;
  for (int a = 0; a < n; ++a) {
    J2 s;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += Gi[i][j] * II[i][j][a];
    Hv[a] = s;
  }
  auto dot = [n](const std::array<J2, kMaxAmbient>& A, const std::array<J2, kMaxAmbient>& B) {
    J2 s;
    for (int a = 0; a < n; ++a) s += A[a] * B[a];
    return s;
  };
  J2 H2 = dot(Hv, Hv);
  J2 nh2;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      J2 inner;
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) inner += Gi[j][l] * dot(II[i][j], II[k][l]) * Gi[i][k];
      nh2 += inner;
    }
  J2 sc = H2 - nh2;

  // values at the origin
  Eigen::MatrixXd g(m, m), gi(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      g(i, j) = G[i][j].value();
      gi(i, j) = Gi[i][j].value();
    }
  auto lap = [&](const J2& eta) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Exponent e{0, 0, 0, 0};
        e[i] += 1;
        e[j] += 1;
        double d2 = eta.derivative(e);
        for (int k = 0; k < m; ++k) d2 -= Gam[k][i][j].value() * eta.c[1 + k];
        s += gi(i, j) * d2;
      }
    return s;
  };
  auto grad2 = [&](const J2& eta) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += gi(i, j) * eta.c[1 + i] * eta.c[1 + j];
    return s;
  };

  IntrinsicData out;
  out.sqrt_g = std::sqrt(g.determinant());
  out.H2 = H2.value();
  out.norm_h2 = nh2.value();
  out.sc = sc.value();
  out.lap_H2 = lap(H2);
  out.lap_sc = lap(sc);

  // Xu, tangent projection at the origin
  Eigen::MatrixXd Xu(n, m);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) Xu(a, i) = Xi[i][a].value();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - Xu * gi * Xu.transpose();
  // |grad^perp H|^2 and sum <h_ij, H>^2
  {
    std::vector<Eigen::VectorXd> dH(m, Eigen::VectorXd(n));
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < n; ++a) dH[i](a) = Hv[a].c[1 + i];
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s += gi(i, j) * (P * dH[i]).dot(P * dH[j]);
    out.grad_perp_H2 = s;
    Eigen::MatrixXd hH(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) hH(i, j) = dot(II[i][j], Hv).value();
    Eigen::MatrixXd A = gi * hH * gi;
    out.hH2 = (A.array() * hH.array()).sum();
  }
  // Riemann tensor from the Gauss equation
  {
    auto R = [&](int i, int j, int k, int l) {
      return dot(II[i][k], II[j][l]).value() - dot(II[i][l], II[j][k]).value();
    };
    std::vector<double> Rm(m * m * m * m);
    auto id = [m](int i, int j, int k, int l) { return ((i * m + j) * m + k) * m + l; };
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) Rm[id(i, j, k, l)] = R(i, j, k, l);
    // raise all indices
    std::vector<double> Ru(Rm.size(), 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            double s = 0.0;
            for (int a = 0; a < m; ++a)
              for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c)
                  for (int d = 0; d < m; ++d)
                    s += gi(i, a) * gi(j, b) * gi(k, c) * gi(l, d) * Rm[id(a, b, c, d)];
            Ru[id(i, j, k, l)] = s;
          }
    double rm2 = 0.0;
    for (std::size_t q = 0; q < Rm.size(); ++q) rm2 += Rm[q] * Ru[q];
    out.rm2 = rm2;
    Eigen::MatrixXd Ric = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l)
        for (int i = 0; i < m; ++i)
          for (int k = 0; k < m; ++k) Ric(j, l) += gi(i, k) * Rm[id(i, j, k, l)];
    Eigen::MatrixXd Ru2 = gi * Ric * gi;
    out.ric2 = (Ru2.array() * Ric.array()).sum();
  }
  if (spec.hypersurface()) {
    auto fo = detail::first_order(Xu, p.orientation);
    Eigen::VectorXd nu0 = fo.N.col(0);
    std::array<Jet<3>, kMaxAmbient> X3;
    for (int a = 0; a < n; ++a) X3[a] = truncate<3>(X[a]);
    std::array<J2, kMaxAmbient> nu;
    detail::normal_jets<2>(X3.data(), m, n, nu0, nu.data());
    J2 Hs = dot(Hv, nu);
    out.H = Hs.value();
    out.lap_H = lap(Hs);
    out.grad_H2 = grad2(Hs);
    if (m == 2) {
      // scalar second fundamental form and its covariant derivatives
      std::array<std::array<J2, 2>, 2> h;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) h[i][j] = dot(II[i][j], nu);
      using J1 = Jet<1>;
      // h_{ij;k} as degree-1 jets
      J1 hk[2][2][2];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k) {
            J1 v = diff(h[i][j], k);
            for (int q = 0; q < 2; ++q) {
              v -= truncate<1>(Gam[q][k][i]) * truncate<1>(h[q][j]);
              v -= truncate<1>(Gam[q][k][j]) * truncate<1>(h[i][q]);
            }
            hk[i][j][k] = v;
          }
      double hkl[2][2][2][2];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
              double v = hk[i][j][k].c[1 + l];
              for (int q = 0; q < 2; ++q) {
                v -= Gam[q][l][k].value() * hk[i][j][q].value();
                v -= Gam[q][l][i].value() * hk[q][j][k].value();
                v -= Gam[q][l][j].value() * hk[i][q][k].value();
              }
              hkl[i][j][k][l] = v;
            }
      double a = 0.0, b = 0.0, c = 0.0, d = 0.0, Hval = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Hval += gi(i, j) * h[i][j].value();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int i2 = 0; i2 < 2; ++i2)
              for (int j2 = 0; j2 < 2; ++j2)
                for (int k2 = 0; k2 < 2; ++k2) {
                  double gg = gi(i, i2) * gi(j, j2) * gi(k, k2);
                  a += gg * hk[i][j][k].value() * hk[i2][j2][k2].value();
                  c += gg * h[i][j].value() * hkl[i2][j2][k][k2];
                  d += gg * h[i][j].value() * hkl[k][k2][i2][j2];
                }
      for (int j = 0; j < 2; ++j)
        for (int j2 = 0; j2 < 2; ++j2)
          for (int k = 0; k < 2; ++k)
            for (int k2 = 0; k2 < 2; ++k2) b += gi(j, j2) * gi(k, k2) * hkl[j][j2][k][k2];
      out.t6_grad_h2 = a;
      out.t6_H_laph = Hval * b;
      out.t6_h_laph = c;
      out.t6_h_hessH = d;
    }
  }
  return out;
}

// ---------------- integration ----------------

namespace {

struct Sample {
  int patch;
  std::array<double, kMaxIntrinsic> u;
  double w;
};

std::vector<Sample> integration_samples(const ManifoldSpec& spec, const IntegrationOptions& opt, bool& axial) {
  std::vector<Sample> out;
  axial = opt.allow_axial && !spec.axial.empty();
  if (axial) {
    for (const auto& ac : spec.axial) {
      Rule1D g = gauss_legendre(4 * opt.order, ac.theta_lo, ac.theta_hi);
      for (std::size_t k = 0; k < g.x.size(); ++k) {
        auto loc = ac.locate(g.x[k]);
        Sample s;
        s.patch = loc.first;
        s.u.fill(0.0);
        for (std::size_t i = 0; i < loc.second.size(); ++i) s.u[i] = loc.second[i];
        s.w = g.w[k] * ac.measure(g.x[k]);
        out.push_back(s);
      }
    }
    return out;
  }
  const int m = spec.m;
  for (std::size_t pi = 0; pi < spec.patches.size(); ++pi) {
    const Patch& p = spec.patches[pi];
    std::vector<Rule1D> rules;
    for (int i = 0; i < m; ++i) rules.push_back(gauss_legendre(opt.order, p.lo[i], p.hi[i]));
    long total = 1;
    for (int i = 0; i < m; ++i) total *= opt.order;
    for (long idx = 0; idx < total; ++idx) {
      Sample s;
      s.patch = static_cast<int>(pi);
      s.u.fill(0.0);
      s.w = 1.0;
      long r = idx;
      for (int i = 0; i < m; ++i) {
        int k = static_cast<int>(r % opt.order);
        r /= opt.order;
        s.u[i] = rules[i].x[k];
        s.w *= rules[i].w[k];
      }
      out.push_back(s);
    }
  }
  return out;
}

std::vector<double> reduce(const std::vector<double>& slots, std::size_t count, int nvals) {
  std::vector<double> out(nvals);
  std::vector<double> col(count);
  for (int v = 0; v < nvals; ++v) {
    for (std::size_t i = 0; i < count; ++i) col[i] = slots[i * nvals + v];
    out[v] = pairwise_sum(col);
  }
  return out;
}

}  // namespace

std::vector<double> integrate_frames(const ManifoldSpec& spec, const IntegrationOptions& opt, int nvals,
                                     const std::function<void(const CurvatureFrame&, double*)>& fn) {
  bool axial;
  auto samples = integration_samples(spec, opt, axial);
  std::vector<double> slots(samples.size() * nvals, 0.0);
  parallel_for(samples.size(), opt.workers, [&](std::size_t i) {
    const Sample& s = samples[i];
    CurvatureFrame fr = curvature_frame(spec, s.patch, s.u.data());
    double w = s.w;
    if (!axial) w *= point_data(spec, s.patch, s.u.data()).w;
    std::vector<double> v(nvals, 0.0);
    fn(fr, v.data());
    for (int k = 0; k < nvals; ++k) slots[i * nvals + k] = w * v[k];
  });
  return reduce(slots, samples.size(), nvals);
}

std::vector<double> integrate_points(
    const ManifoldSpec& spec, const IntegrationOptions& opt, int nvals,
    const std::function<void(int, const double*, const QuadratureNode&, double*)>& fn) {
  bool axial;
  auto samples = integration_samples(spec, opt, axial);
  std::vector<double> slots(samples.size() * nvals, 0.0);
  parallel_for(samples.size(), opt.workers, [&](std::size_t i) {
    const Sample& s = samples[i];
    QuadratureNode q = point_data(spec, s.patch, s.u.data());
    double w = axial ? s.w : s.w * q.w;
    std::vector<double> v(nvals, 0.0);
    fn(s.patch, s.u.data(), q, v.data());
    for (int k = 0; k < nvals; ++k) slots[i * nvals + k] = w * v[k];
  });
  return reduce(slots, samples.size(), nvals);
}

double volume(const ManifoldSpec& spec, int order) {
  IntegrationOptions o;
  o.order = order;
  return integrate_points(spec, o, 1, [](int, const double*, const QuadratureNode&, double* v) { v[0] = 1.0; })[0];
}

double enclosed_volume(const ManifoldSpec& spec, int order) {
  if (!spec.hypersurface()) throw GeometryError("enclosed_volume: needs a hypersurface boundary");
  IntegrationOptions o;
  o.order = order;
  o.allow_axial = false;
  const double n = spec.n;
  return integrate_points(spec, o, 1, [n](int, const double*, const QuadratureNode& q, double* v) {
    v[0] = q.x.dot(q.normal) / n;
  })[0];
}

double reach_estimate(const ManifoldSpec& spec, int order) {
  double mx = 0.0;
  for (std::size_t pi = 0; pi < spec.patches.size(); ++pi) {
    const Patch& p = spec.patches[pi];
    const int m = spec.m;
    std::vector<Rule1D> rules;
    for (int i = 0; i < m; ++i) rules.push_back(gauss_legendre(order, p.lo[i], p.hi[i]));
    long total = 1;
    for (int i = 0; i < m; ++i) total *= order;
    for (long idx = 0; idx < total; ++idx) {
      std::array<double, kMaxIntrinsic> u{};
      long r = idx;
      for (int i = 0; i < m; ++i) {
        u[i] = rules[i].x[r % order];
        r /= order;
      }
      // second-order data is enough here
      std::array<Jet<2>, kMaxAmbient> X;
      p.map.jet<2>(u.data(), X.data());
      CurvatureFrame fr = curvature_frame(spec, static_cast<int>(pi), u.data(), FrameOptions{false});
      mx = std::max(mx, std::sqrt(fr.norm_h2()));
    }
  }
  return mx > 0 ? 1.0 / mx : std::numeric_limits<double>::infinity();
}

double diameter_estimate(const ManifoldSpec& spec, int order) {
  std::vector<Eigen::VectorXd> pts;
  if (spec.is_polygon()) {
    pts = spec.polygon;
  } else {
    int o = spec.m >= 3 ? std::min(order, 4) : order;
    for (const auto& q : sample_quadrature(spec, o)) pts.push_back(q.x);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

}  // namespace rlab
