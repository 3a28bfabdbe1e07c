#pragma once

// Internal helpers shared by the manifold sources.

#include <array>
#include <type_traits>

#include <Eigen/Dense>

#include "rlab/manifold.hpp"

namespace rlab::detail {

template <class T>
using scalar_t = std::remove_cv_t<std::remove_reference_t<T>>;

// Oriented orthonormal tangent basis (n x m) and, for hypersurfaces, the normal.
// Orientation follows the parametrization multiplied by `orientation`.
struct FirstOrder {
  Eigen::MatrixXd Xu;
  Eigen::MatrixXd E;
  Eigen::MatrixXd N;  // n x (n - m)
  double sqrt_g = 0.0;
};

FirstOrder first_order(const Eigen::MatrixXd& Xu, int orientation);

// Build a patch map x = g(base(u)) where g is a generic callable g(const T* y, T* x).
template <class G>
PatchMap post_compose(const PatchMap& base, int n_in, G g) {
  PatchMap p;
  p.eval = [base, g, n_in](const double* u, double* x) {
    std::array<double, kMaxAmbient> y{};
    base.eval(u, y.data());
    g(y.data(), x);
    (void)n_in;
  };
  auto mk = [base, g](auto tag) {
    using J = decltype(tag);
    return [base, g](const double* u0, J* x) {
      std::array<J, kMaxAmbient> y;
      base.template jet<J::kDegree>(u0, y.data());
      g(y.data(), x);
    };
  };
  p.jet1 = mk(Jet<1>());
  p.jet2 = mk(Jet<2>());
  p.jet3 = mk(Jet<3>());
  p.jet4 = mk(Jet<4>());
  if (base.jet5) p.jet5 = mk(Jet<5>());
  return p;
}

// Unit normal field as jets of degree D from position jets of degree D + 1.
template <int D>
void normal_jets(const Jet<D + 1>* X, int m, int n, const Eigen::VectorXd& nu0, Jet<D>* nu) {
  std::array<std::array<Jet<D>, kMaxAmbient>, kMaxIntrinsic> Xi;
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < n; ++a) Xi[i][a] = diff(X[a], i);
  // metric and its inverse
  std::array<std::array<Jet<D>, kMaxIntrinsic>, kMaxIntrinsic> G, Gi;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      Jet<D> s;
      for (int a = 0; a < n; ++a) s += Xi[i][a] * Xi[j][a];
      G[i][j] = s;
      G[j][i] = s;
    }
  // Gauss-Jordan on jets
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) Gi[i][j] = Jet<D>(i == j ? 1.0 : 0.0);
  auto A = G;
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
  std::array<Jet<D>, kMaxIntrinsic> p;  // <X_l, nu0>
  for (int l = 0; l < m; ++l) {
    Jet<D> s;
    for (int a = 0; a < n; ++a) s += Xi[l][a] * nu0(a);
    p[l] = s;
  }
  std::array<Jet<D>, kMaxIntrinsic> q;  // g^{kl} p_l
  for (int k = 0; k < m; ++k) {
    Jet<D> s;
    for (int l = 0; l < m; ++l) s += Gi[k][l] * p[l];
    q[k] = s;
  }
  Jet<D> norm2;
  for (int a = 0; a < n; ++a) {
    Jet<D> w(nu0(a));
    for (int k = 0; k < m; ++k) w -= Xi[k][a] * q[k];
    nu[a] = w;
    norm2 += w * w;
  }
  Jet<D> inv = pow(norm2, -0.5);
  for (int a = 0; a < n; ++a) nu[a] = nu[a] * inv;
}

}  // namespace rlab::detail
