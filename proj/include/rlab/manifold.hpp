#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rlab/jet.hpp"

namespace rlab {

inline constexpr int kMaxAmbient = 8;
inline constexpr int kMaxIntrinsic = 4;
inline constexpr int kMaxJetDegree = 5;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Type-erased embedding u -> x, evaluable on doubles and on jets of degree 1..5.
// Jet evaluation expands around u0 with parameter offsets as the jet variables.
class PatchMap {
 public:
  std::function<void(const double*, double*)> eval;
  std::function<void(const double*, Jet<1>*)> jet1;
  std::function<void(const double*, Jet<2>*)> jet2;
  std::function<void(const double*, Jet<3>*)> jet3;
  std::function<void(const double*, Jet<4>*)> jet4;
  std::function<void(const double*, Jet<5>*)> jet5;

  template <int D>
  void jet(const double* u0, Jet<D>* x) const {
    if constexpr (D == 1) {
      jet1(u0, x);
    } else if constexpr (D == 2) {
      jet2(u0, x);
    } else if constexpr (D == 3) {
      jet3(u0, x);
    } else if constexpr (D == 4) {
      jet4(u0, x);
    } else {
      static_assert(D == 5, "jet degree out of range");
      if (!jet5) throw GeometryError("patch map does not provide degree-5 jets");
      jet5(u0, x);
    }
  }
};

// f is a generic callable f(const T* u, T* x) usable with T = double and T = Jet<D>.
template <class F>
PatchMap make_patch_map(int m, F f) {
  PatchMap p;
  p.eval = [f](const double* u, double* x) { f(u, x); };
  auto lift = [f, m](auto tag) {
    using J = decltype(tag);
    return [f, m](const double* u0, J* x) {
      std::array<J, kMaxIntrinsic> u;
      for (int i = 0; i < kMaxIntrinsic; ++i) u[i] = i < m ? J::variable(i, u0[i]) : J(0.0);
      f(u.data(), x);
    };
  };
  p.jet1 = lift(Jet<1>());
  p.jet2 = lift(Jet<2>());
  p.jet3 = lift(Jet<3>());
  p.jet4 = lift(Jet<4>());
  p.jet5 = lift(Jet<5>());
  return p;
}

struct Patch {
  std::vector<double> lo, hi;
  PatchMap map;
  int orientation = 1;  // multiplies the normal induced by the parametrization
  int component = 0;
};

// Reduction of an axisymmetric hypersurface component to its generating curve.
// locate(theta) gives a patch and parameter of a point on the generating curve;
// measure(theta) is the m-volume density per unit theta (fiber volume included).
struct AxialComponent {
  double theta_lo = 0.0, theta_hi = 0.0;
  std::function<std::pair<int, std::vector<double>>(double)> locate;
  std::function<double(double)> measure;
};

struct ManifoldSpec {
  std::string kind;
  std::map<std::string, double> params;
  int m = 0;
  int n = 0;
  std::vector<Patch> patches;
  bool oriented = true;
  bool closed = true;
  bool is_body = false;  // patches then describe the boundary, normals outward
  std::vector<Eigen::VectorXd> polygon;
  std::vector<AxialComponent> axial;
  // set for ellipsoids centred at the origin (enables the polar direct path)
  Eigen::VectorXd ellipsoid_axes;
  // set for round spheres centred at the origin (enables geodesic distance)
  double round_radius = 0.0;
  // boundary dimension helpers
  bool is_polygon() const { return !polygon.empty(); }
  bool hypersurface() const { return n == m + 1; }
};

struct QuadratureNode {
  int patch = 0;
  std::vector<double> u;
  Eigen::VectorXd x;
  double w = 0.0;
  Eigen::VectorXd normal;   // hypersurfaces only
  Eigen::MatrixXd tangent;  // oriented orthonormal basis, n x m
};

// Gauss-Legendre tensor rule on every patch, weights include sqrt(det g).
std::vector<QuadratureNode> sample_quadrature(const ManifoldSpec& spec, int order);
// same with a separate order per patch
std::vector<QuadratureNode> sample_quadrature(const ManifoldSpec& spec, const std::vector<int>& orders);

// first-order data at a parameter point (weight set to sqrt(det g))
QuadratureNode point_data(const ManifoldSpec& spec, int patch, const double* u);

struct CurvatureFrame {
  int m = 0, n = 0;
  Eigen::VectorXd x;
  Eigen::MatrixXd tangent;  // n x m; principal directions for hypersurfaces
  Eigen::MatrixXd normal;   // n x (n - m); column 0 is the outward normal for hypersurfaces
  Eigen::VectorXd kappa;    // principal curvatures, descending (hypersurfaces)
  std::vector<Jet<4>> graph;  // normal components of the graph function in this frame

  // derivatives of the graph function at the origin, as normal-space vectors
  Eigen::VectorXd f(std::initializer_list<int> idx) const;
  // monomial coefficients (indices in any order), hypersurfaces
  double c(int i, int j, int k) const;
  double d(int i, int j, int k, int l) const;

  Eigen::VectorXd h(int i, int j) const { return f({i, j}); }
  Eigen::VectorXd mean_curvature() const;  // normal-space components
  double mean_curvature_scalar() const;    // hypersurfaces
  double norm_h2() const;
  double mean_curvature_sq() const;
  double scalar_curvature() const;
  int codim() const { return n - m; }
};

struct FrameOptions {
  bool principal = true;  // rotate to principal directions (hypersurfaces)
};

CurvatureFrame curvature_frame(const ManifoldSpec& spec, int patch, const double* u,
                               const FrameOptions& opt = {});
CurvatureFrame curvature_frame(const ManifoldSpec& spec, int patch, const std::vector<double>& u,
                               const FrameOptions& opt = {});

// Same frame rotated within the tangent space by an orthogonal matrix (det +1).
CurvatureFrame rotate_frame(const CurvatureFrame& fr, const Eigen::MatrixXd& Q);
// Same point with the normal orientation reversed.
CurvatureFrame flip_frame(const CurvatureFrame& fr);

struct LaplacianInvariants {
  double lap_sc = 0.0;
  double lap_h2 = 0.0;
  double lap_h = 0.0;     // 4-D hypersurfaces
  double grad_h2 = 0.0;   // |grad H|^2, 4-D hypersurfaces
  double grad_perp_h2 = 0.0;  // |grad^perp H|^2 from third derivatives (any codim)
};
LaplacianInvariants laplacian_invariants(const CurvatureFrame& fr);

// Frame-free quantities computed from the parametrization (metric, Christoffel symbols).
struct IntrinsicData {
  double H = 0.0;       // hypersurfaces
  double H2 = 0.0;      // |H|^2
  double norm_h2 = 0.0;
  double sc = 0.0;
  double rm2 = 0.0;     // |Rm|^2
  double ric2 = 0.0;    // |Ric|^2
  double lap_H = 0.0;
  double lap_H2 = 0.0;
  double lap_sc = 0.0;
  double grad_H2 = 0.0;       // |grad H|^2 (hypersurfaces)
  double grad_perp_H2 = 0.0;  // |grad^perp H|^2
  double hH2 = 0.0;           // sum_ij <h_ij, H>^2
  double sqrt_g = 0.0;
  // surfaces in R^3: covariant derivative contractions
  double t6_grad_h2 = 0.0;     // h_ij;k h_ij;k
  double t6_H_laph = 0.0;      // h_ii h_jj;kk
  double t6_h_laph = 0.0;      // h_ij h_ij;kk
  double t6_h_hessH = 0.0;     // h_ij h_kk;ij
};
IntrinsicData intrinsic_data(const ManifoldSpec& spec, int patch, const double* u);

double nu_weight(const Eigen::MatrixXd& Ex, const Eigen::MatrixXd& Ey);

// ----- integration over a spec -----
struct IntegrationOptions {
  int order = 24;
  bool allow_axial = true;
  int workers = 0;
};

// Integrates nvals local quantities computed from curvature frames.
std::vector<double> integrate_frames(const ManifoldSpec& spec, const IntegrationOptions& opt, int nvals,
                                     const std::function<void(const CurvatureFrame&, double*)>& fn);
// Integrates quantities computed from a patch point (first-order data only).
std::vector<double> integrate_points(const ManifoldSpec& spec, const IntegrationOptions& opt, int nvals,
                                     const std::function<void(int, const double*, const QuadratureNode&, double*)>& fn);

double volume(const ManifoldSpec& spec, int order = 24);
// (1/n) int <x, nu> over the boundary of a body (or enclosed volume of a hypersurface)
double enclosed_volume(const ManifoldSpec& spec, int order = 24);
double reach_estimate(const ManifoldSpec& spec, int order = 8);
double diameter_estimate(const ManifoldSpec& spec, int order = 8);

// ----- builtin shapes -----
ManifoldSpec make_circle(double r);
ManifoldSpec make_ellipse(double a, double b, bool body = false);
ManifoldSpec make_sphere(int m, double r);
ManifoldSpec make_ball(int n, double r);
ManifoldSpec make_ellipsoid(const std::vector<double>& axes, bool body = false);
ManifoldSpec make_spheroid(double a, int m = 4);
ManifoldSpec make_torus(double R, double r, int splits_theta = 4, int splits_phi = 4);
ManifoldSpec make_clifford_torus(double r1, double r2);
ManifoldSpec make_polygon_knot(const std::vector<Eigen::VectorXd>& vertices);
// body between an outer ellipsoid and an inner concentric round sphere
ManifoldSpec make_shell(const std::vector<double>& outer_axes, double inner_radius);
// parallel body / offset hypersurface at signed distance eps along the normal
ManifoldSpec make_offset(const ManifoldSpec& spec, double eps);
// uniform scaling x -> c x
ManifoldSpec make_scaled(const ManifoldSpec& spec, double c);
ManifoldSpec with_orientation(const ManifoldSpec& spec, int sign);

// Reverse the parameter order of every patch (a second parametrization of the same set).
ManifoldSpec reparametrize_swap(const ManifoldSpec& spec);

}  // namespace rlab
