#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rlab/manifold.hpp"

namespace rlab {

struct MobiusStep {
  enum class Kind { Inversion, Similarity } kind = Kind::Similarity;
  // inversion x -> c + r^2 (x - c) / |x - c|^2
  Eigen::VectorXd center;
  double radius = 1.0;
  // similarity x -> s Q x + t
  double scale = 1.0;
  Eigen::MatrixXd rotation;  // empty means identity
  Eigen::VectorXd translation;
};

// Steps are applied in order.
struct MobiusMap {
  std::vector<MobiusStep> steps;

  static MobiusMap inversion(const Eigen::VectorXd& center, double radius = 1.0);
  static MobiusMap similarity(double scale, const Eigen::MatrixXd& rotation = {},
                              const Eigen::VectorXd& translation = {});
  MobiusMap then(const MobiusMap& next) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  // factor by which lengths are multiplied at x
  double conformal_factor(const Eigen::VectorXd& x) const;
  int inversion_count() const;
  // every step keeps rotational symmetry about the last coordinate axis
  bool preserves_last_axis(int n) const;
};

// Pushes patch embeddings through the map. Inversions reverse orientation; closed hypersurfaces
// end with the outward normal and bodies must stay bounded.
ManifoldSpec transform_spec(const ManifoldSpec& spec, const MobiusMap& map, double guard_factor = 1e-2);

// Principal curvatures at the image of x = center + p under an inversion of radius r, measured
// with the outward normal of the image. center_inside tells whether the center lies in the
// region bounded by the surface.
std::vector<double> transformed_curvatures(const std::vector<double>& kappa, const Eigen::VectorXd& p,
                                           const Eigen::VectorXd& nu, bool center_inside, double radius = 1.0);

struct InvarianceReport {
  std::string quantity;
  double before = 0.0, after = 0.0, diff = 0.0;
};

// quantity: residue (R(-2m)), nu-residue (R_nu(-2m)), beta (B(-2m), knots), body (R_Omega(-2n)),
// relative (R_{Omega,dOmega}(-n-3)), gw, weyl, z
double invariance_quantity(const ManifoldSpec& spec, const std::string& quantity, int order = 0);
InvarianceReport invariance_report(const ManifoldSpec& spec, const MobiusMap& map, const std::string& quantity,
                                   int order = 0);

}  // namespace rlab
