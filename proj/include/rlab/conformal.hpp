#pragma once

#include <array>

#include "rlab/manifold.hpp"

namespace rlab {

using Kappa4 = std::array<double, 4>;

// (1/128) int (|grad^perp H|^2 - <h_ij,H><h_ij,H> + 7/16 |H|^4), m = 4
double graham_witten(const ManifoldSpec& spec, int order = 0);
// pointwise integrand of the above (hypersurface or any codimension)
double gw_density(const IntrinsicData& d, bool hypersurface);

// |W|^2 of a 4-dimensional hypersurface: coefficient form and the sum over orderings
double weyl_norm_hyp(const Kappa4& k);
double weyl_norm_hyp_product(const Kappa4& k);
double chern_density(const Kappa4& k);  // X = 6 k1 k2 k3 k4
// Moebius invariant principal curvature density, coefficient and product forms
double q_energy(const Kappa4& k);
double q_energy_product(const Kappa4& k);

struct EnergyBreakdown {
  double gw = 0.0;
  double weyl = 0.0;      // int |W|^2
  double chern = 0.0;     // int X
  double z_energy = 0.0;  // int q
  double r8 = 0.0, r8_nu = 0.0;
  double r8_modified = 0.0, r8_nu_modified = 0.0;
  double residual = 0.0;  // gw - 3/(2 pi^2)(r8_nu + 2 r8) + (12 weyl + 5 z)/2048
};
EnergyBreakdown gw_identity(const ManifoldSpec& spec, int order = 0);

// integral over theta of sigma(kappa) - sigma(kappa~) / (a^2 cos^2 + sin^2)^4 on the a-spheroid
double classification_harness(double c1, double c2, double c3, double a);

struct SpheroidRelative {
  double Ra = 0.0, Ra_tilde = 0.0;                // quadrature
  double Ra_closed = 0.0, Ra_tilde_closed = 0.0;  // closed forms
  double R1 = 0.0;
  bool below = false;  // Ra + Ra_tilde < 2 R1
};
SpheroidRelative spheroid_relative_check(double a);

}  // namespace rlab
