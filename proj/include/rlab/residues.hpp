#pragma once

#include <string>
#include <vector>

#include "rlab/continuation.hpp"
#include "rlab/manifold.hpp"

namespace rlab {

struct ResidueEntry {
  double pole = 0.0;
  double value = 0.0;
  std::string method;
  double error = 0.0;
};

struct ResidueReport {
  std::string shape;
  int m = 0, n = 0;
  std::vector<ResidueEntry> entries;

  void add(double pole, double value, const std::string& method, double error = 0.0);
  // first entry at the pole, optionally restricted to a method
  const ResidueEntry* find(double pole, const std::string& method = "") const;
  double value(double pole, const std::string& method = "") const;  // throws if missing
  // one "key=value" record per line
  std::string to_text() const;
};

// quadrature order used when 0 is passed
int auto_order(const ManifoldSpec& spec);

double residue_first(const ManifoldSpec& spec, int order = 0);
double residue_second(const ManifoldSpec& spec, int order = 0);
double nu_residue_second(const ManifoldSpec& spec, int order = 0);

// local residues at -m-2 from second derivatives of the graph
struct LocalResidues2 {
  double R = 0.0, Rnu = 0.0;
};
LocalResidues2 local_residues_second(const CurvatureFrame& fr);
double scalar_from_residues(const CurvatureFrame& fr);
double meansq_from_residues(const CurvatureFrame& fr);

// Local residue at -m-2j (j <= 2) from the degree-4 graph jet by direct expansion over S^{m-1}.
double graph_local_residue(const CurvatureFrame& fr, int j, WeightKind weight);

// R(-m), R(-m-2), R_nu(-m-2) and for m = 4 also the -8 residues (graph route only with an
// axial reduction); error from orders p and p+4.
ResidueReport closed_residues(const ManifoldSpec& spec, int order = 0);
ResidueReport body_residues(const ManifoldSpec& body, int order = 0);
ResidueReport relative_residues(const ManifoldSpec& body, int order = 0);
// boundary local minus local relative residue at -n-3 at a boundary point
double relative_local_difference(const ManifoldSpec& body, int patch, const std::vector<double>& u);

// boundary-local (x on the boundary) and local (y fixed) relative residue at -n from point profiles
double relative_boundary_local_residue(const ManifoldSpec& body, int patch, const std::vector<double>& u,
                                       const ProfileOptions& opt = {});
double relative_local_residue(const ManifoldSpec& body, int patch, const std::vector<double>& u,
                              const ProfileOptions& opt = {});

// residues at -8 of 4-dimensional hypersurfaces, three routes
struct M8Residues {
  double raw = 0.0;       // kappa, c, d formula (fourth-order data)
  double modified = 0.0;  // order-3 form, Laplacian terms dropped
  double graph = 0.0;     // direct expansion of the graph jet
};
// the graph route costs a direction sum per node; skip it with with_graph = false
M8Residues residue_m8(const ManifoldSpec& spec, int order = 0, bool with_graph = true);
M8Residues nu_residue_m8(const ManifoldSpec& spec, int order = 0, bool with_graph = true);
// pointwise versions (principal frame); graph is left at 0 unless requested
M8Residues local_residue_m8(const CurvatureFrame& fr, bool with_graph = true);
M8Residues local_nu_residue_m8(const CurvatureFrame& fr, bool with_graph = true);

// Lipschitz-Killing curvatures C_0..C_n of a body by integrating elementary symmetric functions
std::vector<double> lk_curvatures(const ManifoldSpec& body, int order = 0);
// C_n, C_{n-1}, C_{n-2}, C_{n-3} from residues (others NaN); vector indexed by k
std::vector<double> lk_from_residues(int n, double R_body_n, double R_body_n1, double R_body_n3,
                                     double R_rel_n1, double R_boundary_n1);
std::vector<double> lk_from_residues(const ManifoldSpec& body, int order = 0);
// sum_k omega_k C_{n-k} r^k
double steiner_volume(const std::vector<double>& C, double r);

struct WeylTube {
  double intrinsic = 0.0;  // (1/2) int Sc
  double residue = 0.0;    // -(m/o_{m-1}) (R_nu(-m-2) + 3 R(-m-2))
};
WeylTube weyl_tube_k2(const ManifoldSpec& spec, int order = 0);

struct CurvatureIntegrals {
  double vol = 0.0, sc = 0.0, rm2 = 0.0, ric2 = 0.0, sc2 = 0.0;
};
CurvatureIntegrals curvature_integrals(const ManifoldSpec& spec, int order = 0);

struct IntrinsicResidues {
  double r_m = 0.0, r_m2 = 0.0, r_m4 = 0.0;
};
IntrinsicResidues intrinsic_residues(int m, const CurvatureIntegrals& ci);
struct HeatCoefficients {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
};
HeatCoefficients heat_coefficients(const CurvatureIntegrals& ci);

// t^6 coefficient of the extrinsic ball volume for a surface in R^3
double extrinsic_ball_t6(const IntrinsicData& d);

}  // namespace rlab
