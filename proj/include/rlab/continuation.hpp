#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/manifold.hpp"
#include "rlab/special.hpp"

namespace rlab {

enum class WeightKind { One, Nu, NormalProduct, Relative, RelativeFlipped, Custom };

std::string weight_name(WeightKind k);
WeightKind weight_from_name(const std::string& s);

struct Weight {
  WeightKind kind = WeightKind::One;
  // used for Custom; receives first-order data at x and y
  std::function<double(const QuadratureNode&, const QuadratureNode&)> fn;

  static Weight of(WeightKind k) { return Weight{k, {}}; }
  // weights that vanish to second order on the diagonal
  bool vanishes_on_diagonal() const { return kind == WeightKind::Relative || kind == WeightKind::RelativeFlipped; }
  bool needs_frames() const { return kind != WeightKind::One; }
};

double weight_value(const Weight& w, const QuadratureNode& x, const QuadratureNode& y);

struct ProfileOptions {
  double delta = 0.0;     // 0: 0.2 * reach estimate
  int fit_degree = 0;     // J, number of even powers beyond the constant; 0: m/2 + 3
  bool geodesic = false;  // round spheres only
  bool allow_axial = true;
  int workers = 0;
  int n_fit = 24;      // Gauss nodes in (0, delta)
  int n_near = 32;     // Gauss nodes in [delta, t_max]
  int n_dir = 0;       // direction rule parameter, 0: by dimension
  int inner_order = 0; // tensor order for the far field, 0: from patch size
  int outer_order = 0; // 0: axial rule if available, else from patch size
  double inner_density = 20.0;  // nodes per sigma used by the automatic inner order
  // single outer point (local profile) when point_patch >= 0
  int point_patch = -1;
  std::vector<double> point_u;
};

struct FitDiagnostics {
  double residual = 0.0;     // weighted relative rms of the even fit
  double condition = 0.0;    // of the scaled least-squares matrix
  double odd_leakage = 0.0;  // largest odd coefficient of a free fit, relative
};

// Small-t model plus a binned tail measure of the weighted distance distribution.
//   B(z) = sum_j abar[j] delta^{z+m+2j} / (z+m+2j) + sum_b e^{z l_b} sum_k M_bk z^k / k!
struct DistanceProfile {
  int m = 0;
  WeightKind weight = WeightKind::One;
  bool geodesic = false;
  double delta = 0.0;
  double sigma = 0.0;   // scale of the cutoff exp(-(t/sigma)^p)
  int chi_power = 0;
  int J = 0;
  std::vector<double> abar;     // abar[j] multiplies t^{2j}; entries past J only absorb truncation
  std::vector<double> abar_err; // fit standard errors
  double bin_width = 0.05;
  int moments = 12;
  std::vector<int> bin_index;       // bin b covers [b h, (b+1) h) in log t
  std::vector<double> bin_moments;  // moments per bin, flattened
  FitDiagnostics fit;

  // first pole index: 1 for weights vanishing on the diagonal
  int first_pole_index() const { return abar.empty() || zero_constant ? 1 : 0; }
  bool zero_constant = false;

  std::vector<double> poles() const;
  double min_valid_re() const;  // below this the model is not trusted
  // cumulative psi(t) from the model and bins (coarse, informational)
  double psi(double t) const;
};

DistanceProfile distance_profile(const ManifoldSpec& spec, const Weight& weight, const ProfileOptions& opt = {});

// Raw meromorphic value (no guard).
cplx profile_value(const DistanceProfile& p, cplx z);

void write_profile(std::ostream& os, const DistanceProfile& p);
DistanceProfile read_profile(std::istream& is);

struct BetaEvaluation {
  cplx z;
  cplx value;
  double nearest_pole = 0.0;
  double pole_distance = 0.0;
  double residue = 0.0;  // at the nearest pole
  std::string method;    // profile | boundary-reduction | oracle | polygon | direct
};

class PoleProximity : public std::runtime_error {
 public:
  PoleProximity(double pole, double residue, double finite_part, const std::string& what)
      : std::runtime_error(what), pole(pole), residue(residue), finite_part(finite_part) {}
  double pole, residue, finite_part;
};

inline constexpr double kPoleGuard = 1e-3;

// A meromorphic function with simple poles at known candidate points.
struct Meromorphic {
  std::function<cplx(cplx)> raw;
  std::vector<double> poles;       // candidate simple poles
  std::vector<double> removable;   // singular expressions with finite limits
  std::function<double(double)> exact_residue;      // optional
  std::function<double(double)> exact_finite_part;  // optional
  double min_valid_re = -1e300;
  std::string method;

  BetaEvaluation eval(cplx z) const;  // throws PoleProximity near a pole
  double residue(double z0) const;
  double finite_part(double z0) const;  // value at non-poles
};

Meromorphic profile_function(const DistanceProfile& p);
BetaEvaluation beta_eval(const DistanceProfile& p, cplx z);
// residue at -m-2j; err receives a standard error from the fit
double residue_from_profile(const DistanceProfile& p, double pole, double* err = nullptr);
double hadamard_finite_part(const DistanceProfile& p, double z0);

// B_Omega(z) = -B_{dOmega,nu}(z+2) / ((z+2)(z+n)) from the boundary profile
Meromorphic body_function(const ManifoldSpec& body, const ProfileOptions& opt = {});
// B_{Omega,dOmega}(z) = (1/(z+n)) int int |x-y|^z <y-x, nu_y>
Meromorphic relative_function(const ManifoldSpec& body, const ProfileOptions& opt = {});
BetaEvaluation body_beta(const ManifoldSpec& body, cplx z, const ProfileOptions& opt = {});
BetaEvaluation relative_beta(const ManifoldSpec& body, cplx z, const ProfileOptions& opt = {});
// (1/2) d/de B_{Omega_e}(z) at e = 0 by central differences of parallel bodies
double relative_beta_fd(const ManifoldSpec& body, double z, double eps, const ProfileOptions& opt = {});

// Polygonal knots: exact per edge pair.
cplx polygon_beta(const std::vector<Eigen::VectorXd>& vertices, cplx z);
Meromorphic polygon_function(const std::vector<Eigen::VectorXd>& vertices);

// Independent double quadrature for ellipsoids centred at 0 (real z > -m).
double direct_beta_ellipsoid(const ManifoldSpec& spec, WeightKind weight, double z, int order = 24);

// Whatever applies to a spec: polygon, profile (closed manifolds) or body reduction.
Meromorphic beta_function(const ManifoldSpec& spec, const Weight& weight, const ProfileOptions& opt = {});

}  // namespace rlab
