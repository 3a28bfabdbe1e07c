#include "rlab/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "geometry_util.hpp"
#include "rlab/oracles.hpp"
#include "rlab/parallel.hpp"
#include "rlab/quadrature.hpp"

namespace rlab {

std::string weight_name(WeightKind k) {
  switch (k) {
    case WeightKind::One: return "one";
    case WeightKind::Nu: return "nu";
    case WeightKind::NormalProduct: return "normal";
    case WeightKind::Relative: return "relative";
    case WeightKind::RelativeFlipped: return "relative-flipped";
    case WeightKind::Custom: return "custom";
  }
  return "one";
}

WeightKind weight_from_name(const std::string& s) {
  for (WeightKind k : {WeightKind::One, WeightKind::Nu, WeightKind::NormalProduct, WeightKind::Relative,
                       WeightKind::RelativeFlipped, WeightKind::Custom})
    if (weight_name(k) == s) return k;
  throw std::invalid_argument("unknown weight '" + s + "' (one, nu, normal, relative, relative-flipped)");
}

double weight_value(const Weight& w, const QuadratureNode& x, const QuadratureNode& y) {
  switch (w.kind) {
    case WeightKind::One: return 1.0;
    case WeightKind::Nu: return nu_weight(x.tangent, y.tangent);
    case WeightKind::NormalProduct: return x.normal.dot(y.normal);
    case WeightKind::Relative: return (y.x - x.x).dot(y.normal);
    case WeightKind::RelativeFlipped: return (x.x - y.x).dot(x.normal);
    case WeightKind::Custom:
      if (!w.fn) throw std::invalid_argument("custom weight without a callback");
      return w.fn(x, y);
  }
  return 1.0;
}

namespace {

constexpr double kLogLo = -30.0;
constexpr double kLogHi = 15.0;

// Tail measure binned in log t; each bin keeps moments of (log t - centre)^k / k!.
class Bins {
 public:
  Bins(double h, int K) : h_(h), K_(K) {
    lo_ = static_cast<int>(std::floor(kLogLo / h));
    hi_ = static_cast<int>(std::ceil(kLogHi / h));
    data_.assign(static_cast<std::size_t>(hi_ - lo_) * K_, 0.0);
  }
  void add(double t, double c) {
    if (c == 0.0) return;
    double l = std::log(t);
    int b = static_cast<int>(std::floor(l / h_));
    if (b < lo_ || b >= hi_) throw GeometryError("distance outside the supported range");
    double x = l - (b + 0.5) * h_, p = c;
    double* d = &data_[static_cast<std::size_t>(b - lo_) * K_];
    for (int k = 0; k < K_; ++k) {
      d[k] += p;
      p *= x / (k + 1);
    }
  }
  void merge(const Bins& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  }
  void export_to(DistanceProfile& p) const {
    p.bin_index.clear();
    p.bin_moments.clear();
    for (int b = lo_; b < hi_; ++b) {
      const double* d = &data_[static_cast<std::size_t>(b - lo_) * K_];
      bool any = false;
      for (int k = 0; k < K_; ++k) any = any || d[k] != 0.0;
      if (!any) continue;
      p.bin_index.push_back(b);
      p.bin_moments.insert(p.bin_moments.end(), d, d + K_);
    }
  }

 private:
  double h_;
  int K_, lo_, hi_;
  std::vector<double> data_;
};

struct Eval1 {
  Eigen::VectorXd X;
  Eigen::MatrixXd Xu;
};

Eval1 eval1(const Patch& p, int m, int n, const double* u) {
  std::array<Jet<1>, kMaxAmbient> X;
  p.map.jet<1>(u, X.data());
  Eval1 e{Eigen::VectorXd(n), Eigen::MatrixXd(n, m)};
  for (int a = 0; a < n; ++a) {
    e.X(a) = X[a].c[0];
    for (int i = 0; i < m; ++i) e.Xu(a, i) = X[a].c[1 + i];
  }
  return e;
}

struct OuterNode {
  int patch = 0;
  std::array<double, kMaxIntrinsic> u{};
  double w = 0.0;  // full outer weight
};

double patch_extent(const ManifoldSpec& spec, const Patch& p) {
  const int m = spec.m, k = 9;
  std::vector<Eigen::VectorXd> pts;
  long total = 1;
  for (int i = 0; i < m; ++i) total *= k;
  for (long idx = 0; idx < total; ++idx) {
    std::array<double, kMaxIntrinsic> u{};
    long r = idx;
    for (int i = 0; i < m; ++i) {
      u[i] = p.lo[i] + (p.hi[i] - p.lo[i]) * double(r % k) / (k - 1);
      r /= k;
    }
    Eigen::VectorXd x(spec.n);
    p.map.eval(u.data(), x.data());
    pts.push_back(x);
  }
  // polyline lengths along each parameter direction; the chord undercounts long curved patches
  double ext = 0.0;
  long stride = 1;
  for (int i = 0; i < m; ++i, stride *= k)
    for (long idx = 0; idx < total; ++idx) {
      if ((idx / stride) % k != 0) continue;
      double len = 0.0;
      for (int s = 1; s < k; ++s) len += (pts[idx + s * stride] - pts[idx + (s - 1) * stride]).norm();
      ext = std::max(ext, len);
    }
  return ext;
}

int auto_cap(int m) {
  switch (m) {
    case 1: return 600;
    case 2: return 96;
    case 3: return 24;
    default: return 12;
  }
}

int auto_dirs(int m) {
  switch (m) {
    case 1: return 1;
    case 2: return 24;
    case 3: return 8;
    default: return 5;
  }
}

// Shared pieces of the small-t model: fit of G on the Gauss nodes in (0, delta)
// and conversion of everything else to tail mass.
struct ModelInput {
  int m;
  double delta, sigma;
  int chi_power, J;
  bool zero_constant;
  Rule1D fit_rule, near_rule;
  std::vector<double> G_fit, G_near;
  bool has_cutoff = true;
};

constexpr int kExtraPowers = 3;

double chi(double t, double sigma, int p) { return std::exp(-std::pow(t / sigma, p)); }

void finish_model(const ModelInput& in, Bins& bins, DistanceProfile& prof) {
  const int j0 = in.zero_constant ? 1 : 0;
  // a few extra even powers soak up truncation so the remainder vanishes fast at 0
  const int Jf = in.J + kExtraPowers;
  const int ncol = Jf + 1 - j0;
  const int N = static_cast<int>(in.fit_rule.x.size());
  if (N <= ncol + 2) throw std::invalid_argument("profile: too few fit nodes for the fit degree");
  Eigen::MatrixXd A(N, ncol);
  Eigen::VectorXd b(N);
  double scaleG = 0.0;
  for (int k = 0; k < N; ++k) {
    double s = in.fit_rule.x[k] / in.delta, sw = std::sqrt(in.fit_rule.w[k] / in.delta);
    for (int c = 0; c < ncol; ++c) A(k, c) = sw * std::pow(s, 2 * (c + j0));
    b(k) = sw * in.G_fit[k];
    scaleG += b(k) * b(k);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd c = svd.solve(b);
  Eigen::VectorXd r = b - A * c;
  auto sv = svd.singularValues();
  prof.fit.condition = sv(0) / sv(sv.size() - 1);
  prof.fit.residual = scaleG > 0 ? r.norm() / std::sqrt(scaleG) : 0.0;
  // standard errors
  double s2 = r.squaredNorm() / std::max(1, N - ncol);
  Eigen::MatrixXd V = svd.matrixV();
  prof.abar.assign(Jf + 1, 0.0);
  prof.abar_err.assign(Jf + 1, 0.0);
  for (int j = 0; j < ncol; ++j) {
    double var = 0.0;
    for (int q = 0; q < ncol; ++q) var += V(j, q) * V(j, q) / (sv(q) * sv(q));
    double sc = std::pow(in.delta, 2 * (j + j0));
    prof.abar[j + j0] = c(j) / sc;
    prof.abar_err[j + j0] = std::sqrt(s2 * var) / sc;
  }
  // free fit with odd powers to measure leakage
  {
    int np = 2 * Jf + 2 - 2 * j0;
    Eigen::MatrixXd B(N, np);
    for (int k = 0; k < N; ++k) {
      double s = in.fit_rule.x[k] / in.delta, sw = std::sqrt(in.fit_rule.w[k] / in.delta);
      for (int q = 0; q < np; ++q) B(k, q) = sw * std::pow(s, q + 2 * j0);
    }
    Eigen::VectorXd cf = B.colPivHouseholderQr().solve(b);
    double even = 0.0, odd = 0.0;
    for (int q = 0; q < np; ++q) ((q % 2) ? odd : even) = std::max((q % 2) ? odd : even, std::abs(cf(q)));
    prof.fit.odd_leakage = even > 0 ? odd / even : 0.0;
  }
  auto P = [&](double t) {
    double v = 0.0;
    for (int j = Jf; j >= 0; --j) v = v * t * t + prof.abar[j];
    return v;
  };
  double gmax = 0.0;
  for (double g : in.G_fit) gmax = std::max(gmax, std::abs(g));
  for (int k = 0; k < N; ++k) {
    double t = in.fit_rule.x[k];
    double ch = in.has_cutoff ? chi(t, in.sigma, in.chi_power) : 1.0;
    // (chi - 1) P vanishes like t^p; G - P at rounding level would blow up under t^z
    double rem = (ch - 1.0) * P(t);
    double diff = in.G_fit[k] - P(t);
    if (std::abs(diff) > 1e-10 * gmax) rem += ch * diff;
    bins.add(t, in.fit_rule.w[k] * std::pow(t, in.m - 1) * rem);
  }
  for (std::size_t k = 0; k < in.near_rule.x.size(); ++k) {
    double t = in.near_rule.x[k];
    double ch = in.has_cutoff ? chi(t, in.sigma, in.chi_power) : 1.0;
    bins.add(t, in.near_rule.w[k] * std::pow(t, in.m - 1) * ch * in.G_near[k]);
  }
  bins.export_to(prof);
  if (prof.fit.residual > 1e-3) {
    std::ostringstream os;
    os << "profile fit residual " << prof.fit.residual << " above 1e-3 for delta = " << in.delta
       << "; delta is too large for the geometry (reduce --delta)";
    throw GeometryError(os.str());
  }
}

DistanceProfile geodesic_profile(const ManifoldSpec& spec, const ProfileOptions& opt, const Weight& weight) {
  if (spec.round_radius <= 0) throw GeometryError("geodesic distance is only available for round spheres");
  if (weight.kind != WeightKind::One) throw GeometryError("geodesic mode supports the constant weight only");
  const int m = spec.m;
  const double r = spec.round_radius;
  DistanceProfile prof;
  prof.m = m;
  prof.geodesic = true;
  prof.weight = weight.kind;
  prof.J = opt.fit_degree > 0 ? opt.fit_degree : m / 2 + 3;
  prof.delta = opt.delta > 0 ? opt.delta : 0.2 * r;
  prof.sigma = 0.0;
  prof.chi_power = 0;
  const double vol = volume(spec), om = sphere_volume(m - 1);
  auto G = [&](double t) { return vol * om * std::pow(r * std::sin(t / r) / t, m - 1); };
  ModelInput in{m, prof.delta, 0.0, 0, prof.J, false, gauss_legendre(opt.n_fit, 0.0, prof.delta),
                gauss_legendre(2 * opt.n_near, prof.delta, kPi * r), {}, {}, false};
  for (double t : in.fit_rule.x) in.G_fit.push_back(G(t));
  for (double t : in.near_rule.x) in.G_near.push_back(G(t));
  Bins bins(prof.bin_width, prof.moments);
  finish_model(in, bins, prof);
  return prof;
}

}  // namespace

std::vector<double> DistanceProfile::poles() const {
  std::vector<double> p;
  for (int j = first_pole_index(); j <= J; ++j) p.push_back(-m - 2.0 * j);
  return p;
}

double DistanceProfile::min_valid_re() const {
  double lim = -m - 2.0 * J - 1.0;
  if (chi_power > 0) lim = std::max(lim, -m - chi_power + 1.0);
  return lim;
}

double DistanceProfile::psi(double t) const {
  double v = 0.0;
  double tt = std::min(t, delta);
  for (std::size_t j = 0; j < abar.size(); ++j) v += abar[j] * std::pow(tt, m + 2.0 * j) / (m + 2.0 * j);
  for (std::size_t b = 0; b < bin_index.size(); ++b) {
    double upper = std::exp((bin_index[b] + 1) * bin_width);
    if (upper <= t) v += bin_moments[b * moments];
  }
  return v;
}

DistanceProfile distance_profile(const ManifoldSpec& spec, const Weight& weight, const ProfileOptions& opt) {
  if (spec.is_polygon()) throw GeometryError("polygonal knots use the exact edge-pair path, not a profile");
  if (spec.patches.empty()) throw GeometryError("profile: spec has no patches");
  if (opt.geodesic) return geodesic_profile(spec, opt, weight);
  if (weight.kind == WeightKind::NormalProduct || weight.vanishes_on_diagonal())
    if (!spec.hypersurface()) throw GeometryError("weight '" + weight_name(weight.kind) + "' needs a hypersurface");
  const int m = spec.m, n = spec.n;
  const double reach = reach_estimate(spec);
  DistanceProfile prof;
  prof.m = m;
  prof.weight = weight.kind;
  prof.J = opt.fit_degree > 0 ? opt.fit_degree : m / 2 + 3;
  prof.zero_constant = weight.vanishes_on_diagonal();
  prof.delta = opt.delta > 0 ? opt.delta : 0.2 * reach;
  if (prof.delta > reach)
    throw GeometryError("delta " + std::to_string(prof.delta) + " exceeds the reach estimate " + std::to_string(reach));
  prof.chi_power = 8;
  prof.sigma = 2.0 * prof.delta;
  // chi is below 1e-16 past t_max
  const double t_max = prof.sigma * std::pow(37.0, 1.0 / prof.chi_power);

  ModelInput in{m, prof.delta, prof.sigma, prof.chi_power, prof.J, prof.zero_constant,
                gauss_legendre(opt.n_fit, 0.0, prof.delta), gauss_legendre(opt.n_near, prof.delta, t_max), {}, {}, true};
  std::vector<double> ts = in.fit_rule.x;
  ts.insert(ts.end(), in.near_rule.x.begin(), in.near_rule.x.end());
  const std::size_t nt = ts.size();
  SphereRule dirs = sphere_rule(m - 1, opt.n_dir > 0 ? opt.n_dir : auto_dirs(m));

  // inner (far field) nodes
  std::vector<int> orders;
  for (const auto& p : spec.patches) {
    int o = opt.inner_order;
    if (o <= 0) {
      double ext = patch_extent(spec, p);
      o = static_cast<int>(std::ceil(opt.inner_density * ext / prof.sigma));
      o = std::clamp(o, 12, auto_cap(m));
    }
    orders.push_back(o);
  }
  std::vector<QuadratureNode> inner = sample_quadrature(spec, orders);
  std::vector<double> inner_lambda_dummy;

  // outer nodes
  std::vector<OuterNode> outer;
  bool axial = opt.allow_axial && !spec.axial.empty() && weight.kind != WeightKind::Custom && opt.outer_order <= 0;
  if (opt.point_patch >= 0) {
    if (opt.point_patch >= static_cast<int>(spec.patches.size()) || static_cast<int>(opt.point_u.size()) != m)
      throw std::invalid_argument("profile: bad point location");
    OuterNode o;
    o.patch = opt.point_patch;
    for (int i = 0; i < m; ++i) o.u[i] = opt.point_u[i];
    o.w = 1.0;
    outer.push_back(o);
  } else if (axial) {
    for (const auto& ac : spec.axial) {
      Rule1D g = gauss_legendre(48, ac.theta_lo, ac.theta_hi);
      for (std::size_t k = 0; k < g.x.size(); ++k) {
        auto loc = ac.locate(g.x[k]);
        OuterNode o;
        o.patch = loc.first;
        for (std::size_t i = 0; i < loc.second.size(); ++i) o.u[i] = loc.second[i];
        o.w = g.w[k] * ac.measure(g.x[k]);
        outer.push_back(o);
      }
    }
  } else {
    int oo = opt.outer_order > 0 ? opt.outer_order : (m == 1 ? 64 : m == 2 ? 16 : m == 3 ? 8 : 6);
    for (const auto& q : sample_quadrature(spec, oo)) {
      OuterNode o;
      o.patch = q.patch;
      for (int i = 0; i < m; ++i) o.u[i] = q.u[i];
      o.w = q.w;
      outer.push_back(o);
    }
  }

  const std::size_t block = 8;
  const std::size_t nblocks = (outer.size() + block - 1) / block;
  std::vector<Bins> block_bins(nblocks, Bins(prof.bin_width, prof.moments));
  std::vector<std::vector<double>> block_G(nblocks, std::vector<double>(nt, 0.0));
  const double sig = prof.sigma;
  const int pw = prof.chi_power;
  const double d_skip = sig * std::pow(1e-18, 1.0 / pw);

  parallel_for(nblocks, opt.workers, [&](std::size_t bi) {
    Bins& bins = block_bins[bi];
    std::vector<double>& Gb = block_G[bi];
    std::vector<double> phi(nt);
    for (std::size_t oi = bi * block; oi < std::min(outer.size(), (bi + 1) * block); ++oi) {
      const OuterNode& on = outer[oi];
      const Patch& patch = spec.patches[on.patch];
      QuadratureNode xq = point_data(spec, on.patch, on.u.data());
      const Eigen::VectorXd& x = xq.x;
      Eigen::MatrixXd E0 = xq.tangent;
      std::fill(phi.begin(), phi.end(), 0.0);
      Eval1 e0 = eval1(patch, m, n, on.u.data());
      Eigen::MatrixXd M0 = E0.transpose() * e0.Xu;
      Eigen::PartialPivLU<Eigen::MatrixXd> M0lu(M0);
      for (std::size_t r = 0; r < dirs.points.size(); ++r) {
        const Eigen::VectorXd& om = dirs.points[r];
        Eigen::VectorXd du = M0lu.solve(om);
        Eigen::VectorXd v(m + 1), vprev(m + 1), vprev2(m + 1);
        double tprev = 0.0, tprev2 = 0.0;
        int have = 0;
        for (std::size_t k = 0; k < nt; ++k) {
          const double t = ts[k];
          if (have == 0) {
            for (int i = 0; i < m; ++i) v(i) = on.u[i] + du(i) * t;
            v(m) = t;
          } else if (have == 1) {
            v = vprev * (t / tprev);
            for (int i = 0; i < m; ++i) v(i) = on.u[i] + (vprev(i) - on.u[i]) * (t / tprev);
          } else {
            v = vprev + (vprev - vprev2) * ((t - tprev) / (tprev - tprev2));
          }
          Eval1 e;
          bool ok = false;
          for (int it = 0; it < 40; ++it) {
            std::array<double, kMaxIntrinsic> uu{};
            for (int i = 0; i < m; ++i) uu[i] = v(i);
            e = eval1(patch, m, n, uu.data());
            Eigen::VectorXd D = e.X - x;
            Eigen::VectorXd F(m + 1);
            F.head(m) = E0.transpose() * D - v(m) * om;
            F(m) = (D.squaredNorm() - t * t) / (2.0 * t);
            Eigen::MatrixXd Jm(m + 1, m + 1);
            Jm.topLeftCorner(m, m) = E0.transpose() * e.Xu;
            Jm.topRightCorner(m, 1) = -om;
            Jm.bottomLeftCorner(1, m) = D.transpose() * e.Xu / t;
            Jm(m, m) = 0.0;
            Eigen::VectorXd step = Jm.partialPivLu().solve(F);
            v -= step;
            if (!std::isfinite(step.norm())) break;
            if (step.norm() < 1e-14 * (1.0 + v.norm())) {
              ok = true;
              break;
            }
          }
          if (ok) {
            std::array<double, kMaxIntrinsic> uu{};
            for (int i = 0; i < m; ++i) uu[i] = v(i);
            e = eval1(patch, m, n, uu.data());
          }
          const double rho = v(m);
          if (!ok || !(rho > 0)) {
            std::ostringstream os;
            os << "near-field chart failed at t = " << t << " (patch " << on.patch
               << "); delta is too large for the reach of this shape";
            throw GeometryError(os.str());
          }
          Eigen::VectorXd D = e.X - x;
          Eigen::MatrixXd M = E0.transpose() * e.Xu;
          Eigen::PartialPivLU<Eigen::MatrixXd> Mlu(M);
          Eigen::VectorXd q = Mlu.solve(om);
          double denom = D.dot(e.Xu * q);
          double drho = t / denom;
          if (!(drho > 0)) throw GeometryError("near-field chart folds; delta is too large for this shape");
          double A = std::sqrt((e.Xu.transpose() * e.Xu).determinant()) / std::abs(M.determinant());
          double lam = 1.0;
          if (weight.needs_frames()) {
            QuadratureNode yq;
            yq.x = e.X;
            detail::FirstOrder fo = detail::first_order(e.Xu, patch.orientation);
            yq.tangent = fo.E;
            if (spec.hypersurface()) yq.normal = fo.N.col(0);
            yq.patch = on.patch;
            yq.u.assign(v.data(), v.data() + m);
            lam = weight_value(weight, xq, yq);
          }
          phi[k] += dirs.w[r] * lam * A * std::pow(rho / t, m - 1) * drho;
          vprev2 = vprev;
          tprev2 = tprev;
          vprev = v;
          tprev = t;
          ++have;
        }
      }
      for (std::size_t k = 0; k < nt; ++k) Gb[k] += on.w * phi[k];
      // far field
      for (const QuadratureNode& yq : inner) {
        double d = (yq.x - x).norm();
        if (d < d_skip) continue;
        double omc = -std::expm1(-std::pow(d / sig, pw));
        double lam = weight.kind == WeightKind::One ? 1.0 : weight_value(weight, xq, yq);
        bins.add(d, on.w * yq.w * lam * omc);
      }
    }
  });

  Bins bins(prof.bin_width, prof.moments);
  for (const auto& b : block_bins) bins.merge(b);
  std::vector<double> col(nblocks);
  in.G_fit.resize(in.fit_rule.x.size());
  in.G_near.resize(in.near_rule.x.size());
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t b = 0; b < nblocks; ++b) col[b] = block_G[b][k];
    double g = pairwise_sum(col);
    if (k < in.G_fit.size())
      in.G_fit[k] = g;
    else
      in.G_near[k - in.G_fit.size()] = g;
  }
  finish_model(in, bins, prof);
  return prof;
}

cplx profile_value(const DistanceProfile& p, cplx z) {
  cplx v = 0.0;
  for (int j = 0; j < static_cast<int>(p.abar.size()); ++j) {
    if (p.abar[j] == 0.0) continue;
    cplx e = z + double(p.m + 2 * j);
    v += p.abar[j] * std::exp(e * std::log(p.delta)) / e;
  }
  std::vector<double> parts_re, parts_im;
  parts_re.reserve(p.bin_index.size());
  parts_im.reserve(p.bin_index.size());
  for (std::size_t b = 0; b < p.bin_index.size(); ++b) {
    const double* M = &p.bin_moments[b * p.moments];
    cplx s = 0.0;
    for (int k = p.moments - 1; k >= 0; --k) s = s * z + M[k];
    cplx c = std::exp(z * ((p.bin_index[b] + 0.5) * p.bin_width)) * s;
    parts_re.push_back(c.real());
    parts_im.push_back(c.imag());
  }
  return v + cplx(pairwise_sum(parts_re), pairwise_sum(parts_im));
}

void write_profile(std::ostream& os, const DistanceProfile& p) {
  std::ostringstream o;
  o << std::setprecision(17);
  o << "rlab-profile 1\n";
  o << "m " << p.m << "\n";
  o << "weight " << weight_name(p.weight) << "\n";
  o << "geodesic " << (p.geodesic ? 1 : 0) << "\n";
  o << "delta " << p.delta << "\n";
  o << "sigma " << p.sigma << "\n";
  o << "chi_power " << p.chi_power << "\n";
  o << "J " << p.J << "\n";
  o << "zero_constant " << (p.zero_constant ? 1 : 0) << "\n";
  o << "abar " << p.abar.size();
  for (double a : p.abar) o << " " << a;
  o << "\nabar_err " << p.abar_err.size();
  for (double a : p.abar_err) o << " " << a;
  o << "\nfit " << p.fit.residual << " " << p.fit.condition << " " << p.fit.odd_leakage << "\n";
  o << "bins " << p.bin_width << " " << p.moments << " " << p.bin_index.size() << "\n";
  for (std::size_t b = 0; b < p.bin_index.size(); ++b) {
    o << p.bin_index[b];
    for (int k = 0; k < p.moments; ++k) o << " " << p.bin_moments[b * p.moments + k];
    o << "\n";
  }
  o << "psi " << p.bin_index.size() << "\n";
  for (std::size_t b = 0; b < p.bin_index.size(); ++b) {
    double t = std::exp((p.bin_index[b] + 1) * p.bin_width);
    o << t << " " << p.psi(t) << "\n";
  }
  o << "end\n";
  os << o.str();
}

namespace {
void expect(std::istream& is, const std::string& key) {
  std::string k;
  if (!(is >> k) || k != key) throw std::runtime_error("profile: expected '" + key + "', got '" + k + "'");
}
}  // namespace

DistanceProfile read_profile(std::istream& is) {
  DistanceProfile p;
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "rlab-profile" || version != 1) throw std::runtime_error("profile: unsupported header");
  std::string wname;
  int geo = 0, zc = 0;
  std::size_t cnt = 0;
  expect(is, "m");
  is >> p.m;
  expect(is, "weight");
  is >> wname;
  p.weight = weight_from_name(wname);
  expect(is, "geodesic");
  is >> geo;
  p.geodesic = geo != 0;
  expect(is, "delta");
  is >> p.delta;
  expect(is, "sigma");
  is >> p.sigma;
  expect(is, "chi_power");
  is >> p.chi_power;
  expect(is, "J");
  is >> p.J;
  expect(is, "zero_constant");
  is >> zc;
  p.zero_constant = zc != 0;
  expect(is, "abar");
  is >> cnt;
  p.abar.resize(cnt);
  for (auto& a : p.abar) is >> a;
  expect(is, "abar_err");
  is >> cnt;
  p.abar_err.resize(cnt);
  for (auto& a : p.abar_err) is >> a;
  expect(is, "fit");
  is >> p.fit.residual >> p.fit.condition >> p.fit.odd_leakage;
  expect(is, "bins");
  is >> p.bin_width >> p.moments >> cnt;
  p.bin_index.resize(cnt);
  p.bin_moments.resize(cnt * p.moments);
  for (std::size_t b = 0; b < cnt; ++b) {
    is >> p.bin_index[b];
    for (int k = 0; k < p.moments; ++k) is >> p.bin_moments[b * p.moments + k];
  }
  expect(is, "psi");
  is >> cnt;
  double skip;
  for (std::size_t b = 0; b < 2 * cnt; ++b) is >> skip;
  expect(is, "end");
  if (!is) throw std::runtime_error("profile: truncated input");
  if (static_cast<int>(p.abar.size()) <= p.J) throw std::runtime_error("profile: coefficient count mismatch");
  return p;
}

// ---------------------------------------------------------------------------

namespace {

double nearest(const std::vector<double>& pts, double x, double skip = std::numeric_limits<double>::quiet_NaN()) {
  double best = std::numeric_limits<double>::infinity();
  for (double p : pts)
    if (!(p == skip) && std::abs(p - x) < std::abs(best - x)) best = p;
  return best;
}

double contour_radius(const Meromorphic& f, double z0) {
  std::vector<double> all = f.poles;
  all.insert(all.end(), f.removable.begin(), f.removable.end());
  double d = std::abs(nearest(all, z0, z0) - z0);
  return std::min(0.25, 0.4 * d);
}

}  // namespace

double Meromorphic::residue(double z0) const {
  if (exact_residue) return exact_residue(z0);
  return laurent(raw, cplx(z0, 0.0), contour_radius(*this, z0), 128).residue.real();
}

double Meromorphic::finite_part(double z0) const {
  if (exact_finite_part) return exact_finite_part(z0);
  return laurent(raw, cplx(z0, 0.0), contour_radius(*this, z0), 128).finite_part.real();
}

BetaEvaluation Meromorphic::eval(cplx z) const {
  if (z.real() < min_valid_re) {
    std::ostringstream os;
    os << "Re z = " << z.real() << " is below the validity limit " << min_valid_re
       << " of this model (increase the fit degree)";
    throw std::invalid_argument(os.str());
  }
  BetaEvaluation r;
  r.z = z;
  r.method = method;
  double p = nearest(poles, z.real());
  if (std::isfinite(p)) {
    r.nearest_pole = p;
    r.pole_distance = std::abs(z - cplx(p, 0.0));
  } else {
    r.pole_distance = std::numeric_limits<double>::infinity();
  }
  double rm = nearest(removable, z.real());
  if (std::isfinite(rm) && std::abs(z - cplx(rm, 0.0)) < kPoleGuard && std::abs(z - cplx(rm, 0.0)) < r.pole_distance) {
    r.value = finite_part(rm);
    if (std::isfinite(p)) r.residue = residue(p);
    return r;
  }
  if (std::isfinite(p)) {
    r.residue = residue(p);
    if (r.pole_distance < kPoleGuard) {
      double fp = finite_part(p);
      std::ostringstream os;
      os << std::setprecision(12) << "z is within " << kPoleGuard << " of the pole " << p << " (residue " << r.residue
         << ", finite part " << fp << ")";
      throw PoleProximity(p, r.residue, fp, os.str());
    }
  }
  r.value = raw(z);
  return r;
}

Meromorphic profile_function(const DistanceProfile& prof) {
  auto p = std::make_shared<DistanceProfile>(prof);
  Meromorphic f;
  f.raw = [p](cplx z) { return profile_value(*p, z); };
  f.poles = p->poles();
  f.min_valid_re = p->min_valid_re();
  f.method = "profile";
  f.exact_residue = [p](double z0) {
    double j = (-z0 - p->m) / 2.0;
    int ji = static_cast<int>(std::lround(j));
    if (std::abs(j - ji) > 1e-9 || ji < 0 || ji > p->J) return 0.0;
    return p->abar[ji];
  };
  f.exact_finite_part = [p](double z0) { return hadamard_finite_part(*p, z0); };
  return f;
}

BetaEvaluation beta_eval(const DistanceProfile& p, cplx z) { return profile_function(p).eval(z); }

double residue_from_profile(const DistanceProfile& p, double pole, double* err) {
  double j = (-pole - p.m) / 2.0;
  int ji = static_cast<int>(std::lround(j));
  if (std::abs(j - ji) > 1e-9 || ji < 0) throw std::invalid_argument("not a pole of the profile model: " + std::to_string(pole));
  if (ji > p.J)
    throw std::invalid_argument("pole " + std::to_string(pole) + " is beyond the fitted degree (raise the fit degree)");
  if (err) *err = p.abar_err[ji];
  return p.abar[ji];
}

double hadamard_finite_part(const DistanceProfile& p, double z0) {
  if (z0 < p.min_valid_re()) throw std::invalid_argument("finite part requested below the model's validity limit");
  double j = (-z0 - p.m) / 2.0;
  int ji = static_cast<int>(std::lround(j));
  bool pole = std::abs(j - ji) < 1e-12 && ji >= 0 && ji <= p.J;
  if (!pole) return profile_value(p, z0).real();
  double v = 0.0;
  for (int i = 0; i < static_cast<int>(p.abar.size()); ++i) {
    if (i == ji) {
      v += p.abar[i] * std::log(p.delta);
      continue;
    }
    double e = z0 + p.m + 2 * i;
    v += p.abar[i] * std::pow(p.delta, e) / e;
  }
  // tail at z0: remove the small-t part from the full value
  DistanceProfile q = p;
  std::fill(q.abar.begin(), q.abar.end(), 0.0);
  return v + profile_value(q, z0).real();
}

// ---------------------------------------------------------------------------

Meromorphic body_function(const ManifoldSpec& body, const ProfileOptions& opt) {
  if (!body.is_body) throw GeometryError("body energy needs a body spec");
  auto prof = std::make_shared<DistanceProfile>(distance_profile(body, Weight::of(WeightKind::NormalProduct), opt));
  const int n = body.n;
  Meromorphic f;
  f.raw = [prof, n](cplx z) { return -profile_value(*prof, z + 2.0) / ((z + 2.0) * (z + double(n))); };
  f.poles.push_back(-n);
  for (double p : prof->poles()) f.poles.push_back(p - 2.0);
  if (n != 2) f.removable.push_back(-2.0);
  std::sort(f.poles.begin(), f.poles.end(), std::greater<double>());
  f.poles.erase(std::unique(f.poles.begin(), f.poles.end()), f.poles.end());
  f.min_valid_re = prof->min_valid_re() - 2.0;
  f.method = "boundary-reduction";
  return f;
}

Meromorphic relative_function(const ManifoldSpec& body, const ProfileOptions& opt) {
  if (!body.is_body) throw GeometryError("relative energy needs a body spec");
  auto prof = std::make_shared<DistanceProfile>(distance_profile(body, Weight::of(WeightKind::Relative), opt));
  const int n = body.n;
  Meromorphic f;
  f.raw = [prof, n](cplx z) { return profile_value(*prof, z) / (z + double(n)); };
  f.poles.push_back(-n);
  for (double p : prof->poles()) f.poles.push_back(p);
  std::sort(f.poles.begin(), f.poles.end(), std::greater<double>());
  f.poles.erase(std::unique(f.poles.begin(), f.poles.end()), f.poles.end());
  f.min_valid_re = prof->min_valid_re();
  f.method = "boundary-reduction";
  return f;
}

BetaEvaluation body_beta(const ManifoldSpec& body, cplx z, const ProfileOptions& opt) {
  return body_function(body, opt).eval(z);
}

BetaEvaluation relative_beta(const ManifoldSpec& body, cplx z, const ProfileOptions& opt) {
  return relative_function(body, opt).eval(z);
}

double relative_beta_fd(const ManifoldSpec& body, double z, double eps, const ProfileOptions& opt) {
  double reach = reach_estimate(body);
  if (eps >= 0.5 * reach) throw GeometryError("parallel-body step exceeds half the reach estimate");
  ManifoldSpec plus = make_offset(body, eps), minus = make_offset(body, -eps);
  plus.is_body = minus.is_body = true;
  double bp = body_function(plus, opt).eval(z).value.real();
  double bm = body_function(minus, opt).eval(z).value.real();
  return 0.25 * (bp - bm) / eps;
}

// ---------------------------------------------------------------------------

cplx polygon_beta(const std::vector<Eigen::VectorXd>& v, cplx z) {
  const std::size_t k = v.size();
  if (k < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
  static const Rule1D g64 = gauss_legendre(64, 0.0, 1.0);
  static const Rule1D g32 = gauss_legendre(32, 0.0, 1.0);
  std::vector<double> re, im;
  auto push = [&](cplx c) {
    re.push_back(c.real());
    im.push_back(c.imag());
  };
  auto cpow = [](double b, cplx e) { return std::exp(e * std::log(b)); };
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::VectorXd a0 = v[i], a1 = v[(i + 1) % k];
    double L = (a1 - a0).norm();
    push(2.0 * cpow(L, z + 2.0) / ((z + 1.0) * (z + 2.0)));
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      Eigen::VectorXd b0 = v[j], b1 = v[(j + 1) % k];
      bool adj_next = j == (i + 1) % k, adj_prev = i == (j + 1) % k;
      if (adj_next || adj_prev) {
        // shared vertex p, edges along unit directions da, db
        Eigen::VectorXd p = adj_next ? a1 : a0;
        Eigen::VectorXd ea = adj_next ? a0 : a1, eb = adj_next ? b1 : b0;
        double L1 = (ea - p).norm(), L2 = (eb - p).norm();
        double c = (ea - p).dot(eb - p) / (L1 * L2);
        double split = std::atan2(L2, L1);
        cplx s = 0.0;
        for (int piece = 0; piece < 2; ++piece) {
          double lo = piece == 0 ? 0.0 : split, hi = piece == 0 ? split : kPi / 2;
          for (std::size_t q = 0; q < g64.x.size(); ++q) {
            double al = lo + (hi - lo) * g64.x[q];
            double gg = 1.0 - std::sin(2 * al) * c;
            double R = piece == 0 ? L1 / std::cos(al) : L2 / std::sin(al);
            s += (hi - lo) * g64.w[q] * cpow(gg, z / 2.0) * cpow(R, z + 2.0);
          }
        }
        push(s / (z + 2.0));
      } else {
        double La = (a1 - a0).norm(), Lb = (b1 - b0).norm();
        cplx s = 0.0;
        for (std::size_t p = 0; p < g32.x.size(); ++p) {
          Eigen::VectorXd x = a0 + (a1 - a0) * g32.x[p];
          for (std::size_t q = 0; q < g32.x.size(); ++q) {
            Eigen::VectorXd y = b0 + (b1 - b0) * g32.x[q];
            s += g32.w[p] * g32.w[q] * cpow((x - y).norm(), z);
          }
        }
        push(s * La * Lb);
      }
    }
  }
  return cplx(pairwise_sum(re), pairwise_sum(im));
}

Meromorphic polygon_function(const std::vector<Eigen::VectorXd>& vertices) {
  auto pr = polygon_knot_residues(vertices);
  Meromorphic f;
  f.raw = [vertices](cplx z) { return polygon_beta(vertices, z); };
  f.poles = {-1.0, -2.0};
  f.exact_residue = [pr](double z0) {
    if (z0 == -1.0) return pr.r1;
    if (z0 == -2.0) return pr.r2;
    return 0.0;
  };
  f.min_valid_re = -1e300;
  f.method = "polygon";
  return f;
}

// ---------------------------------------------------------------------------

double direct_beta_ellipsoid(const ManifoldSpec& spec, WeightKind weight, double z, int order) {
  if (spec.ellipsoid_axes.size() != spec.n || spec.is_body)
    throw GeometryError("direct double quadrature is only implemented for ellipsoid hypersurfaces");
  if (weight != WeightKind::One && weight != WeightKind::NormalProduct && weight != WeightKind::Nu)
    throw GeometryError("direct double quadrature supports the one and normal weights");
  const int m = spec.m, n = spec.n;
  const double beta = z + m - 1;
  if (!(beta > -1.0)) throw std::invalid_argument("direct double quadrature needs z > -m");
  const Eigen::VectorXd ax = spec.ellipsoid_axes;
  const double detA = ax.prod();
  Rule1D gj = gauss_jacobi(2 * order, 0.0, beta);
  SphereRule dirs = sphere_rule(m - 1, m == 2 ? 2 * order : order);
  const double jac = std::pow(kPi / 2, beta + 1);
  auto outer = sample_quadrature(spec, order);
  std::vector<double> vals(outer.size());
  parallel_for(outer.size(), 0, [&](std::size_t oi) {
    const QuadratureNode& q = outer[oi];
    Eigen::VectorXd y0 = q.x.cwiseQuotient(ax);
    y0.normalize();
    Eigen::VectorXd nx = y0.cwiseQuotient(ax).normalized();
    // orthonormal complement of y0
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y0);
    Eigen::MatrixXd Q = qr.householderQ() * B;
    Eigen::MatrixXd C = Q.rightCols(n - 1);
    std::vector<double> parts;
    for (std::size_t a = 0; a < gj.x.size(); ++a) {
      double al = kPi * (1.0 + gj.x[a]) / 2.0;
      double sa = std::sin(al), ca = std::cos(al);
      for (std::size_t r = 0; r < dirs.points.size(); ++r) {
        Eigen::VectorXd y = ca * y0 + sa * (C * dirs.points[r]);
        Eigen::VectorXd diff = (y0 - y).cwiseProduct(ax);
        double g = diff.norm() / al;
        Eigen::VectorXd ai = y.cwiseQuotient(ax);
        double J = detA * ai.norm();
        double lam = weight == WeightKind::One ? 1.0 : nx.dot(ai.normalized());
        double f = std::pow(g, z) * std::pow(sa / al, m - 1) * J * lam;
        parts.push_back(jac * gj.w[a] * dirs.w[r] * f);
      }
    }
    vals[oi] = q.w * pairwise_sum(parts);
  });
  return pairwise_sum(vals);
}

Meromorphic beta_function(const ManifoldSpec& spec, const Weight& weight, const ProfileOptions& opt) {
  if (spec.is_polygon()) {
    if (weight.kind != WeightKind::One) throw GeometryError("polygonal knots support the constant weight only");
    return polygon_function(spec.polygon);
  }
  if (spec.is_body) {
    if (weight.kind == WeightKind::One) return body_function(spec, opt);
    if (weight.kind == WeightKind::Relative) return relative_function(spec, opt);
    throw GeometryError("bodies support the one and relative weights");
  }
  return profile_function(distance_profile(spec, weight, opt));
}

}  // namespace rlab
