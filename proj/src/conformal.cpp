#include "rlab/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlab/oracles.hpp"
#include "rlab/residues.hpp"

namespace rlab {

namespace {

void require_m4(const ManifoldSpec& spec) {
  if (spec.m != 4) throw std::invalid_argument("conformal energies need a 4-dimensional manifold");
}

struct Sym4 {
  double s4 = 0, s31 = 0, s22 = 0, s211 = 0, p = 1;
};

// s31 = sum_{i != j} k_i^3 k_j, s22 = sum_{i<j} k_i^2 k_j^2, s211 = sum_{j<k, i != j,k} k_i^2 k_j k_k
Sym4 sym4(const Kappa4& k) {
  Sym4 s;
  for (int i = 0; i < 4; ++i) {
    s.s4 += std::pow(k[i], 4);
    s.p *= k[i];
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      s.s31 += std::pow(k[i], 3) * k[j];
      if (j > i) s.s22 += k[i] * k[i] * k[j] * k[j];
    }
    for (int j = 0; j < 4; ++j)
      for (int l = j + 1; l < 4; ++l)
        if (j != i && l != i) s.s211 += k[i] * k[i] * k[j] * k[l];
  }
  return s;
}

template <class F>
double over_orderings(const Kappa4& k, F f) {
  std::array<int, 4> p{0, 1, 2, 3};
  double sum = 0.0;
  do sum += f(k[p[0]], k[p[1]], k[p[2]], k[p[3]]);
  while (std::next_permutation(p.begin(), p.end()));
  return sum;
}

}  // namespace

double gw_density(const IntrinsicData& d, bool hypersurface) {
  if (hypersurface) {
    double H2 = d.H * d.H;
    return (d.grad_H2 - d.norm_h2 * H2 + 7.0 / 16.0 * H2 * H2) / 128.0;
  }
  return (d.grad_perp_H2 - d.hH2 + 7.0 / 16.0 * d.H2 * d.H2) / 128.0;
}

double graham_witten(const ManifoldSpec& spec, int order) {
  require_m4(spec);
  IntegrationOptions o;
  o.order = order > 0 ? order : auto_order(spec);
  const bool hyp = spec.hypersurface();
  return integrate_points(spec, o, 1, [&](int patch, const double* u, const QuadratureNode&, double* v) {
    v[0] = gw_density(intrinsic_data(spec, patch, u), hyp);
  })[0];
}

double weyl_norm_hyp(const Kappa4& k) {
  Sym4 s = sym4(k);
  return 4.0 / 3.0 * s.s22 - 4.0 / 3.0 * s.s211 + 8.0 * s.p;
}

double weyl_norm_hyp_product(const Kappa4& k) {
  return over_orderings(k, [](double a, double b, double c, double d) {
           return (a - b) * (b - c) * (c - d) * (d - a);
         }) / 6.0;
}

double chern_density(const Kappa4& k) { return 6.0 * k[0] * k[1] * k[2] * k[3]; }

double q_energy(const Kappa4& k) {
  Sym4 s = sym4(k);
  return 3 * s.s4 - 4 * s.s31 + 2 * s.s22 + 4 * s.s211 - 24 * s.p;
}

double q_energy_product(const Kappa4& k) {
  return 0.5 * over_orderings(k, [](double a, double b, double c, double d) {
           return (a - b) * (a - b) * (a - c) * (a - d);
         });
}

EnergyBreakdown gw_identity(const ManifoldSpec& spec, int order) {
  require_m4(spec);
  if (!spec.hypersurface()) throw std::invalid_argument("gw_identity needs a hypersurface in R^5");
  IntegrationOptions o;
  o.order = order > 0 ? order : auto_order(spec);
  auto v = integrate_frames(spec, o, 7, [](const CurvatureFrame& fr, double* out) {
    Kappa4 k{fr.kappa(0), fr.kappa(1), fr.kappa(2), fr.kappa(3)};
    out[0] = weyl_norm_hyp(k);
    out[1] = chern_density(k);
    out[2] = q_energy(k);
    M8Residues a = local_residue_m8(fr, false), b = local_nu_residue_m8(fr, false);
    out[3] = a.raw;
    out[4] = b.raw;
    out[5] = a.modified;
    out[6] = b.modified;
  });
  EnergyBreakdown e;
  e.gw = graham_witten(spec, order);
  e.weyl = v[0];
  e.chern = v[1];
  e.z_energy = v[2];
  e.r8 = v[3];
  e.r8_nu = v[4];
  e.r8_modified = v[5];
  e.r8_nu_modified = v[6];
  e.residual = e.gw - 3.0 / (2.0 * kPi * kPi) * (e.r8_nu + 2.0 * e.r8) + (12.0 * e.weyl + 5.0 * e.z_energy) / 2048.0;
  return e;
}

double classification_harness(double c1, double c2, double c3, double a) {
  if (a == 1.0) throw std::invalid_argument("classification harness: a = 1 gives a trivially zero defect");
  auto sigma = [&](const Kappa4& k) {
    Sym4 s = sym4(k);
    return c1 * s.s4 + c2 * s.s31 + c3 * s.s22;
  };
  return integrate_1d(
      [&](double t) {
        double s = std::sin(t), c = std::cos(t);
        Kappa4 k = spheroid_curvatures(a, t), kt = spheroid_inverted_curvatures(a, t);
        double den = std::pow(a * a * c * c + s * s, 4);
        return (sigma(k) - sigma(kt) / den) * std::sqrt(a * a * s * s + c * c) * s * s * s;
      },
      0.0, kPi);
}

SpheroidRelative spheroid_relative_check(double a) {
  // three principal curvatures of the 3-dimensional spheroid, the first one distinguished
  auto R = [](double k1, double k2) {
    const double k[3] = {k1, k2, k2};
    double s3 = 0.0, s21 = 0.0;
    for (int i = 0; i < 3; ++i) {
      s3 += k[i] * k[i] * k[i];
      for (int j = 0; j < 3; ++j)
        if (j != i) s21 += k[i] * k[i] * k[j];
    }
    return s3 - s21 - 2.0 * k[0] * k[1] * k[2];
  };
  SpheroidRelative r;
  r.Ra = integrate_1d(
      [&](double t) {
        auto k = spheroid_curvatures(a, t);
        double s = std::sin(t), c = std::cos(t);
        return R(k[0], k[1]) * std::sqrt(a * a * s * s + c * c) * s * s;
      },
      0.0, kPi);
  r.Ra_tilde = integrate_1d(
      [&](double t) {
        auto k = spheroid_inverted_curvatures(a, t);
        double s = std::sin(t), c = std::cos(t);
        return R(k[0], k[1]) * std::sqrt(a * a * s * s + c * c) / std::pow(a * a * c * c + s * s, 3) * s * s;
      },
      0.0, kPi);
  r.Ra_closed = spheroid_Ra_closed(a);
  r.Ra_tilde_closed = spheroid_Ra_tilde_closed(a);
  r.R1 = spheroid_Ra_closed(1.0);
  r.below = r.Ra + r.Ra_tilde < 2.0 * r.R1;
  return r;
}

}  // namespace rlab
