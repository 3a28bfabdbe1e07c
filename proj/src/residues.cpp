#include "rlab/residues.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rlab/quadrature.hpp"

namespace rlab {

void ResidueReport::add(double pole, double value, const std::string& method, double error) {
  entries.push_back({pole, value, method, error});
}

const ResidueEntry* ResidueReport::find(double pole, const std::string& method) const {
  for (const auto& e : entries)
    if (e.pole == pole && (method.empty() || e.method == method)) return &e;
  return nullptr;
}

double ResidueReport::value(double pole, const std::string& method) const {
  const ResidueEntry* e = find(pole, method);
  if (!e) throw std::out_of_range("no residue at " + std::to_string(pole) + " (" + method + ")");
  return e->value;
}

std::string ResidueReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "shape=" << shape << " m=" << m << " n=" << n << "\n";
  for (const auto& e : entries)
    os << "pole=" << e.pole << " value=" << e.value << " method=" << e.method << " error=" << e.error << "\n";
  return os.str();
}

int auto_order(const ManifoldSpec& spec) {
  if (!spec.axial.empty()) return 24;
  switch (spec.m) {
    case 1: return 48;
    case 2: return 24;
    case 3: return 14;
    default: return 10;
  }
}

namespace {

IntegrationOptions opts(const ManifoldSpec& spec, int order) {
  IntegrationOptions o;
  o.order = order > 0 ? order : auto_order(spec);
  return o;
}

double sym(const Eigen::VectorXd& k, int r) {
  // elementary symmetric polynomial S_r
  std::vector<double> e(r + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < k.size(); ++i)
    for (int j = r; j >= 1; --j) e[j] += k(i) * e[j - 1];
  return e[r];
}

}  // namespace

double residue_first(const ManifoldSpec& spec, int order) {
  return sphere_volume(spec.m - 1) * volume(spec, order > 0 ? order : auto_order(spec));
}

double residue_second(const ManifoldSpec& spec, int order) {
  const int m = spec.m;
  const double o = sphere_volume(m - 1);
  return integrate_frames(spec, opts(spec, order), 1, [&](const CurvatureFrame& fr, double* v) {
    v[0] = o / (8.0 * m) * (2.0 * fr.norm_h2() - fr.mean_curvature_sq());
  })[0];
}

double nu_residue_second(const ManifoldSpec& spec, int order) {
  const int m = spec.m;
  const double o = sphere_volume(m - 1);
  return integrate_frames(spec, opts(spec, order), 1, [&](const CurvatureFrame& fr, double* v) {
    v[0] = -o / (8.0 * m) * (2.0 * fr.norm_h2() + fr.mean_curvature_sq());
  })[0];
}

LocalResidues2 local_residues_second(const CurvatureFrame& fr) {
  const int m = fr.m;
  double A = 0.0, B = 0.0, C = 0.0;
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd fii = fr.h(i, i);
    A += fii.squaredNorm();
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      B += fii.dot(fr.h(j, j));
      C += fr.h(i, j).squaredNorm();
    }
  }
  const double o = sphere_volume(m - 1);
  LocalResidues2 r;
  r.Rnu = o / m * (-0.375 * A - 0.125 * B - 0.25 * C);
  r.R = o / m * (0.125 * A - 0.125 * B + 0.25 * C);
  return r;
}

double scalar_from_residues(const CurvatureFrame& fr) {
  auto r = local_residues_second(fr);
  return -2.0 * fr.m / sphere_volume(fr.m - 1) * (r.Rnu + 3.0 * r.R);
}

double meansq_from_residues(const CurvatureFrame& fr) {
  auto r = local_residues_second(fr);
  return -4.0 * fr.m / sphere_volume(fr.m - 1) * (r.Rnu + r.R);
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kS = 7;
using Ser = std::array<double, kS>;

Ser smul(const Ser& a, const Ser& b, int N) {
  Ser r{};
  for (int i = 0; i <= N; ++i)
    for (int j = 0; i + j <= N; ++j) r[i + j] += a[i] * b[j];
  return r;
}

// (1 + p)^alpha for p(0) = 0
Ser spow1(const Ser& p, double alpha, int N) {
  Ser res{}, term{};
  res[0] = term[0] = 1.0;
  double coef = 1.0;
  for (int k = 1; k <= N; ++k) {
    coef *= (alpha - k + 1) / k;
    term = smul(term, p, N);
    for (int i = 0; i <= N; ++i) res[i] += coef * term[i];
  }
  return res;
}

Ser slog1(const Ser& p, int N) {
  Ser res{}, term{};
  term[0] = 1.0;
  for (int k = 1; k <= N; ++k) {
    term = smul(term, p, N);
    double c = (k % 2 ? 1.0 : -1.0) / k;
    for (int i = 0; i <= N; ++i) res[i] += c * term[i];
  }
  return res;
}

Ser sexp0(const Ser& p, int N) {
  // exp(p) with p(0) = 0
  Ser res{}, term{};
  res[0] = term[0] = 1.0;
  for (int k = 1; k <= N; ++k) {
    term = smul(term, p, N);
    for (int i = 0; i <= N; ++i) term[i] /= k;
    for (int i = 0; i <= N; ++i) res[i] += term[i];
  }
  return res;
}

}  // namespace

double graph_local_residue(const CurvatureFrame& fr, int j, WeightKind weight) {
  if (j < 0 || j > 2) throw std::invalid_argument("graph_local_residue: j must be 0, 1 or 2");
  if (weight != WeightKind::One && weight != WeightKind::Nu && weight != WeightKind::NormalProduct)
    throw std::invalid_argument("graph_local_residue: weight must be one or nu");
  const int m = fr.m, c = fr.codim();
  const int N = 2 * j;
  const double z0 = -m - 2.0 * j;
  const auto& tab = JetTables<4>::get();
  // omega-degree of the r^{2j} coefficient is at most 6j; the circle rule is exact below n points
  static const SphereRule rules[4] = {sphere_rule(0, 1), sphere_rule(1, 16), sphere_rule(2, 7), sphere_rule(3, 7)};
  if (m < 1 || m > 4) throw std::invalid_argument("graph_local_residue: 1 <= m <= 4");
  const SphereRule& dirs = rules[m - 1];
  std::vector<double> parts;
  for (std::size_t r = 0; r < dirs.points.size(); ++r) {
    const Eigen::VectorXd& w = dirs.points[r];
    // f_a(r w) = sum_k F[a][k] r^k, and d_i f_a(r w) = sum_k D[a][i][k] r^k
    std::vector<std::array<double, 6>> F(c);
    std::vector<std::vector<Ser>> D(c, std::vector<Ser>(m));
    // powers of the direction components up to 4
    double pw[4][5];
    for (int i = 0; i < 4; ++i) {
      pw[i][0] = 1.0;
      for (int e = 1; e <= 4; ++e) pw[i][e] = i < m ? pw[i][e - 1] * w(i) : 0.0;
    }
    for (int a = 0; a < c; ++a) {
      F[a].fill(0.0);
      for (auto& s : D[a]) s.fill(0.0);
      const Jet<4>& g = fr.graph[a];
      for (int k = 0; k < Jet<4>::kSize; ++k) {
        double mono = g.c[k];
        if (mono == 0.0) continue;
        const Exponent& e = tab.exps[k];
        int deg = e[0] + e[1] + e[2] + e[3];
        F[a][deg] += mono * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][e[3]];
        if (deg - 1 > N) continue;
        for (int i = 0; i < m; ++i) {
          if (e[i] == 0) continue;
          double wq = e[i] * mono;
          for (int l = 0; l < 4; ++l) wq *= pw[l][e[l] - (l == i ? 1 : 0)];
          D[a][i][deg - 1] += wq;
        }
      }
    }
    // |f|^2 / r^2
    Ser q{};
    for (int a = 0; a < c; ++a)
      for (int p = 0; p <= 4; ++p)
        for (int s = 0; s <= 4; ++s)
          if (p + s - 2 >= 0 && p + s - 2 <= N) q[p + s - 2] += F[a][p] * F[a][s];
    Ser integrand = spow1(q, z0 / 2.0, N);
    if (weight == WeightKind::One) {
      // sqrt det(I + X), X_il = sum_a d_i f_a d_l f_a
      std::vector<std::vector<Ser>> X(m, std::vector<Ser>(m));
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l) {
          Ser s{};
          for (int a = 0; a < c; ++a) {
            Ser t = smul(D[a][i], D[a][l], N);
            for (int k = 0; k <= N; ++k) s[k] += t[k];
          }
          X[i][l] = s;
        }
      // log det(I + X) = sum_k (-1)^{k+1} tr(X^k) / k
      Ser logdet{};
      std::vector<std::vector<Ser>> P = X;
      for (int k = 1; 2 * k <= N; ++k) {
        Ser tr{};
        for (int i = 0; i < m; ++i)
          for (int t = 0; t <= N; ++t) tr[t] += P[i][i][t];
        double sg = (k % 2 ? 1.0 : -1.0) / k;
        for (int t = 0; t <= N; ++t) logdet[t] += sg * tr[t];
        std::vector<std::vector<Ser>> Q(m, std::vector<Ser>(m));
        for (int i = 0; i < m; ++i)
          for (int l = 0; l < m; ++l) {
            Ser s{};
            for (int h = 0; h < m; ++h) {
              Ser t = smul(P[i][h], X[h][l], N);
              for (int u = 0; u <= N; ++u) s[u] += t[u];
            }
            Q[i][l] = s;
          }
        P = Q;
      }
      for (auto& v : logdet) v *= 0.5;
      integrand = smul(integrand, sexp0(logdet, N), N);
    }
    parts.push_back(dirs.w[r] * integrand[N]);
  }
  (void)slog1;
  return pairwise_sum(parts);
}

// ---------------------------------------------------------------------------

namespace {

struct KappaSums {
  double s4 = 0, s22 = 0, s13 = 0, s112 = 0, p4 = 0, s2 = 0, s3 = 0, H = 0;
};

KappaSums kappa_sums(const Eigen::VectorXd& k) {
  KappaSums s;
  const int m = static_cast<int>(k.size());
  s.p4 = 1.0;
  for (int i = 0; i < m; ++i) {
    s.H += k(i);
    s.s2 += k(i) * k(i);
    s.s3 += k(i) * k(i) * k(i);
    s.s4 += std::pow(k(i), 4);
    s.p4 *= k(i);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      s.s13 += k(i) * std::pow(k(j), 3);
      if (j > i) {
        s.s22 += k(i) * k(i) * k(j) * k(j);
        for (int l = 0; l < m; ++l)
          if (l != i && l != j) s.s112 += k(i) * k(j) * k(l) * k(l);
      }
    }
  }
  return s;
}

struct CSums {
  double ciii2 = 0, ciij2 = 0, cijk2 = 0, ciikcjjk = 0, ciiicijj = 0;
  double grad_h2 = 0;  // |grad H|^2
};

CSums c_sums(const CurvatureFrame& fr) {
  const int m = fr.m;
  CSums s;
  for (int i = 0; i < m; ++i) {
    s.ciii2 += std::pow(fr.c(i, i, i), 2);
    double g = 3.0 * fr.c(i, i, i);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      s.ciij2 += std::pow(fr.c(i, i, j), 2);
      s.ciiicijj += fr.c(i, i, i) * fr.c(i, j, j);
      g += fr.c(i, j, j);
      if (j > i) {
        for (int l = 0; l < m; ++l) {
          if (l == i || l == j) continue;
          s.ciikcjjk += fr.c(i, i, l) * fr.c(j, j, l);
          if (l > j) s.cijk2 += std::pow(fr.c(i, j, l), 2);
        }
      }
    }
    s.grad_h2 += 4.0 * g * g;
  }
  return s;
}

void require_m4(const CurvatureFrame& fr) {
  if (fr.m != 4 || fr.codim() != 1) throw std::invalid_argument("the -8 residue formulas need a 4-dimensional hypersurface");
}

}  // namespace

M8Residues local_residue_m8(const CurvatureFrame& fr, bool with_graph) {
  require_m4(fr);
  const int m = 4;
  const Eigen::VectorXd& k = fr.kappa;
  KappaSums ks = kappa_sums(k);
  CSums cs = c_sums(fr);
  const double H = ks.H, pi2 = kPi * kPi;
  double dpart = 0.0;
  for (int i = 0; i < m; ++i) {
    dpart += 192.0 * (4 * k(i) - H) * fr.d(i, i, i, i);
    for (int j = i + 1; j < m; ++j) dpart += 64.0 * (2 * k(i) + 2 * k(j) - H) * fr.d(i, i, j, j);
  }
  double base = -63 * ks.s4 - 26 * ks.s22 + 12 * ks.s13 + 20 * ks.s112 + 24 * ks.p4 + 768 * cs.ciii2 + 256 * cs.ciij2 +
                128 * cs.cijk2;
  M8Residues r;
  r.raw = pi2 / 1536.0 * (base + dpart);
  double lapH = -2 * ks.s3 - H * ks.s2;
  double lapH2 = 2 * (H * lapH + cs.grad_h2);
  double ciij_sq = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) ciij_sq += std::pow(fr.c(i, j, j), 2);
  double lapSc = -8 * ks.s13 - 4 * ks.s112 + 48 * cs.ciiicijj + 16 * cs.ciikcjjk - 16 * ciij_sq - 12 * cs.cijk2;
  r.modified = pi2 / 1536.0 * base - pi2 / 384.0 * (3 * lapH2 - 4 * lapSc);
  if (with_graph) r.graph = graph_local_residue(fr, 2, WeightKind::One);
  return r;
}

M8Residues local_nu_residue_m8(const CurvatureFrame& fr, bool with_graph) {
  require_m4(fr);
  const int m = 4;
  const Eigen::VectorXd& k = fr.kappa;
  KappaSums ks = kappa_sums(k);
  CSums cs = c_sums(fr);
  const double H = ks.H, pi2 = kPi * kPi;
  double dpart = 0.0;
  for (int i = 0; i < m; ++i) {
    dpart -= 192.0 * (4 * k(i) + H) * fr.d(i, i, i, i);
    for (int j = i + 1; j < m; ++j) dpart -= 64.0 * (2 * k(i) + 2 * k(j) + H) * fr.d(i, i, j, j);
  }
  double base = 105 * ks.s4 + 54 * ks.s22 + 60 * ks.s13 + 36 * ks.s112 + 24 * ks.p4 - 960 * cs.ciii2 -
                192 * cs.ciij2 - 64 * cs.cijk2 - 128 * cs.ciikcjjk - 384 * cs.ciiicijj;
  M8Residues r;
  r.raw = pi2 / 1536.0 * (base + dpart);
  double lapH = -2 * ks.s3 - H * ks.s2;
  double lapH2 = 2 * (H * lapH + cs.grad_h2);
  double ciij_sq = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) ciij_sq += std::pow(fr.c(i, j, j), 2);
  double lapSc = -8 * ks.s13 - 4 * ks.s112 + 48 * cs.ciiicijj + 16 * cs.ciikcjjk - 16 * ciij_sq - 12 * cs.cijk2;
  r.modified = pi2 / 1536.0 * base + pi2 / 384.0 * (5 * lapH2 - 4 * lapSc);
  if (with_graph) r.graph = graph_local_residue(fr, 2, WeightKind::Nu);
  return r;
}

namespace {
M8Residues integrate_m8(const ManifoldSpec& spec, int order, bool nu, bool graph) {
  if (spec.m != 4 || !spec.hypersurface()) throw std::invalid_argument("the -8 residues need a 4-dimensional hypersurface");
  auto v = integrate_frames(spec, opts(spec, order), 3, [nu, graph](const CurvatureFrame& fr, double* out) {
    M8Residues r = nu ? local_nu_residue_m8(fr, graph) : local_residue_m8(fr, graph);
    out[0] = r.raw;
    out[1] = r.modified;
    out[2] = r.graph;
  });
  return {v[0], v[1], v[2]};
}
}  // namespace

M8Residues residue_m8(const ManifoldSpec& spec, int order, bool with_graph) {
  return integrate_m8(spec, order, false, with_graph);
}
M8Residues nu_residue_m8(const ManifoldSpec& spec, int order, bool with_graph) {
  return integrate_m8(spec, order, true, with_graph);
}

// ---------------------------------------------------------------------------

ResidueReport closed_residues(const ManifoldSpec& spec, int order) {
  if (spec.is_polygon()) throw std::invalid_argument("closed_residues: use the polygon oracle for polygonal knots");
  const int m = spec.m;
  const int p = order > 0 ? order : auto_order(spec);
  ResidueReport rep;
  rep.shape = spec.kind;
  rep.m = m;
  rep.n = spec.n;
  double a1 = residue_first(spec, p), b1 = residue_first(spec, p + 4);
  rep.add(-m, b1, "closed", std::abs(a1 - b1));
  double a2 = residue_second(spec, p), b2 = residue_second(spec, p + 4);
  rep.add(-m - 2, b2, "closed", std::abs(a2 - b2));
  double a3 = nu_residue_second(spec, p), b3 = nu_residue_second(spec, p + 4);
  rep.add(-m - 2, b3, "closed-nu", std::abs(a3 - b3));
  if (m == 4 && spec.hypersurface()) {
    const bool g = !spec.axial.empty();
    M8Residues x = residue_m8(spec, p, g), y = residue_m8(spec, p + 4, g);
    rep.add(-8, y.modified, "modified", std::abs(x.modified - y.modified));
    rep.add(-8, y.raw, "raw", std::abs(x.raw - y.raw));
    if (g) rep.add(-8, y.graph, "graph", std::abs(x.graph - y.graph));
    M8Residues xn = nu_residue_m8(spec, p, g), yn = nu_residue_m8(spec, p + 4, g);
    rep.add(-8, yn.modified, "modified-nu", std::abs(xn.modified - yn.modified));
    rep.add(-8, yn.raw, "raw-nu", std::abs(xn.raw - yn.raw));
    if (g) rep.add(-8, yn.graph, "graph-nu", std::abs(xn.graph - yn.graph));
  }
  return rep;
}

namespace {
void require_body(const ManifoldSpec& s) {
  if (!s.is_body) throw std::invalid_argument("spec is not a body");
}
}  // namespace

ResidueReport body_residues(const ManifoldSpec& body, int order) {
  require_body(body);
  const int n = body.n;
  ResidueReport rep;
  rep.shape = body.kind;
  rep.m = body.m;
  rep.n = n;
  const int p = order > 0 ? order : auto_order(body);
  for (int pass = 0; pass < 2; ++pass) {
    (void)pass;
  }
  auto compute = [&](int o) {
    std::array<double, 4> r{};
    r[0] = sphere_volume(n - 1) * enclosed_volume(body, o);
    r[1] = -sphere_volume(n - 2) / (n - 1) * volume(body, o);
    const double c3 = sphere_volume(n - 2) / (24.0 * (n * n - 1.0));
    auto v = integrate_frames(body, opts(body, o), 2, [&](const CurvatureFrame& fr, double* out) {
      double h2 = fr.norm_h2(), H2 = fr.mean_curvature_sq();
      out[0] = c3 * (2 * h2 + H2);
      out[1] = c3 * (3 * H2 - 2 * fr.scalar_curvature());
    });
    r[2] = v[0];
    r[3] = v[1];
    return r;
  };
  auto a = compute(p), b = compute(p + 4);
  rep.add(-n, b[0], "closed", std::abs(a[0] - b[0]));
  rep.add(-n - 1, b[1], "closed", std::abs(a[1] - b[1]));
  rep.add(-n - 3, b[2], "closed", std::abs(a[2] - b[2]));
  rep.add(-n - 3, b[3], "closed-sc", std::abs(a[3] - b[3]));
  return rep;
}

ResidueReport relative_residues(const ManifoldSpec& body, int order) {
  require_body(body);
  const int n = body.n;
  ResidueReport rep;
  rep.shape = body.kind;
  rep.m = body.m;
  rep.n = n;
  const int p = order > 0 ? order : auto_order(body);
  auto compute = [&](int o) {
    std::array<double, 3> r{};
    r[0] = 0.5 * sphere_volume(n - 1) * volume(body, o);
    const double on = sphere_volume(n - 2);
    auto v = integrate_frames(body, opts(body, o), 2, [&](const CurvatureFrame& fr, double* out) {
      double H = fr.kappa.sum(), k3 = fr.kappa.array().cube().sum();
      out[0] = on / (2.0 * (n - 1)) * H;
      out[1] = on / (48.0 * (n * n - 1.0)) * (4 * k3 - H * H * H);
    });
    r[1] = v[0];
    r[2] = v[1];
    return r;
  };
  auto a = compute(p), b = compute(p + 4);
  rep.add(-n, b[0], "closed", std::abs(a[0] - b[0]));
  rep.add(-n - 1, b[1], "closed", std::abs(a[1] - b[1]));
  rep.add(-n - 3, b[2], "closed", std::abs(a[2] - b[2]));
  return rep;
}

double relative_local_difference(const ManifoldSpec& body, int patch, const std::vector<double>& u) {
  require_body(body);
  const int n = body.n;
  IntrinsicData d = intrinsic_data(body, patch, u.data());
  return sphere_volume(n - 2) / (12.0 * (n * n - 1.0)) * d.lap_H;
}

double relative_boundary_local_residue(const ManifoldSpec& body, int patch, const std::vector<double>& u,
                                       const ProfileOptions& opt) {
  require_body(body);
  ProfileOptions o = opt;
  o.point_patch = patch;
  o.point_u = u;
  auto p = distance_profile(body, Weight::of(WeightKind::Relative), o);
  return profile_value(p, -double(body.n)).real();
}

double relative_local_residue(const ManifoldSpec& body, int patch, const std::vector<double>& u,
                              const ProfileOptions& opt) {
  require_body(body);
  ProfileOptions o = opt;
  o.point_patch = patch;
  o.point_u = u;
  auto p = distance_profile(body, Weight::of(WeightKind::RelativeFlipped), o);
  return profile_value(p, -double(body.n)).real();
}

// ---------------------------------------------------------------------------

std::vector<double> lk_curvatures(const ManifoldSpec& body, int order) {
  require_body(body);
  const int n = body.n;
  const int o = order > 0 ? order : auto_order(body);
  auto S = integrate_frames(body, opts(body, o), n, [n](const CurvatureFrame& fr, double* out) {
    for (int r = 0; r < n; ++r) out[r] = sym(fr.kappa, r);
  });
  std::vector<double> C(n + 1);
  C[n] = enclosed_volume(body, o);
  for (int k = 0; k < n; ++k) {
    int r = n - 1 - k;
    double sg = (r % 2) ? -1.0 : 1.0;
    C[k] = sg / ((n - k) * ball_volume(n - k)) * S[r];
  }
  return C;
}

std::vector<double> lk_from_residues(int n, double R_body_n, double R_body_n1, double R_body_n3, double R_rel_n1,
                                     double R_boundary_n1) {
  std::vector<double> C(n + 1, std::numeric_limits<double>::quiet_NaN());
  const double on1 = sphere_volume(n - 1), on2 = sphere_volume(n - 2);
  C[n] = R_body_n / on1;
  C[n - 1] = -(n - 1) / (2.0 * on2) * R_body_n1;
  if (n - 2 >= 0) C[n - 2] = -(n - 1) / (kPi * on2) * R_rel_n1;
  if (n - 3 >= 0) C[n - 3] = 3.0 * (n - 1) / (4.0 * kPi * on2) * ((n + 1) * R_body_n3 - R_boundary_n1);
  return C;
}

std::vector<double> lk_from_residues(const ManifoldSpec& body, int order) {
  require_body(body);
  const int n = body.n;
  auto br = body_residues(body, order);
  auto rr = relative_residues(body, order);
  double bd = residue_second(body, order);
  return lk_from_residues(n, br.value(-n), br.value(-n - 1), br.value(-n - 3, "closed"), rr.value(-n - 1), bd);
}

double steiner_volume(const std::vector<double>& C, double r) {
  const int n = static_cast<int>(C.size()) - 1;
  double v = 0.0;
  for (int k = 0; k <= n; ++k) v += ball_volume(k) * C[n - k] * std::pow(r, k);
  return v;
}

WeylTube weyl_tube_k2(const ManifoldSpec& spec, int order) {
  const int m = spec.m;
  const double o = sphere_volume(m - 1);
  auto v = integrate_frames(spec, opts(spec, order), 2, [&](const CurvatureFrame& fr, double* out) {
    out[0] = 0.5 * fr.scalar_curvature();
    auto r = local_residues_second(fr);
    out[1] = -(m / o) * (r.Rnu + 3.0 * r.R);
  });
  return {v[0], v[1]};
}

CurvatureIntegrals curvature_integrals(const ManifoldSpec& spec, int order) {
  auto v = integrate_points(spec, opts(spec, order), 5,
                            [&](int patch, const double* u, const QuadratureNode&, double* out) {
                              IntrinsicData d = intrinsic_data(spec, patch, u);
                              out[0] = 1.0;
                              out[1] = d.sc;
                              out[2] = d.rm2;
                              out[3] = d.ric2;
                              out[4] = d.sc * d.sc;
                            });
  return {v[0], v[1], v[2], v[3], v[4]};
}

IntrinsicResidues intrinsic_residues(int m, const CurvatureIntegrals& ci) {
  const double o = sphere_volume(m - 1);
  IntrinsicResidues r;
  r.r_m = o * ci.vol;
  r.r_m2 = -o / (6.0 * m) * ci.sc;
  r.r_m4 = o / (360.0 * m * (m + 2)) * (-3 * ci.rm2 + 8 * ci.ric2 + 5 * ci.sc2);
  return r;
}

HeatCoefficients heat_coefficients(const CurvatureIntegrals& ci) {
  return {ci.vol, ci.sc / 6.0, (2 * ci.rm2 - 2 * ci.ric2 + 5 * ci.sc2) / 360.0};
}

double extrinsic_ball_t6(const IntrinsicData& d) {
  const double H = d.H, h2 = d.norm_h2;
  return kPi / 9216.0 *
         (-9 * std::pow(H, 4) + 36 * h2 * h2 + 64 * d.t6_grad_h2 - 24 * d.t6_H_laph + 72 * d.t6_h_laph +
          24 * d.t6_h_hessH);
}

}  // namespace rlab
