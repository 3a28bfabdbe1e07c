#include "rlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "rlab/special.hpp"

namespace rlab {

Rule1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n == 1) {
    r.x[0] = 0.0;
    r.w[0] = 2.0;
  }
  double h = 0.5 * (b - a), c = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c + h * r.x[i];
    r.w[i] *= h;
  }
  return r;
}

Rule1D gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n < 1");
  if (alpha <= -1.0 || beta <= -1.0) throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
  // Golub-Welsch on the Jacobi recurrence
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    double t = 2.0 * k + ab;
    if (k == 0)
      J(0, 0) = (beta - alpha) / (ab + 2.0);
    else
      J(k, k) = (beta * beta - alpha * alpha) / (t * (t + 2.0));
    if (k + 1 < n) {
      double k1 = k + 1.0;
      double t1 = 2.0 * k1 + ab;
      double num = 4.0 * k1 * (k1 + alpha) * (k1 + beta) * (k1 + ab);
      double den = t1 * t1 * (t1 + 1.0) * (t1 - 1.0);
      double off = std::sqrt(num / den);
      J(k, k + 1) = off;
      J(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  double mu0 = std::pow(2.0, ab + 1.0) * std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                                                  std::lgamma(ab + 2.0));
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    r.w[i] = mu0 * v * v;
  }
  return r;
}

namespace {

void sphere_rec(int k, int n, SphereRule& out) {
  out.k = k;
  out.points.clear();
  out.w.clear();
  if (k == 0) {
    out.points = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
    out.w = {1.0, 1.0};
    return;
  }
  if (k == 1) {
    int m = std::max(n, 2);
    for (int j = 0; j < m; ++j) {
      double t = 2.0 * kPi * j / m;
      Eigen::VectorXd p(2);
      p << std::cos(t), std::sin(t);
      out.points.push_back(p);
      out.w.push_back(2.0 * kPi / m);
    }
    return;
  }
  // x = cos(alpha), weight (1 - x^2)^{(k-2)/2}
  double e = 0.5 * (k - 2);
  Rule1D g = gauss_jacobi(n, e, e);
  SphereRule sub;
  sphere_rec(k - 1, 2 * n, sub);
  for (int i = 0; i < n; ++i) {
    double x = g.x[i], s = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (std::size_t j = 0; j < sub.points.size(); ++j) {
      Eigen::VectorXd p(k + 1);
      p(0) = x;
      p.tail(k) = s * sub.points[j];
      out.points.push_back(p);
      out.w.push_back(g.w[i] * sub.w[j]);
    }
  }
}

}  // namespace

SphereRule sphere_rule(int k, int n) {
  if (k < 0) throw std::invalid_argument("sphere_rule: negative dimension");
  SphereRule r;
  sphere_rec(k, n, r);
  r.k = k;
  return r;
}

double sphere_monomial_integral(const std::vector<int>& e) {
  // 2 prod Gamma((e_i+1)/2) / Gamma((|e| + k + 1)/2)
  double s = 0.0, lg = 0.0;
  for (int v : e) {
    if (v % 2) return 0.0;
    lg += std::lgamma(0.5 * (v + 1));
    s += 0.5 * (v + 1);
  }
  return 2.0 * std::exp(lg - std::lgamma(s));
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace rlab
