#pragma once

#include <vector>

#include <Eigen/Dense>

namespace rlab {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Legendre on [a, b]
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Gauss-Jacobi on [-1, 1] for the weight (1 - x)^alpha (1 + x)^beta
Rule1D gauss_jacobi(int n, double alpha, double beta);

// Points on the unit sphere S^k in R^{k+1}; exact for polynomials of degree < 2n
// (degree < n along the circle factor).
struct SphereRule {
  int k = 0;
  std::vector<Eigen::VectorXd> points;
  std::vector<double> w;
};
SphereRule sphere_rule(int k, int n);

// Closed-form integral of x^e over S^k (e has k+1 entries).
double sphere_monomial_integral(const std::vector<int>& e);

double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace rlab
