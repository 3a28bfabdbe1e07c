#pragma once

// Truncated multivariate Taylor polynomials in four variables.
// Jet<D> holds all monomial coefficients of total degree <= D.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace rlab {

inline constexpr int kJetVars = 4;

constexpr int jet_size(int d) {
  // C(d + 4, 4)
  return (d + 1) * (d + 2) * (d + 3) * (d + 4) / 24;
}

using Exponent = std::array<int, kJetVars>;

template <int D>
struct JetTables {
  static constexpr int N = jet_size(D);
  std::array<Exponent, N> exps{};
  std::array<int16_t, 6 * 6 * 6 * 6> lookup{};
  struct Term {
    int16_t a, b, out;
  };
  std::vector<Term> products;
  // products whose left factor has degree >= 1 and right factor has degree >= 1
  // are not separated; the full table is used for every multiplication.

  static int key(const Exponent& e) { return ((e[0] * 6 + e[1]) * 6 + e[2]) * 6 + e[3]; }

  JetTables() {
    lookup.fill(-1);
    int k = 0;
    for (int deg = 0; deg <= D; ++deg)
      for (int a = deg; a >= 0; --a)
        for (int b = deg - a; b >= 0; --b)
          for (int c = deg - a - b; c >= 0; --c) {
            Exponent e{a, b, c, deg - a - b - c};
            exps[k] = e;
            lookup[key(e)] = static_cast<int16_t>(k);
            ++k;
          }
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Exponent e;
        int deg = 0;
        for (int v = 0; v < kJetVars; ++v) {
          e[v] = exps[i][v] + exps[j][v];
          deg += e[v];
        }
        if (deg <= D)
          products.push_back({static_cast<int16_t>(i), static_cast<int16_t>(j), lookup[key(e)]});
      }
  }

  static const JetTables& get() {
    static const JetTables t;
    return t;
  }

  int index(const Exponent& e) const {
    int deg = 0;
    for (int v : e) {
      if (v < 0) return -1;
      deg += v;
    }
    if (deg > D) return -1;
    return lookup[key(e)];
  }
};

template <int D>
class Jet {
 public:
  static constexpr int kDegree = D;
  static constexpr int kSize = jet_size(D);
  std::array<double, kSize> c{};

  Jet() = default;
  Jet(double v) { c[0] = v; }

  static Jet variable(int i, double v) {
    Jet r(v);
    if constexpr (D >= 1) r.c[1 + i] = 1.0;
    return r;
  }

  double value() const { return c[0]; }

  double coef(const Exponent& e) const {
    int k = JetTables<D>::get().index(e);
    return k < 0 ? 0.0 : c[k];
  }
  void set_coef(const Exponent& e, double v) { c[JetTables<D>::get().index(e)] = v; }

  // partial derivative of the polynomial at the origin, multi-index e
  double derivative(const Exponent& e) const {
    double f = 1.0;
    for (int v : e)
      for (int q = 2; q <= v; ++q) f *= q;
    return coef(e) * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < kSize; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c[0] += s;
    return *this;
  }
  Jet& operator-=(double s) {
    c[0] -= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o);

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.c[0] = 0.0;
    for (const auto& t : JetTables<D>::get().products) r.c[t.out] += a.c[t.a] * b.c[t.b];
    return r;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& v : a.c) v = -v;
    return a;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
};

// g(a) given t[k] = g^{(k)}(a0) / k!
template <int D>
Jet<D> compose_univariate(const Jet<D>& a, const std::array<double, D + 1>& t) {
  Jet<D> h = a;
  h.c[0] = 0.0;
  Jet<D> r(t[D]);
  for (int k = D - 1; k >= 0; --k) {
    r = r * h;
    r.c[0] += t[k];
  }
  return r;
}

template <int D>
Jet<D> recip(const Jet<D>& a) {
  std::array<double, D + 1> t;
  double inv = 1.0 / a.c[0], p = inv;
  for (int k = 0; k <= D; ++k) {
    t[k] = (k % 2 ? -p : p);
    p *= inv;
  }
  return compose_univariate(a, t);
}

template <int D>
Jet<D>& Jet<D>::operator/=(const Jet<D>& o) {
  *this = *this * recip(o);
  return *this;
}
template <int D>
Jet<D> operator/(const Jet<D>& a, const Jet<D>& b) {
  return a * recip(b);
}
template <int D>
Jet<D> operator/(double s, const Jet<D>& b) {
  return recip(b) * s;
}

template <int D>
Jet<D> pow(const Jet<D>& a, double p) {
  std::array<double, D + 1> t;
  double a0 = a.c[0];
  double binom = 1.0;
  for (int k = 0; k <= D; ++k) {
    t[k] = binom * std::pow(a0, p - k);
    binom *= (p - k) / (k + 1);
  }
  return compose_univariate(a, t);
}

template <int D>
Jet<D> sqrt(const Jet<D>& a) {
  return pow(a, 0.5);
}

template <int D>
Jet<D> exp(const Jet<D>& a) {
  std::array<double, D + 1> t;
  double e = std::exp(a.c[0]), f = 1.0;
  for (int k = 0; k <= D; ++k) {
    t[k] = e / f;
    f *= (k + 1);
  }
  return compose_univariate(a, t);
}

template <int D>
Jet<D> log(const Jet<D>& a) {
  std::array<double, D + 1> t;
  double a0 = a.c[0];
  t[0] = std::log(a0);
  double p = 1.0;
  for (int k = 1; k <= D; ++k) {
    p /= a0;
    t[k] = (k % 2 ? 1.0 : -1.0) * p / k;
  }
  return compose_univariate(a, t);
}

template <int D>
Jet<D> sin(const Jet<D>& a) {
  std::array<double, D + 1> t;
  double s = std::sin(a.c[0]), co = std::cos(a.c[0]), f = 1.0;
  const double cyc[4] = {s, co, -s, -co};
  for (int k = 0; k <= D; ++k) {
    t[k] = cyc[k % 4] / f;
    f *= (k + 1);
  }
  return compose_univariate(a, t);
}

template <int D>
Jet<D> cos(const Jet<D>& a) {
  std::array<double, D + 1> t;
  double s = std::sin(a.c[0]), co = std::cos(a.c[0]), f = 1.0;
  const double cyc[4] = {co, -s, -co, s};
  for (int k = 0; k <= D; ++k) {
    t[k] = cyc[k % 4] / f;
    f *= (k + 1);
  }
  return compose_univariate(a, t);
}

template <int D>
Jet<D> tan(const Jet<D>& a) {
  return sin(a) / cos(a);
}

template <int D>
Jet<D> cosh(const Jet<D>& a) {
  return (exp(a) + exp(-a)) * 0.5;
}
template <int D>
Jet<D> sinh(const Jet<D>& a) {
  return (exp(a) - exp(-a)) * 0.5;
}

// derivative in variable v, one degree lower
template <int D>
Jet<D - 1> diff(const Jet<D>& a, int v) {
  static_assert(D >= 1);
  Jet<D - 1> r;
  const auto& lo = JetTables<D - 1>::get();
  const auto& hi = JetTables<D>::get();
  for (int k = 0; k < Jet<D - 1>::kSize; ++k) {
    Exponent e = lo.exps[k];
    e[v] += 1;
    r.c[k] = e[v] * a.c[hi.index(e)];
  }
  return r;
}

template <int D2, int D>
Jet<D2> truncate(const Jet<D>& a) {
  static_assert(D2 <= D);
  Jet<D2> r;
  for (int k = 0; k < Jet<D2>::kSize; ++k) r.c[k] = a.c[k];
  return r;
}

template <int D2, int D>
Jet<D2> lift(const Jet<D>& a) {
  static_assert(D2 >= D);
  Jet<D2> r;
  for (int k = 0; k < Jet<D>::kSize; ++k) r.c[k] = a.c[k];
  return r;
}

// P(s_0, .., s_3) where every s_i has zero constant term
template <int D>
Jet<D> compose(const Jet<D>& p, const std::array<Jet<D>, kJetVars>& s) {
  std::array<std::array<Jet<D>, D + 1>, kJetVars> pw;
  for (int v = 0; v < kJetVars; ++v) {
    pw[v][0] = Jet<D>(1.0);
    for (int k = 1; k <= D; ++k) pw[v][k] = pw[v][k - 1] * s[v];
  }
  const auto& tab = JetTables<D>::get();
  Jet<D> r;
  for (int k = 0; k < Jet<D>::kSize; ++k) {
    if (p.c[k] == 0.0) continue;
    const Exponent& e = tab.exps[k];
    Jet<D> term = pw[0][e[0]];
    for (int v = 1; v < kJetVars; ++v)
      if (e[v]) term = term * pw[v][e[v]];
    r += term * p.c[k];
  }
  return r;
}

template <class T>
struct ScalarTraits {
  static constexpr int degree = -1;
};
template <int D>
struct ScalarTraits<Jet<D>> {
  static constexpr int degree = D;
};

template <class T>
double value_of(const T& x) {
  if constexpr (ScalarTraits<T>::degree < 0)
    return x;
  else
    return x.value();
}

}  // namespace rlab

namespace rlab {

// Evaluates many polynomials at the same substitution s (zero constant terms),
// sharing the monomial table.
template <int D>
class Composer {
 public:
  explicit Composer(const std::array<Jet<D>, kJetVars>& s) {
    const auto& tab = JetTables<D>::get();
    for (int k = 0; k < Jet<D>::kSize; ++k) {
      const Exponent& e = tab.exps[k];
      int v0 = -1;
      for (int v = 0; v < kJetVars; ++v)
        if (e[v]) {
          v0 = v;
          break;
        }
      if (v0 < 0) {
        mono_[k] = Jet<D>(1.0);
        continue;
      }
      Exponent f = e;
      f[v0] -= 1;
      mono_[k] = mono_[tab.index(f)] * s[v0];
    }
  }
  Jet<D> apply(const Jet<D>& p) const {
    Jet<D> r;
    for (int k = 0; k < Jet<D>::kSize; ++k) {
      double a = p.c[k];
      if (a == 0.0) continue;
      for (int q = 0; q < Jet<D>::kSize; ++q) r.c[q] += a * mono_[k].c[q];
    }
    return r;
  }

 private:
  std::array<Jet<D>, Jet<D>::kSize> mono_;
};

}  // namespace rlab
