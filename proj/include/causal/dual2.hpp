// Second-order multivariate dual numbers over the base coordinates only.
// This is the derivative path of the classical Christoffel/Riemann oracle and
// is deliberately independent of the jet-ring engine.

#pragma once

#include <array>
#include <cmath>

#include "causal/jet.hpp"

namespace causal {

struct Dual2 {
  static constexpr int kMax = 8;
  int m = 0;  // number of active variables
  double f = 0.0;
  std::array<double, kMax> g{};
  std::array<double, kMax * kMax> h{};  // row-major m x m

  Dual2() = default;
  Dual2(int m_, double value) : m(m_), f(value) {}

  static Dual2 variable(int m, int slot, double value) {
    Dual2 d(m, value);
    d.g[static_cast<size_t>(slot)] = 1.0;
    return d;
  }

  double& hess(int i, int j) { return h[static_cast<size_t>(i) * kMax + j]; }
  double hess(int i, int j) const { return h[static_cast<size_t>(i) * kMax + j]; }

  Dual2& operator+=(const Dual2& o) {
    f += o.f;
    for (int i = 0; i < m; ++i) g[static_cast<size_t>(i)] += o.g[static_cast<size_t>(i)];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) hess(i, j) += o.hess(i, j);
    return *this;
  }
  Dual2& operator-=(const Dual2& o) {
    f -= o.f;
    for (int i = 0; i < m; ++i) g[static_cast<size_t>(i)] -= o.g[static_cast<size_t>(i)];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) hess(i, j) -= o.hess(i, j);
    return *this;
  }

  friend Dual2 operator+(Dual2 a, const Dual2& b) { return a += b; }
  friend Dual2 operator-(Dual2 a, const Dual2& b) { return a -= b; }
  friend Dual2 operator+(Dual2 a, double s) {
    a.f += s;
    return a;
  }
  friend Dual2 operator+(double s, Dual2 a) {
    a.f += s;
    return a;
  }
  friend Dual2 operator-(Dual2 a, double s) {
    a.f -= s;
    return a;
  }
  friend Dual2 operator-(double s, const Dual2& a) {
    Dual2 r = -a;
    r.f += s;
    return r;
  }
  friend Dual2 operator-(const Dual2& a) {
    Dual2 r(a.m, -a.f);
    for (int i = 0; i < a.m; ++i) r.g[static_cast<size_t>(i)] = -a.g[static_cast<size_t>(i)];
    for (int i = 0; i < a.m; ++i)
      for (int j = 0; j < a.m; ++j) r.hess(i, j) = -a.hess(i, j);
    return r;
  }
  friend Dual2 operator*(Dual2 a, double s) {
    a.f *= s;
    for (int i = 0; i < a.m; ++i) a.g[static_cast<size_t>(i)] *= s;
    for (int i = 0; i < a.m; ++i)
      for (int j = 0; j < a.m; ++j) a.hess(i, j) *= s;
    return a;
  }
  friend Dual2 operator*(double s, Dual2 a) { return a * s; }

  friend Dual2 operator*(const Dual2& a, const Dual2& b) {
    Dual2 r(a.m, a.f * b.f);
    for (int i = 0; i < a.m; ++i)
      r.g[static_cast<size_t>(i)] =
          a.g[static_cast<size_t>(i)] * b.f + a.f * b.g[static_cast<size_t>(i)];
    for (int i = 0; i < a.m; ++i)
      for (int j = 0; j < a.m; ++j)
        r.hess(i, j) = a.hess(i, j) * b.f + a.f * b.hess(i, j) +
                       a.g[static_cast<size_t>(i)] * b.g[static_cast<size_t>(j)] +
                       a.g[static_cast<size_t>(j)] * b.g[static_cast<size_t>(i)];
    return r;
  }

  // Composition with a scalar function given value, first and second
  // derivative at a.f.
  static Dual2 chain(const Dual2& a, double f0, double f1, double f2) {
    Dual2 r(a.m, f0);
    for (int i = 0; i < a.m; ++i) r.g[static_cast<size_t>(i)] = f1 * a.g[static_cast<size_t>(i)];
    for (int i = 0; i < a.m; ++i)
      for (int j = 0; j < a.m; ++j)
        r.hess(i, j) = f1 * a.hess(i, j) +
                       f2 * a.g[static_cast<size_t>(i)] * a.g[static_cast<size_t>(j)];
    return r;
  }

  friend Dual2 operator/(const Dual2& a, const Dual2& b) {
    if (b.f == 0.0) throw DomainError("dual2 division by zero value");
    const double inv = 1.0 / b.f;
    return a * chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  friend Dual2 operator/(double s, const Dual2& b) { return Dual2(b.m, s) / b; }
  friend Dual2 operator/(Dual2 a, double s) { return a * (1.0 / s); }

  friend Dual2 exp(const Dual2& a) {
    const double e = std::exp(a.f);
    return chain(a, e, e, e);
  }
  friend Dual2 log(const Dual2& a) {
    if (!(a.f > 0.0)) throw DomainError("log: nonpositive argument");
    return chain(a, std::log(a.f), 1.0 / a.f, -1.0 / (a.f * a.f));
  }
  friend Dual2 sqrt(const Dual2& a) {
    if (!(a.f > 0.0)) throw DomainError("sqrt: nonpositive argument");
    const double r = std::sqrt(a.f);
    return chain(a, r, 0.5 / r, -0.25 / (r * a.f));
  }
  friend Dual2 sin(const Dual2& a) { return chain(a, std::sin(a.f), std::cos(a.f), -std::sin(a.f)); }
  friend Dual2 cos(const Dual2& a) { return chain(a, std::cos(a.f), -std::sin(a.f), -std::cos(a.f)); }
  friend Dual2 pow(const Dual2& a, double p) {
    if (p == std::floor(p) && std::abs(p) <= 32) {
      int ip = static_cast<int>(std::abs(p));
      Dual2 acc(a.m, 1.0);
      for (int i = 0; i < ip; ++i) acc = acc * a;
      if (p >= 0) return acc;
      return 1.0 / acc;
    }
    if (!(a.f > 0.0)) throw DomainError("pow: nonpositive base with non-integer exponent");
    const double f0 = std::pow(a.f, p);
    return chain(a, f0, p * f0 / a.f, p * (p - 1.0) * f0 / (a.f * a.f));
  }
  friend Dual2 pow(const Dual2& a, const Dual2& b) { return exp(b * log(a)); }
};

}  // namespace causal
