#pragma once

#include <array>
#include <cstddef>

namespace wavestab {

// Truncated Taylor series ("jet") scalar: carries a value and the first
// Order derivatives through arithmetic.  Coefficients are stored in Taylor
// form c[k] = f^(k)/k!, so products are plain convolutions.  Rational
// expressions evaluated on jets yield derivatives exact to rounding, which
// is what the effective-potential and index formulas require (order <= 4).
template <class T, int Order>
struct Jet {
  static_assert(Order >= 0);
  std::array<T, Order + 1> c{};

  static Jet variable(T x0) {
    Jet j;
    j.c[0] = x0;
    if constexpr (Order >= 1) j.c[1] = T(1);
    return j;
  }
  static Jet constant(T x0) {
    Jet j;
    j.c[0] = x0;
    return j;
  }

  T value() const { return c[0]; }
  // k-th derivative: k! * c[k]
  T derivative(int k) const {
    T f(1);
    for (int i = 2; i <= k; ++i) f *= T(i);
    return c[static_cast<std::size_t>(k)] * f;
  }

  Jet operator-() const {
    Jet r;
    for (int k = 0; k <= Order; ++k) r.c[k] = -c[k];
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Order; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Order; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Order; ++k)
      for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
    return r;
  }
  // Power-series division, valid for b.value() != 0.
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= Order; ++k) {
      T s = a.c[k];
      for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
      r.c[k] = s / b.c[0];
    }
    return r;
  }

  friend Jet operator+(const Jet& a, T s) { return a + constant(s); }
  friend Jet operator+(T s, const Jet& a) { return constant(s) + a; }
  friend Jet operator-(const Jet& a, T s) { return a - constant(s); }
  friend Jet operator-(T s, const Jet& a) { return constant(s) - a; }
  friend Jet operator*(const Jet& a, T s) {
    Jet r;
    for (int k = 0; k <= Order; ++k) r.c[k] = a.c[k] * s;
    return r;
  }
  friend Jet operator*(T s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, T s) { return a * (T(1) / s); }
  friend Jet operator/(T s, const Jet& a) { return constant(s) / a; }
};

using Jet4 = Jet<double, 4>;

}  // namespace wavestab
