#pragma once

// Forward-mode dual numbers carrying N first partial derivatives. Used to
// differentiate the averaged Hamiltonians exactly, including under the
// phase-averaging integral.

#include <array>
#include <cmath>
#include <cstddef>

namespace hilldro {

template <std::size_t N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit constants

  static constexpr Dual variable(double value, std::size_t index) {
    Dual x(value);
    x.d[index] = 1.0;
    return x;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (std::size_t i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] = (d[i] - v * inv * o.d[i]) * inv;
    v *= inv;
    return *this;
  }
};

template <std::size_t N>
Dual<N> operator-(Dual<N> a) {
  a.v = -a.v;
  for (auto& x : a.d) x = -x;
  return a;
}

template <std::size_t N>
Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <std::size_t N>
Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <std::size_t N>
Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <std::size_t N>
Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }

template <std::size_t N>
Dual<N> operator+(Dual<N> a, double b) { a.v += b; return a; }
template <std::size_t N>
Dual<N> operator+(double b, Dual<N> a) { a.v += b; return a; }
template <std::size_t N>
Dual<N> operator-(Dual<N> a, double b) { a.v -= b; return a; }
template <std::size_t N>
Dual<N> operator-(double b, const Dual<N>& a) { return -a + b; }
template <std::size_t N>
Dual<N> operator*(Dual<N> a, double b) {
  a.v *= b;
  for (auto& x : a.d) x *= b;
  return a;
}
template <std::size_t N>
Dual<N> operator*(double b, Dual<N> a) { return a * b; }
template <std::size_t N>
Dual<N> operator/(Dual<N> a, double b) { return a * (1.0 / b); }
template <std::size_t N>
Dual<N> operator/(double b, const Dual<N>& a) { return Dual<N>(b) / a; }

template <std::size_t N>
Dual<N> sqrt(const Dual<N>& a) {
  Dual<N> r(std::sqrt(a.v));
  const double k = 0.5 / r.v;
  for (std::size_t i = 0; i < N; ++i) r.d[i] = k * a.d[i];
  return r;
}

template <std::size_t N>
Dual<N> pow(const Dual<N>& a, double p) {
  Dual<N> r(std::pow(a.v, p));
  const double k = p * std::pow(a.v, p - 1.0);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = k * a.d[i];
  return r;
}

inline double value_of(double x) { return x; }
template <std::size_t N>
double value_of(const Dual<N>& x) { return x.v; }

}  // namespace hilldro
