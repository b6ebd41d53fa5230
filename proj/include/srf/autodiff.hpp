#pragma once

#include <array>
#include <cmath>

namespace srf {

/// Forward-mode dual number with N first-order partials. Just enough
/// arithmetic for the frustum closed forms (+ - * / sqrt acos).
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit on purpose

  static constexpr Dual variable(double value, int k) {
    Dual r(value);
    r.d[k] = 1.0;
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int k = 0; k < N; ++k) d[k] += o.d[k];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int k = 0; k < N; ++k) d[k] -= o.d[k];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int k = 0; k < N; ++k) d[k] = d[k] * o.v + v * o.d[k];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    for (int k = 0; k < N; ++k) d[k] = (d[k] - v * inv * o.d[k]) * inv;
    v *= inv;
    return *this;
  }
};

template <int N> Dual<N> operator+(Dual<N> x, const Dual<N>& y) { return x += y; }
template <int N> Dual<N> operator-(Dual<N> x, const Dual<N>& y) { return x -= y; }
template <int N> Dual<N> operator*(Dual<N> x, const Dual<N>& y) { return x *= y; }
template <int N> Dual<N> operator/(Dual<N> x, const Dual<N>& y) { return x /= y; }
template <int N> Dual<N> operator+(Dual<N> x, double y) { return x += Dual<N>(y); }
template <int N> Dual<N> operator-(Dual<N> x, double y) { return x -= Dual<N>(y); }
template <int N> Dual<N> operator*(Dual<N> x, double y) { return x *= Dual<N>(y); }
template <int N> Dual<N> operator/(Dual<N> x, double y) { return x /= Dual<N>(y); }
template <int N> Dual<N> operator+(double x, const Dual<N>& y) { return Dual<N>(x) += y; }
template <int N> Dual<N> operator-(double x, const Dual<N>& y) { return Dual<N>(x) -= y; }
template <int N> Dual<N> operator*(double x, const Dual<N>& y) { return Dual<N>(x) *= y; }
template <int N> Dual<N> operator/(double x, const Dual<N>& y) { return Dual<N>(x) /= y; }

template <int N>
Dual<N> operator-(Dual<N> x) {
  x.v = -x.v;
  for (auto& dk : x.d) dk = -dk;
  return x;
}

template <int N>
Dual<N> sqrt(const Dual<N>& x) {
  Dual<N> r(std::sqrt(x.v));
  const double g = 0.5 / r.v;
  for (int k = 0; k < N; ++k) r.d[k] = g * x.d[k];
  return r;
}

template <int N>
Dual<N> acos(const Dual<N>& x) {
  Dual<N> r(std::acos(x.v));
  const double g = -1.0 / std::sqrt(1.0 - x.v * x.v);
  for (int k = 0; k < N; ++k) r.d[k] = g * x.d[k];
  return r;
}

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Dual<N>& x) { return x.v; }

}  // namespace srf
