#pragma once

// Small reference solvers used to cross-check the library. They share no code
// with it: plain double precision, written for clarity rather than speed.

#include <array>
#include <cmath>
#include <functional>

namespace oracle {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
using Rhs = std::function<State<N>(double, const State<N>&)>;

template <std::size_t N>
State<N> rk4(const Rhs<N>& f, State<N> x, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  auto add = [](const State<N>& a, double s, const State<N>& b) {
    State<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  double t = t0;
  for (int k = 0; k < steps; ++k) {
    const auto k1 = f(t, x);
    const auto k2 = f(t + h / 2, add(x, h / 2, k1));
    const auto k3 = f(t + h / 2, add(x, h / 2, k2));
    const auto k4 = f(t + h, add(x, h, k3));
    for (std::size_t i = 0; i < N; ++i) x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    t += h;
  }
  return x;
}

/// Root of g on [a, b] where g(a) and g(b) have opposite signs.
inline double bisect(const std::function<double(double)>& g, double a, double b, double tol = 1e-14) {
  double ga = g(a);
  for (int i = 0; i < 200 && b - a > tol; ++i) {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    if ((gm > 0) == (ga > 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Flight with linear damping: y'' = -dh y', z'' = -g - dv z'. State (y, z, y', z').
inline Rhs<4> flight(double g, double dv, double dh) {
  return [=](double, const State<4>& x) -> State<4> { return {x[2], x[3], -dh * x[2], -g - dv * x[3]}; };
}

}  // namespace oracle
