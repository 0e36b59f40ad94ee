#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "magsim/errors.hpp"

namespace magsim::numerics {

/**
 * Classical fixed-step fourth-order Runge-Kutta.
 *
 * State is any fixed-size std::array<double, N>. The right-hand side is
 * called as rhs(x, state) and returns the derivative.
 */
template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N, typename Rhs>
State<N> rk4_step(const Rhs& rhs, double x, const State<N>& y, double h)
{
  auto axpy = [](const State<N>& a, double s, const State<N>& b) {
    State<N> r;
    for (std::size_t i = 0; i < N; ++i)
      r[i] = a[i] + s * b[i];
    return r;
  };
  const State<N> k1 = rhs(x, y);
  const State<N> k2 = rhs(x + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State<N> k3 = rhs(x + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State<N> k4 = rhs(x + h, axpy(y, h, k3));
  State<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Integrates from x0 to x1 in `steps` equal steps; returns steps+1 samples including y0.
template <std::size_t N, typename Rhs>
std::vector<State<N>> rk4_integrate(const Rhs& rhs, double x0, double x1, const State<N>& y0,
                                    std::size_t steps)
{
  std::vector<State<N>> out;
  out.reserve(steps + 1);
  out.push_back(y0);
  const double h = (x1 - x0) / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i)
    out.push_back(rk4_step<N>(rhs, x0 + static_cast<double>(i) * h, out.back(), h));
  return out;
}

/// Composite Simpson rule on uniform samples; the last interval falls back to a
/// three-point end correction when the interval count is odd.
double integrate_uniform(std::span<const double> f, double h);

/// Running integral F[i] = int_0^{x_i} f on uniform samples, third-order accurate.
std::vector<double> cumulative_integral(std::span<const double> f, double h);

/// Trapezoid weights for n uniform samples with spacing h.
std::vector<double> trapezoid_weights(std::size_t n, double h);

/// Golden-section minimisation of a unimodal function on [a, b].
template <typename F>
double golden_section_min(const F& f, double a, double b, double rel_tol = 1e-9)
{
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > rel_tol * (std::abs(c) + std::abs(d)) && std::abs(b - a) > 1e-300) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Bisection root of f on [a, b]; f(a) and f(b) must differ in sign.
template <typename F>
double bisect_root(const F& f, double a, double b, double rel_tol = 1e-12)
{
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0)
    return a;
  if (fb == 0.0)
    return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw NumericalError("bisect_root: interval does not bracket a root");
  for (int it = 0; it < 400; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0)
      return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
    if (std::abs(b - a) <= rel_tol * std::max(std::abs(a), std::abs(b)))
      break;
  }
  return 0.5 * (a + b);
}

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

} // namespace magsim::numerics
