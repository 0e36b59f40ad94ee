#include "magsim/numerics.hpp"

#include <stdexcept>

namespace magsim::numerics {

double integrate_uniform(std::span<const double> f, double h)
{
  const std::size_t n = f.size();
  if (n < 2)
    return 0.0;
  if (n == 2)
    return 0.5 * h * (f[0] + f[1]);
  const std::size_t intervals = n - 1;
  const std::size_t even = intervals - intervals % 2;
  double s = f[0] + f[even];
  for (std::size_t i = 1; i < even; ++i)
    s += (i % 2 ? 4.0 : 2.0) * f[i];
  double total = s * h / 3.0;
  if (intervals % 2) {
    // last interval from the quadratic through the final three samples
    total += h * (-f[n - 3] + 8.0 * f[n - 2] + 5.0 * f[n - 1]) / 12.0;
  }
  return total;
}

std::vector<double> cumulative_integral(std::span<const double> f, double h)
{
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 2)
    return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double piece;
    if (i + 2 < n)
      piece = h * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]) / 12.0;
    else
      piece = h * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]) / 12.0;
    out[i + 1] = out[i] + piece;
  }
  return out;
}

std::vector<double> trapezoid_weights(std::size_t n, double h)
{
  std::vector<double> w(n, h);
  if (n == 0)
    return w;
  if (n == 1) {
    w[0] = 0.0;
    return w;
  }
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

double fit_slope(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("fit_slope: need at least two paired samples");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

} // namespace magsim::numerics
