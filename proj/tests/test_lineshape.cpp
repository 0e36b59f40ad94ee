#include <doctest.h>

#include <cmath>
#include <vector>

#include "magsim/errors.hpp"
#include "magsim/numerics.hpp"
#include "magsim/propagation.hpp"

using namespace magsim;

namespace {

AtomicParams lineshape_params()
{
  AtomicParams p;
  p.gamma0 = 1e-4;
  p.delta_eff = 1e3;
  return p;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n)
{
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k)
    g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return g;
}

// Linear profile: x(z) = Delta + I(z)/Delta0 is linear in z, the integral is an arctan difference.
double linear_oracle(const AtomicParams& p, double i0, const AbsorptionModel& m, double detuning)
{
  const double x0 = detuning + i0 / p.delta_eff;
  const double xl = detuning + i0 * m.eta / p.delta_eff;
  const double k = i0 * (1.0 - m.eta) / (m.length * p.delta_eff);
  return (std::atan(x0 / p.gamma0) - std::atan(xl / p.gamma0)) / k;
}

// Exponential profile: partial fractions of gamma0 / ((x - Delta)(x^2 + gamma0^2)).
double exponential_oracle(const AtomicParams& p, double i0, const AbsorptionModel& m,
                          double detuning)
{
  const double a = detuning;
  const double b = p.gamma0;
  const double amp = b / (a * a + b * b);
  auto prim = [&](double x) {
    return amp * (std::log(std::abs(x - a)) - 0.5 * std::log(x * x + b * b) -
                  (a / b) * std::atan(x / b));
  };
  const double x0 = a + i0 / p.delta_eff;
  const double xl = a + i0 * std::exp(-m.optical_depth) / p.delta_eff;
  return m.length / m.optical_depth * (prim(x0) - prim(xl));
}

} // namespace

TEST_SUITE("lineshape")
{
  TEST_CASE("absorption models")
  {
    AbsorptionModel m;
    m.kind = AbsorptionKind::linear;
    m.length = 2.0;
    m.eta = 0.25;
    CHECK(m.intensity(4.0, 2.0) == doctest::Approx(1.0));
    m.kind = AbsorptionKind::exponential;
    m.optical_depth = 2.0;
    CHECK(m.intensity(4.0, 2.0) == doctest::Approx(4.0 * std::exp(-2.0)));
    CHECK(parse_absorption_kind("constant") == AbsorptionKind::constant);
    CHECK(to_string(AbsorptionKind::exponential) == "exponential");
    CHECK_THROWS_AS(parse_absorption_kind("gaussian"), InvalidArgument);
  }

  TEST_CASE("linear profile matches the arctan closed form")
  {
    const AtomicParams p = lineshape_params();
    AbsorptionModel m;
    m.kind = AbsorptionKind::linear;
    m.length = 1.7;
    m.eta = 0.5;
    const double i0 = 10.0 * p.delta_eff * p.gamma0;
    for (double d : {-1.5e-3, -1e-3, -7.3e-4, -5e-4, -2e-4, 0.0, 3e-4}) {
      const double ref = linear_oracle(p, i0, m, d);
      CHECK(lineshape_value(p, i0, m, d) == doctest::Approx(ref).epsilon(1e-9));
    }
  }

  TEST_CASE("exponential profile matches the partial-fraction closed form")
  {
    const AtomicParams p = lineshape_params();
    AbsorptionModel m;
    m.kind = AbsorptionKind::exponential;
    m.length = 1.0;
    m.optical_depth = 1.3;
    const double i0 = 30.0 * p.delta_eff * p.gamma0;
    for (double d : {-3e-3, -2e-3, -1.5e-3, -1e-3, -4e-4, 2e-4}) {
      const double ref = exponential_oracle(p, i0, m, d);
      CHECK(lineshape_value(p, i0, m, d) == doctest::Approx(ref).epsilon(1e-8));
    }
  }

  TEST_CASE("without field the resonance is a Lorentzian of width 2 gamma0")
  {
    const AtomicParams p = lineshape_params();
    AbsorptionModel m;
    m.kind = AbsorptionKind::linear;
    m.length = 1.0;
    const auto grid = uniform_grid(-2e-3, 2e-3, 2001);
    const auto v = broadened_lineshape_serial(p, 0.0, grid, m);
    for (std::size_t k = 0; k < grid.size(); k += 250)
      CHECK(v[k] == doctest::Approx(p.gamma0 / (p.gamma0 * p.gamma0 + grid[k] * grid[k])));
    const auto w = lineshape_fwhm(p, 0.0, m, grid, v);
    CHECK(w.fwhm == doctest::Approx(2.0 * p.gamma0).epsilon(1e-7));
    CHECK(std::abs(w.center) < 1e-10);
  }

  TEST_CASE("constant intensity shifts without broadening")
  {
    const AtomicParams p = lineshape_params();
    AbsorptionModel m;
    m.kind = AbsorptionKind::constant;
    m.length = 1.0;
    const double i0 = 1.0;
    const double shift = -i0 / p.delta_eff;
    const auto grid = uniform_grid(shift - 2e-3, shift + 2e-3, 2001);
    const auto v = broadened_lineshape_serial(p, i0, grid, m);
    const auto w = lineshape_fwhm(p, i0, m, grid, v);
    CHECK(w.fwhm == doctest::Approx(2.0 * p.gamma0).epsilon(1e-7));
    CHECK(w.center == doctest::Approx(shift).epsilon(1e-9));
  }

  TEST_CASE("linear absorption broadens in proportion to the input intensity")
  {
    const AtomicParams p = lineshape_params();
    AbsorptionModel m;
    m.kind = AbsorptionKind::linear;
    m.length = 1.0;
    m.eta = 0.5;
    const double crit = p.delta_eff * p.gamma0;
    std::vector<double> x, y;
    for (double r : {10.0, 100.0, 1000.0}) {
      const double i0 = r * crit;
      const auto grid = uniform_grid(-i0 / p.delta_eff - 20.0 * p.gamma0,
                                     -i0 * m.eta / p.delta_eff + 20.0 * p.gamma0, 4096);
      const auto v = broadened_lineshape(p, i0, grid, m);
      const auto w = lineshape_fwhm(p, i0, m, grid, v);
      CHECK(w.fwhm > 2.0 * p.gamma0);
      x.push_back(std::log(std::sqrt(i0)));
      y.push_back(std::log(w.fwhm));
    }
    CHECK(numerics::fit_slope(x, y) == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("grid too coarse for the resonance")
  {
    const AtomicParams p = lineshape_params();
    AbsorptionModel m;
    m.kind = AbsorptionKind::constant;
    const auto grid = uniform_grid(-1e-2, 1e-2, 16);
    const auto v = broadened_lineshape_serial(p, 0.0, grid, m);
    CHECK_THROWS_AS(lineshape_fwhm(p, 0.0, m, grid, v), GridTooCoarse);
    const auto shifted = uniform_grid(1e-3, 2e-3, 100);
    const auto vs = broadened_lineshape_serial(p, 0.0, shifted, m);
    CHECK_THROWS_AS(lineshape_fwhm(p, 0.0, m, shifted, vs), GridTooCoarse);
  }

  TEST_CASE("bad inputs")
  {
    AtomicParams p = lineshape_params();
    AbsorptionModel m;
    m.eta = 1.5;
    CHECK_THROWS_AS(lineshape_value(p, 1.0, m, 0.0), InvalidArgument);
    m.eta = 0.5;
    p.delta_eff = 0.0;
    CHECK_THROWS_AS(lineshape_value(p, 1.0, m, 0.0), DivisionByZero);
  }
}
