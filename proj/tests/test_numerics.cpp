#include <doctest.h>

#include <cmath>
#include <vector>

#include "magsim/numerics.hpp"

using namespace magsim;

TEST_SUITE("numerics")
{
  TEST_CASE("simpson is exact for cubics on an even interval count")
  {
    const std::size_t n = 11;
    const double h = 2.0 / static_cast<double>(n - 1);
    std::vector<double> f;
    for (std::size_t k = 0; k < n; ++k) {
      const double x = h * static_cast<double>(k);
      f.push_back(x * x * x - 2.0 * x + 1.0);
    }
    // int_0^2 x^3 - 2x + 1 = 4 - 4 + 2
    CHECK(numerics::integrate_uniform(f, h) == doctest::Approx(2.0).epsilon(1e-13));
  }

  TEST_CASE("odd interval count keeps fourth-order accuracy")
  {
    auto err = [](std::size_t intervals) {
      const double h = 1.0 / static_cast<double>(intervals);
      std::vector<double> f;
      for (std::size_t k = 0; k <= intervals; ++k)
        f.push_back(std::exp(h * static_cast<double>(k)));
      return std::abs(numerics::integrate_uniform(f, h) - (std::exp(1.0) - 1.0));
    };
    CHECK(std::log2(err(21) / err(43)) > 3.5);
    CHECK(err(43) < 1e-7);
  }

  TEST_CASE("cumulative integral of cos tracks sin to third order")
  {
    auto err = [](std::size_t n) {
      const double h = 3.0 / static_cast<double>(n);
      std::vector<double> f;
      for (std::size_t k = 0; k <= n; ++k)
        f.push_back(std::cos(h * static_cast<double>(k)));
      const auto F = numerics::cumulative_integral(f, h);
      double e = 0.0;
      for (std::size_t k = 0; k <= n; ++k)
        e = std::max(e, std::abs(F[k] - std::sin(h * static_cast<double>(k))));
      return e;
    };
    const double order = std::log2(err(100) / err(200));
    CHECK(order > 2.8);
    CHECK(err(200) < 1e-6);
  }

  TEST_CASE("rk4 converges at fourth order on exponential decay")
  {
    auto rhs = [](double, const numerics::State<1>& y) { return numerics::State<1>{-y[0]}; };
    auto err = [&](std::size_t n) {
      const auto ys = numerics::rk4_integrate<1>(rhs, 0.0, 2.0, {1.0}, n);
      return std::abs(ys.back()[0] - std::exp(-2.0));
    };
    CHECK(std::log2(err(20) / err(40)) == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("golden section and bisection")
  {
    const double xm = numerics::golden_section_min([](double x) { return (x - 0.3) * (x - 0.3); },
                                                   -1.0, 2.0, 1e-12);
    CHECK(xm == doctest::Approx(0.3).epsilon(1e-7));
    const double r = numerics::bisect_root([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS(numerics::bisect_root([](double x) { return x * x + 1.0; }, 0.0, 1.0));
  }

  TEST_CASE("slope fit recovers a power law")
  {
    std::vector<double> x, y;
    for (int k = 0; k < 5; ++k) {
      x.push_back(std::log(1.0 + k));
      y.push_back(2.5 * x.back() - 1.0);
    }
    CHECK(numerics::fit_slope(x, y) == doctest::Approx(2.5));
  }
}
