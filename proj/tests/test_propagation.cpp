#include <doctest.h>

#include <cmath>
#include <vector>

#include "magsim/errors.hpp"
#include "magsim/propagation.hpp"

using namespace magsim;

namespace {

AtomicParams faraday_params()
{
  AtomicParams p;
  p.gamma0 = 1e-4;
  p.delta_eff = 1e3;
  return p;
}

// Residual of the implicit solution I - I0 + 2 gamma gamma0 ln(I/I0) + gamma0 gamma_r kappa z / 2 = 0.
double implicit_residual(const AtomicParams& p, double i0, double i, double z)
{
  return i - i0 + 2.0 * p.gamma * p.gamma0 * std::log(i / i0) +
         0.5 * p.gamma0 * p.gamma_r * p.kappa * z;
}

} // namespace

TEST_SUITE("propagation")
{
  TEST_CASE("no ground-state decay means no absorption")
  {
    AtomicParams p = faraday_params();
    p.gamma0 = 0.0;
    const auto prof = propagate_intensity_ode(p, 0.5, 10.0);
    for (std::size_t k = 0; k < prof.size(); ++k)
      CHECK(prof.total(k) == 0.5);
  }

  TEST_CASE("ODE profile satisfies the implicit solution")
  {
    const AtomicParams p = faraday_params();
    for (double i0 : {1e-3, 1e-2, 1.0}) {
      const double length = length_for_eta_exact(p, i0, 0.05);
      const auto prof = propagate_intensity_ode(p, i0, length);
      for (std::size_t k = 0; k < prof.size(); k += 97)
        CHECK(std::abs(implicit_residual(p, i0, prof.total(k), prof.z[k])) < 1e-10 * i0);
      CHECK(prof.eta() == doctest::Approx(0.05).epsilon(1e-8));
      for (std::size_t k = 1; k < prof.size(); ++k)
        CHECK(prof.total(k) <= prof.total(k - 1));
    }
  }

  TEST_CASE("strong field decays linearly")
  {
    const AtomicParams p = faraday_params();
    const double i0 = 1e4 * p.gamma * p.gamma0;
    const double length = length_for_eta_linear(p, i0, 0.5);
    const auto prof = propagate_intensity_ode(p, i0, length);
    const double a0 = absorption_coefficient(p, i0);
    for (std::size_t k = 0; k < prof.size(); k += 64)
      CHECK(prof.total(k) == doctest::Approx(i0 * (1.0 - a0 * prof.z[k])).epsilon(2e-4));
  }

  TEST_CASE("near saturation the ODE departs from the linear law")
  {
    const AtomicParams p = faraday_params();
    const double i0 = 1e3 * p.gamma * p.gamma0;
    // Output intensity close to 2 gamma gamma0.
    const double length = length_for_eta_exact(p, i0, 2e-3);
    const auto t = transmission(p, i0, length, {16384, 1e-8});
    CHECK_FALSE(t.valid);
    CHECK_FALSE(t.warnings.empty());
    CHECK(t.eta == t.eta_ode);
    CHECK(std::abs(t.eta_ode - t.eta_analytic) > 1e-3);
    CHECK(t.eta_ode == doctest::Approx(2e-3).epsilon(1e-6));
  }

  TEST_CASE("RK4 step doubling converges at fourth order")
  {
    const AtomicParams p = faraday_params();
    const double i0 = 3.0 * p.gamma * p.gamma0;
    const double length = length_for_eta_exact(p, i0, 0.1);
    auto eta = [&](std::size_t n) {
      return propagate_intensity_ode(p, i0, length, {n, 1.0}).eta();
    };
    const double e1 = eta(16), e2 = eta(32), e3 = eta(64);
    const double order = std::log2((e1 - e2) / (e2 - e3));
    CHECK(order >= 3.5);
  }

  TEST_CASE("propagation failures")
  {
    const AtomicParams p = faraday_params();
    CHECK_THROWS_AS(propagate_intensity_ode(p, 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(propagate_intensity_ode(p, 1.0, -1.0), InvalidArgument);
    const double i0 = 3.0 * p.gamma * p.gamma0;
    CHECK_THROWS_AS(propagate_intensity_ode(p, i0, length_for_eta_exact(p, i0, 0.01), {4, 1e-8}),
                    StepTooCoarse);
    // Far below saturation the loss is exponential; two huge steps overflow.
    CHECK_THROWS_AS(propagate_intensity_ode(p, 1e-7, 1e80, {2, 1e300}), IntensityUnderflow);
  }

  TEST_CASE("transmission")
  {
    const AtomicParams p = faraday_params();
    CHECK(transmission(p, 1.0, 0.0).eta == 1.0);

    const double i0 = 1e3 * p.gamma * p.gamma0;
    const double length = 0.94 / absorption_coefficient(p, i0);
    CHECK(transmission(p, i0, length).eta_analytic == doctest::Approx(0.06).epsilon(1e-12));

    // Well inside the validity regime the two agree to 1e-3 absolute.
    const double strong = 1e4 * p.gamma * p.gamma0;
    const auto t = transmission(p, strong, length_for_eta_linear(p, strong, 0.5));
    CHECK(t.valid);
    CHECK(std::abs(t.eta_analytic - t.eta_ode) < 1e-3);
  }

  TEST_CASE("relative phase vanishes without Zeeman splitting")
  {
    AtomicParams p = faraday_params();
    p.delta_big = 0.2;
    const double i0 = 0.1;
    const auto prof = propagate_intensity_ode(p, i0, length_for_eta_exact(p, i0, 0.2));
    const std::vector<double> shift(prof.size(), 3e-4);
    const auto ph = propagate_phases(p, prof, shift, shift);
    for (std::size_t k = 0; k < prof.size(); ++k)
      CHECK(ph.phi_plus[k] == ph.phi_minus[k]);
    CHECK(bias_stark_phase(prof, p.delta_eff, false) == 0.0);
  }

  TEST_CASE("one-photon detuning cancels in the signal phase")
  {
    AtomicParams p = faraday_params();
    p.delta0 = 1e-6;
    const double i0 = 0.1;
    const auto prof = propagate_intensity_ode(p, i0, length_for_eta_exact(p, i0, 0.2));
    const auto a = propagate_phases(p, prof);
    p.delta_big = 0.7;
    const auto b = propagate_phases(p, prof);
    const double sa = a.phi_plus.back() - a.phi_minus.back();
    const double sb = b.phi_plus.back() - b.phi_minus.back();
    CHECK(sb == doctest::Approx(sa).epsilon(1e-12));
    CHECK(b.phi_plus.back() - a.phi_plus.back() ==
          doctest::Approx(b.phi_minus.back() - a.phi_minus.back()).epsilon(1e-12));
  }

  TEST_CASE("quadrature signal phase matches the closed form")
  {
    AtomicParams p = faraday_params();
    p.delta0 = 1e-2 * p.gamma0;
    for (double i0 : {1e-2, 1e-1}) {
      for (double eta : {0.8, 0.1, 0.01}) {
        const auto sol = propagate(p, i0, length_for_eta_exact(p, i0, eta));
        CHECK(sol.phi_sig == doctest::Approx(signal_phase(p.delta0, p.gamma0, sol.eta)).epsilon(1e-4));
        CHECK(sol.phi_bias == 0.0);
      }
    }
  }

  TEST_CASE("signal phase closed form")
  {
    CHECK(signal_phase(0.0, 1e-4, 0.3) == 0.0);
    CHECK(signal_phase(1e-6, 1e-4, 0.06) == doctest::Approx(-0.02813).epsilon(1e-4));
    CHECK(signal_phase(-1e-6, 1e-4, 0.06) == -signal_phase(1e-6, 1e-4, 0.06));
    const AtomicParams p = faraday_params();
    CHECK_THROWS_AS(signal_phase(1e-6, 1e-4, 0.0), InvalidArgument);
    const double i0 = 0.1;
    AtomicParams q = p;
    q.delta0 = 1e-6;
    CHECK(signal_phase(q, i0, length_for_eta_linear(q, i0, 0.06)) ==
          doctest::Approx(-0.01 * std::log(1.0 / 0.06)).epsilon(1e-12));
  }

  TEST_CASE("quadrature signal phase is linear in the Zeeman splitting")
  {
    AtomicParams p = faraday_params();
    const double i0 = 0.05;
    const double length = length_for_eta_exact(p, i0, 0.1);
    std::vector<double> slopes;
    for (double d : {1e-8, 1e-7, 1e-6}) {
      p.delta0 = d;
      slopes.push_back(propagate(p, i0, length).phi_sig / d);
    }
    CHECK(slopes[1] == doctest::Approx(slopes[0]).epsilon(1e-3));
    CHECK(slopes[2] == doctest::Approx(slopes[0]).epsilon(1e-3));
    CHECK(slopes[0] < 0.0);
  }

  TEST_CASE("bias phase of an asymmetric configuration")
  {
    AtomicParams p = faraday_params();
    p.gamma0 = 0.0;
    const auto flat = propagate_intensity_ode(p, 0.4, 2.0);
    CHECK(bias_stark_phase(flat, 1e3, true) == doctest::Approx(0.4 * 2.0 / 1e3).epsilon(1e-14));

    const auto lin = linear_profile(0.4, 0.5, 3.0, 101);
    CHECK(bias_stark_phase(lin, 1e3, true) ==
          doctest::Approx(0.4 * 3.0 * 1.5 / 2e3).epsilon(1e-13));
    CHECK_THROWS_AS(bias_stark_phase(lin, 0.0, true), DivisionByZero);
  }
}
