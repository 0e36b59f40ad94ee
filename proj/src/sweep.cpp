#include <cmath>
#include <cstdio>

#include "magsim/errors.hpp"
#include "magsim/sensitivity.hpp"

namespace magsim {

namespace {

SensitivityPoint eit_point(const AtomicParams& p, double eta, double power_ratio,
                           const PowerMapping& map)
{
  SensitivityPoint pt;
  pt.power_ratio = power_ratio;
  pt.rabi_sq = map.rabi_sq(p, power_ratio);
  pt.n_in = map.photons(power_ratio);
  pt.bracket = noise_bracket(p, pt.rabi_sq, eta);
  pt.min_delta0 = min_detectable_shift(p, pt.rabi_sq, eta, pt.n_in);
  pt.regime_tag = pt.bracket - 1.0 > 1.0 ? Regime::stark_limited : Regime::shot_limited;
  return pt;
}

std::vector<SensitivityCurve> empty_curves(const AtomicParams& p, std::span<const double> eta_list,
                                           std::span<const double> power_grid)
{
  if (p.delta_eff == 0.0 || !(p.gamma0 > 0.0))
    throw InvalidArgument("figure4_sweep: need delta_eff != 0 and gamma0 > 0");
  if (eta_list.empty())
    throw InvalidArgument("figure4_sweep: empty eta list");
  if (power_grid.empty())
    throw InvalidArgument("figure4_sweep: empty power grid");
  for (double pr : power_grid)
    if (!(pr > 0.0))
      throw InvalidArgument("figure4_sweep: power ratios must be > 0");
  std::vector<SensitivityCurve> curves(eta_list.size());
  for (std::size_t e = 0; e < eta_list.size(); ++e) {
    if (!(eta_list[e] > 0.0) || !(eta_list[e] < 1.0))
      throw DegenerateEta("figure4_sweep: eta must lie strictly inside (0, 1)");
    char buf[64];
    std::snprintf(buf, sizeof buf, "eit_eta_%g", eta_list[e]);
    curves[e].label = buf;
    curves[e].eta = eta_list[e];
    curves[e].points.resize(power_grid.size());
  }
  return curves;
}

// The grid point closest (in log power) to the closed-form optimum.
void tag_optimum(const AtomicParams& p, const PowerMapping& map, SensitivityCurve& c)
{
  const double target = std::log(map.power_ratio(p, optimal_rabi_sq(p, c.eta)));
  std::size_t best = 0;
  for (std::size_t k = 1; k < c.points.size(); ++k)
    if (std::abs(std::log(c.points[k].power_ratio) - target) <
        std::abs(std::log(c.points[best].power_ratio) - target))
      best = k;
  c.points[best].regime_tag = Regime::optimum;
}

} // namespace

std::vector<SensitivityCurve> figure4_sweep(const AtomicParams& p, std::span<const double> eta_list,
                                            std::span<const double> power_grid,
                                            const PowerMapping& map)
{
  auto curves = empty_curves(p, eta_list, power_grid);
  const std::size_t np = power_grid.size();
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(eta_list.size() * np);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    const std::size_t e = static_cast<std::size_t>(k) / np;
    const std::size_t i = static_cast<std::size_t>(k) % np;
    curves[e].points[i] = eit_point(p, eta_list[e], power_grid[i], map);
  }
  for (auto& c : curves)
    tag_optimum(p, map, c);
  return curves;
}

std::vector<SensitivityCurve> figure4_sweep_serial(const AtomicParams& p,
                                                   std::span<const double> eta_list,
                                                   std::span<const double> power_grid,
                                                   const PowerMapping& map)
{
  auto curves = empty_curves(p, eta_list, power_grid);
  for (std::size_t e = 0; e < eta_list.size(); ++e)
    for (std::size_t i = 0; i < power_grid.size(); ++i)
      curves[e].points[i] = eit_point(p, eta_list[e], power_grid[i], map);
  for (auto& c : curves)
    tag_optimum(p, map, c);
  return curves;
}

} // namespace magsim
