#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "magsim/errors.hpp"
#include "magsim/numerics.hpp"
#include "magsim/propagation.hpp"

namespace magsim {

double AbsorptionModel::intensity(double omega0_sq, double z) const
{
  switch (kind) {
  case AbsorptionKind::constant:
    return omega0_sq;
  case AbsorptionKind::linear:
    return omega0_sq * (1.0 - (1.0 - eta) * z / length);
  case AbsorptionKind::exponential:
    return omega0_sq * std::exp(-optical_depth * z / length);
  }
  return omega0_sq;
}

AbsorptionKind parse_absorption_kind(const std::string& name)
{
  if (name == "constant")
    return AbsorptionKind::constant;
  if (name == "linear")
    return AbsorptionKind::linear;
  if (name == "exponential")
    return AbsorptionKind::exponential;
  throw InvalidArgument("unknown absorption model '" + name +
                        "' (expected constant, linear or exponential)");
}

std::string to_string(AbsorptionKind kind)
{
  switch (kind) {
  case AbsorptionKind::constant:
    return "constant";
  case AbsorptionKind::linear:
    return "linear";
  case AbsorptionKind::exponential:
    return "exponential";
  }
  return "?";
}

namespace {

void check_model(const AbsorptionModel& m)
{
  if (!(m.length > 0.0))
    throw InvalidArgument("absorption model: length must be > 0");
  if (m.kind == AbsorptionKind::linear && (!(m.eta > 0.0) || m.eta > 1.0))
    throw InvalidArgument("absorption model: eta must be in (0,1]");
  if (m.kind == AbsorptionKind::exponential && !(m.optical_depth >= 0.0))
    throw InvalidArgument("absorption model: optical_depth must be >= 0");
}

// Position where the local resonance condition Delta + I(z)/Delta0 = 0 holds,
// and |dI/dz| there. Returns false if it lies outside (0, L).
bool resonance_point(const AbsorptionModel& m, double omega0_sq, double target, double& z,
                     double& slope)
{
  if (target <= 0.0)
    return false;
  switch (m.kind) {
  case AbsorptionKind::constant:
    return false;
  case AbsorptionKind::linear:
    if (m.eta == 1.0)
      return false;
    z = m.length * (1.0 - target / omega0_sq) / (1.0 - m.eta);
    slope = omega0_sq * (1.0 - m.eta) / m.length;
    break;
  case AbsorptionKind::exponential:
    if (m.optical_depth == 0.0)
      return false;
    z = m.length * std::log(omega0_sq / target) / m.optical_depth;
    slope = target * m.optical_depth / m.length;
    break;
  }
  return z > 0.0 && z < m.length;
}

} // namespace

double lineshape_value(const AtomicParams& p, double omega0_sq, const AbsorptionModel& model,
                       double detuning)
{
  if (p.delta_eff == 0.0)
    throw DivisionByZero("lineshape: delta_eff = 0");
  if (!(p.gamma0 > 0.0))
    throw InvalidArgument("lineshape: gamma0 must be > 0");
  check_model(model);
  const double g0 = p.gamma0;
  auto f = [&](double z) {
    const double x = detuning + model.intensity(omega0_sq, z) / p.delta_eff;
    return g0 / (g0 * g0 + x * x);
  };
  if (model.kind == AbsorptionKind::constant)
    return model.length * f(0.0);

  // Split the interval around the narrow resonant slice so the adaptive rule sees it.
  std::vector<double> cuts{0.0, model.length};
  double zr = 0.0;
  double slope = 0.0;
  if (resonance_point(model, omega0_sq, -detuning * p.delta_eff, zr, slope)) {
    const double w = g0 * std::abs(p.delta_eff) / slope;
    for (double c : {zr - 20.0 * w, zr, zr + 20.0 * w})
      if (c > 0.0 && c < model.length)
        cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
  }
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    total += gauss_kronrod<double, 31>::integrate(f, cuts[k], cuts[k + 1], 15, 1e-12);
  return total;
}

std::vector<double> broadened_lineshape(const AtomicParams& p, double omega0_sq,
                                        std::span<const double> detuning_grid,
                                        const AbsorptionModel& model)
{
  check_model(model);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(detuning_grid.size());
  std::vector<double> out(detuning_grid.size());
  // Exceptions must not escape the parallel region; collect and rethrow.
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      out[k] = lineshape_value(p, omega0_sq, model, detuning_grid[k]);
    } catch (...) {
#pragma omp critical(magsim_lineshape_err)
      if (!err)
        err = std::current_exception();
    }
  }
  if (err)
    std::rethrow_exception(err);
  return out;
}

std::vector<double> broadened_lineshape_serial(const AtomicParams& p, double omega0_sq,
                                               std::span<const double> detuning_grid,
                                               const AbsorptionModel& model)
{
  check_model(model);
  std::vector<double> out(detuning_grid.size());
  for (std::size_t k = 0; k < detuning_grid.size(); ++k)
    out[k] = lineshape_value(p, omega0_sq, model, detuning_grid[k]);
  return out;
}

LineshapeWidth lineshape_fwhm(const AtomicParams& p, double omega0_sq, const AbsorptionModel& model,
                              std::span<const double> grid, std::span<const double> values)
{
  const std::size_t n = grid.size();
  if (n < 3 || values.size() != n)
    throw InvalidArgument("lineshape_fwhm: need matching grid and values with >= 3 points");
  const std::size_t k = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  if (k == 0 || k == n - 1)
    throw GridTooCoarse("lineshape_fwhm: maximum sits on the edge of the detuning grid");

  auto f = [&](double d) { return lineshape_value(p, omega0_sq, model, d); };
  LineshapeWidth w;
  w.center = numerics::golden_section_min([&](double d) { return -f(d); }, grid[k - 1], grid[k + 1],
                                          1e-12);
  w.peak = std::max(f(w.center), values[k]);
  const double half = 0.5 * w.peak;
  // The refined peak is more than twice the best sample: the grid misses the resonance.
  if (values[k] < half)
    throw GridTooCoarse("lineshape_fwhm: resonance falls between detuning grid points");
  auto g = [&](double d) { return f(d) - half; };

  std::size_t lo = k;
  while (lo > 0 && values[lo] >= half)
    --lo;
  std::size_t hi = k;
  while (hi < n - 1 && values[hi] >= half)
    ++hi;
  if (values[lo] >= half || values[hi] >= half)
    throw GridTooCoarse("lineshape_fwhm: half-maximum crossing lies outside the detuning grid");

  w.left = numerics::bisect_root(g, grid[lo], grid[lo + 1]);
  w.right = numerics::bisect_root(g, grid[hi - 1], grid[hi]);
  w.fwhm = w.right - w.left;

  const double spacing = (grid[n - 1] - grid[0]) / static_cast<double>(n - 1);
  if (w.fwhm < 4.0 * std::abs(spacing)) {
    std::ostringstream os;
    os << "lineshape_fwhm: resonance width " << w.fwhm << " spans fewer than 4 grid spacings ("
       << spacing << ")";
    throw GridTooCoarse(os.str());
  }
  return w;
}

} // namespace magsim
