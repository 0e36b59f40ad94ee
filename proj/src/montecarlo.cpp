#include <algorithm>
#include <cmath>
#include <vector>

#include "magsim/errors.hpp"
#include "magsim/numerics.hpp"
#include "magsim/random.hpp"
#include "magsim/stark_noise.hpp"

namespace magsim {

namespace {

// Streaming central moments up to fourth order; merge() is the pairwise
// update of Pebay (2008), so block results combine exactly as one stream.
struct Accumulator {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;

  void add(double x)
  {
    const double n1 = n;
    n += 1.0;
    const double d = x - mean;
    const double dn = d / n;
    const double dn2 = dn * dn;
    const double t = d * dn * n1;
    mean += dn;
    m4 += t * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * m2 - 4.0 * dn * m3;
    m3 += t * dn * (n - 2.0) - 3.0 * dn * m2;
    m2 += t;
  }

  void merge(const Accumulator& o)
  {
    if (o.n == 0.0)
      return;
    if (n == 0.0) {
      *this = o;
      return;
    }
    const double na = n;
    const double nb = o.n;
    const double nn = na + nb;
    const double d = o.mean - mean;
    const double d2 = d * d;
    const double d3 = d2 * d;
    const double d4 = d2 * d2;
    const double m4n = m4 + o.m4 + d4 * na * nb * (na * na - na * nb + nb * nb) / (nn * nn * nn) +
                       6.0 * d2 * (na * na * o.m2 + nb * nb * m2) / (nn * nn) +
                       4.0 * d * (na * o.m3 - nb * m3) / nn;
    const double m3n = m3 + o.m3 + d3 * na * nb * (na - nb) / (nn * nn) +
                       3.0 * d * (na * o.m2 - nb * m2) / nn;
    m2 += o.m2 + d2 * na * nb / nn;
    m3 = m3n;
    m4 = m4n;
    mean += d * nb / nn;
    n = nn;
  }

  Moments moments() const
  {
    Moments out;
    out.count = static_cast<std::size_t>(n);
    out.mean = mean;
    if (n > 1.0) {
      const double var_pop = m2 / n;
      out.variance = m2 / (n - 1.0);
      out.std_error_mean = std::sqrt(out.variance / n);
      const double mu4 = m4 / n;
      out.std_error_variance = std::sqrt(std::max(0.0, mu4 - var_pop * var_pop) / n);
    }
    return out;
  }
};

struct BlockResult {
  Accumulator relative;
  Accumulator common;
};

struct Cells {
  std::vector<double> weight_over_2i; // w_j / (2 I_j)
  std::vector<double> mean_shift;     // I_j / (2 Delta0)
  std::vector<double> inv_sqrt_n;     // 1 / sqrt(N_j), N_j photons per component in cell j
  double common_mean = 0.0;
};

Cells prepare(const StarkModel& m, const IntensityProfile& profile, double n_in)
{
  if (profile.size() < 2)
    throw InvalidArgument("montecarlo: profile needs at least 2 nodes");
  if (!(n_in > 0.0))
    throw InvalidArgument("montecarlo: n_in must be > 0");
  if (m.delta_eff == 0.0)
    throw DivisionByZero("montecarlo: delta_eff = 0");
  const auto w = numerics::trapezoid_weights(profile.size(), profile.step());
  const double i0 = profile.input();
  Cells c;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    const double i = profile.total(j);
    if (!(i > 0.0))
      throw ProfileNonPositive("montecarlo: profile has a non-positive intensity sample");
    const double photons = n_in * (w[j] / profile.length) * (i / (2.0 * i0));
    c.weight_over_2i.push_back(w[j] / (2.0 * i));
    c.mean_shift.push_back(i / (2.0 * m.delta_eff));
    c.inv_sqrt_n.push_back(1.0 / std::sqrt(photons));
    c.common_mean += c.weight_over_2i.back() * 2.0 * c.mean_shift.back();
  }
  return c;
}

BlockResult run_block(const Cells& c, const Philox4x32& rng, double common_mode,
                      std::uint64_t first, std::uint64_t last)
{
  BlockResult out;
  const std::size_t ncell = c.mean_shift.size();
  for (std::uint64_t s = first; s < last; ++s) {
    const auto lo = static_cast<std::uint32_t>(s);
    const auto hi = static_cast<std::uint32_t>(s >> 32);
    double rel = 0.0;
    double com = 0.0;
    for (std::size_t j = 0; j < ncell; ++j) {
      const auto cell = static_cast<std::uint32_t>(j);
      const auto [gp, gm] = rng.normal_pair({lo, hi, cell, 0u});
      double classical = 0.0;
      if (common_mode != 0.0)
        classical = common_mode * rng.normal_pair({lo, hi, cell, 1u}).first;
      const double dp = c.mean_shift[j] * (1.0 + (gp + classical) * c.inv_sqrt_n[j]);
      const double dm = c.mean_shift[j] * (1.0 + (gm + classical) * c.inv_sqrt_n[j]);
      rel += c.weight_over_2i[j] * (dp - dm);
      com += c.weight_over_2i[j] * (dp + dm);
    }
    out.relative.add(rel);
    out.common.add(com - c.common_mean);
  }
  return out;
}

McResult finish(const StarkModel& m, const AtomicParams& p, const IntensityProfile& profile,
                double n_in, double common_mode, const Cells& cells,
                const std::vector<BlockResult>& blocks)
{
  Accumulator rel;
  Accumulator com;
  for (const auto& b : blocks) {
    rel.merge(b.relative);
    com.merge(b.common);
  }
  McResult r;
  r.relative = rel.moments();
  r.common = com.moments();
  const double scale = -p.kappa * p.gamma_r;
  r.phase = r.relative;
  r.phase.mean *= scale;
  r.phase.std_error_mean *= std::abs(scale);
  r.phase.variance *= scale * scale;
  r.phase.std_error_variance *= scale * scale;

  // t_m cancels in the photon-number form; any positive value will do.
  r.analytic_phase_variance = phase_variance(m, p, profile, 1.0, n_in);
  r.analytic_relative_variance = r.analytic_phase_variance / (scale * scale);
  for (std::size_t j = 0; j < cells.mean_shift.size(); ++j) {
    const double a = cells.weight_over_2i[j] * cells.mean_shift[j] * cells.inv_sqrt_n[j];
    r.discrete_relative_variance += 2.0 * a * a;
    r.discrete_common_variance += (2.0 + 4.0 * common_mode * common_mode) * a * a;
  }
  return r;
}

void check_options(const McOptions& opt)
{
  if (opt.samples < 2)
    throw InvalidArgument("montecarlo: need at least 2 samples");
  if (opt.block == 0)
    throw InvalidArgument("montecarlo: block size must be > 0");
}

} // namespace

McResult montecarlo_stark_oracle(const StarkModel& m, const AtomicParams& p,
                                 const IntensityProfile& profile, double n_in,
                                 const McOptions& opt)
{
  check_options(opt);
  const Cells cells = prepare(m, profile, n_in);
  const Philox4x32 rng(opt.seed);
  const std::size_t nblocks = (opt.samples + opt.block - 1) / opt.block;
  std::vector<BlockResult> blocks(nblocks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    const std::uint64_t first = static_cast<std::uint64_t>(b) * opt.block;
    const std::uint64_t last = std::min<std::uint64_t>(first + opt.block, opt.samples);
    blocks[b] = run_block(cells, rng, opt.common_mode, first, last);
  }
  return finish(m, p, profile, n_in, opt.common_mode, cells, blocks);
}

McResult montecarlo_stark_oracle_serial(const StarkModel& m, const AtomicParams& p,
                                        const IntensityProfile& profile, double n_in,
                                        const McOptions& opt)
{
  check_options(opt);
  const Cells cells = prepare(m, profile, n_in);
  const Philox4x32 rng(opt.seed);
  const std::size_t nblocks = (opt.samples + opt.block - 1) / opt.block;
  std::vector<BlockResult> blocks(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::uint64_t first = static_cast<std::uint64_t>(b) * opt.block;
    const std::uint64_t last = std::min<std::uint64_t>(first + opt.block, opt.samples);
    blocks[b] = run_block(cells, rng, opt.common_mode, first, last);
  }
  return finish(m, p, profile, n_in, opt.common_mode, cells, blocks);
}

} // namespace magsim
