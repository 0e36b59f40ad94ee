#include "magsim/atomic.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "magsim/errors.hpp"

namespace magsim {

namespace {

constexpr double kMaxCondition = 1e12;

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

// Right-hand side of the Bloch equations as printed (Omega enters as the
// coupling in -i(Omega sigma_ab - c.c.)). x = (p-, p+, Re s+, Im s+, Re s-, Im s-, Re c, Im c).
struct BlochRhs {
  double gamma_r, gamma0_r;
  cplx g_plus, g_minus, g_ground;
  cplx om_p, om_m;

  Vec8 operator()(const Vec8& x) const
  {
    const double pm = x[0];
    const double pp = x[1];
    const double pa = 1.0 - pm - pp;
    const cplx sp(x[2], x[3]);
    const cplx sm(x[4], x[5]);
    const cplx c(x[6], x[7]);
    const cplx I(0.0, 1.0);

    const cplx tm = om_m * sm;
    const cplx tp = om_p * sp;
    const double dpm = -gamma0_r * (pm - pp) + gamma_r * pa + 2.0 * tm.imag();
    const double dpp = gamma0_r * (pm - pp) + gamma_r * pa + 2.0 * tp.imag();
    const cplx dsp = -g_plus * sp - I * std::conj(om_p) * (pp - pa) - I * std::conj(om_m) * c;
    const cplx dsm =
        -g_minus * sm - I * std::conj(om_m) * (pm - pa) - I * std::conj(om_p) * std::conj(c);
    const cplx dc = -g_ground * c - I * om_m * sp + I * std::conj(om_p) * std::conj(sm);

    Vec8 out;
    out << dpm, dpp, dsp.real(), dsp.imag(), dsm.real(), dsm.imag(), dc.real(), dc.imag();
    return out;
  }
};

// The system is affine in x; probe columns to get A x + b.
void assemble(const AtomicParams& p, cplx omega_plus, cplx omega_minus, double stark_plus,
              double stark_minus, Mat8& A, Vec8& b)
{
  // The printed Bloch equations and the propagation convention differ by
  // Omega -> conj(Omega) and an overall sign of sigma_ab; see solve_bloch_exact.
  const BlochRhs rhs{p.gamma_r,
                     p.gamma0_r,
                     gamma_ab(p, +1, stark_plus),
                     gamma_ab(p, -1, stark_minus),
                     gamma_ground(p, stark_plus, stark_minus),
                     std::conj(omega_plus),
                     std::conj(omega_minus)};
  b = rhs(Vec8::Zero());
  for (int k = 0; k < 8; ++k)
    A.col(k) = rhs(Vec8::Unit(k)) - b;
}

double condition(const Mat8& A)
{
  Eigen::JacobiSVD<Mat8> svd(A);
  const auto& s = svd.singularValues();
  if (s[7] == 0.0)
    return INFINITY;
  return s[0] / s[7];
}

} // namespace

std::vector<std::string> validate(const AtomicParams& p)
{
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.gamma) || p.gamma <= 0.0)
    throw InvalidArgument("gamma must be > 0");
  if (!finite(p.gamma_r) || p.gamma_r <= 0.0)
    throw InvalidArgument("gamma_r must be > 0");
  if (!finite(p.gamma0) || p.gamma0 < 0.0)
    throw InvalidArgument("gamma0 must be >= 0");
  if (!finite(p.gamma0_r) || p.gamma0_r < 0.0)
    throw InvalidArgument("gamma0_r must be >= 0");
  if (!finite(p.kappa) || p.kappa < 0.0)
    throw InvalidArgument("kappa must be >= 0");
  if (!finite(p.delta_big) || !finite(p.delta0) || !finite(p.delta_eff))
    throw InvalidArgument("detunings must be finite");

  std::vector<std::string> warnings;
  if (p.gamma0 >= p.gamma) {
    std::ostringstream os;
    os << "gamma0 (" << p.gamma0 << ") is not small compared to gamma (" << p.gamma
       << "); perturbative results are outside their validity regime";
    warnings.push_back(os.str());
  }
  if (std::abs(p.delta_eff) < 10.0 * p.gamma) {
    std::ostringstream os;
    os << "delta_eff (" << p.delta_eff << ") is not large compared to gamma; "
       << "the ac-Stark description assumes far-detuned levels";
    warnings.push_back(os.str());
  }
  return warnings;
}

cplx gamma_ab(const AtomicParams& p, int sign, double stark_shift)
{
  const double s = sign >= 0 ? 1.0 : -1.0;
  return {p.gamma + 0.5 * p.gamma0_r, p.delta_big + stark_shift + s * 0.5 * p.delta0};
}

cplx gamma_ground(const AtomicParams& p, double stark_plus, double stark_minus)
{
  return {p.gamma0 + p.gamma0_r, p.delta0 + stark_plus - stark_minus};
}

double bloch_condition_number(const AtomicParams& p, cplx omega_plus, cplx omega_minus,
                              double stark_plus, double stark_minus)
{
  Mat8 A;
  Vec8 b;
  assemble(p, omega_plus, omega_minus, stark_plus, stark_minus, A, b);
  return condition(A);
}

ComplexCoherences solve_bloch_exact(const AtomicParams& p, cplx omega_plus, cplx omega_minus,
                                    double stark_plus, double stark_minus)
{
  Mat8 A;
  Vec8 b;
  assemble(p, omega_plus, omega_minus, stark_plus, stark_minus, A, b);
  const double cond = condition(A);
  if (!(cond <= kMaxCondition)) {
    std::ostringstream os;
    os << "Bloch steady state is singular (condition number " << cond << ")";
    throw SingularSystem(os.str());
  }
  const Vec8 x = A.colPivHouseholderQr().solve(-b);

  ComplexCoherences out;
  out.pop_bm = x[0];
  out.pop_bp = x[1];
  out.pop_a = 1.0 - x[0] - x[1];
  out.sigma_ab_plus = -cplx(x[2], x[3]);
  out.sigma_ab_minus = -cplx(x[4], x[5]);
  out.sigma_bmbp = cplx(x[6], x[7]);
  return out;
}

ComplexCoherences solve_bloch_perturbative(const AtomicParams& p, cplx omega_plus,
                                           cplx omega_minus, double stark_plus,
                                           double stark_minus)
{
  const double ip = std::norm(omega_plus);
  const double im = std::norm(omega_minus);
  const double w = ip + im;
  if (w == 0.0)
    throw DivisionByZero("solve_bloch_perturbative: |Omega|^2 = 0");

  const cplx I(0.0, 1.0);
  const double den = 2.0 * p.gamma * (2.0 * p.gamma0_r + p.gamma0) + w;
  // Only the two-photon combination and the mean one-photon detuning enter.
  const double two_photon = 0.5 * (p.delta0 + stark_plus - stark_minus);
  const double one_photon = p.delta_big + 0.5 * (stark_plus + stark_minus);
  const double delta_coeff = p.gamma0_r * (ip * ip + im * im) + 2.0 * p.gamma0 * ip * im;

  auto coherence = [&](cplx om, double i_self, double i_other, double s) {
    const cplx absorption = I * om * (p.gamma0 * i_other + p.gamma0_r * i_self) / (w * den);
    const cplx dispersion = -s * two_photon * 2.0 * om * i_other / (w * den);
    const cplx detuning = (one_photon / p.gamma) * om * delta_coeff / (w * w * den);
    return absorption + dispersion + detuning;
  };

  ComplexCoherences out;
  out.sigma_ab_plus = coherence(omega_plus, ip, im, +1.0);
  out.sigma_ab_minus = coherence(omega_minus, im, ip, -1.0);
  // Excited population from the balance 2 gamma_r sigma_aa = absorbed rate.
  const double absorbed = (std::conj(omega_plus) * out.sigma_ab_plus).imag() +
                          (std::conj(omega_minus) * out.sigma_ab_minus).imag();
  out.pop_a = absorbed / p.gamma_r;
  const double ground = 1.0 - out.pop_a;
  out.pop_bm = ground * ip / w;
  out.pop_bp = ground * im / w;
  out.sigma_bmbp = -ground * omega_plus * std::conj(omega_minus) / w;
  return out;
}

cplx eit_susceptibility(const AtomicParams& p, cplx omega_drive, double two_photon_detuning)
{
  const double den = std::norm(omega_drive) + p.gamma * p.gamma0;
  return p.gamma_r * cplx(-two_photon_detuning, p.gamma0) / den;
}

double power_broadened_width(const AtomicParams& p, double omega, double alpha)
{
  return p.gamma0 + alpha * std::sqrt(p.gamma0 / p.gamma) * std::abs(omega);
}

} // namespace magsim
