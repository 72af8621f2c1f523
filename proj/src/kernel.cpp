#include "caustica/kernel.hpp"

#include <cmath>
#include <numbers>

#include "caustica/errors.hpp"
#include "detail/quadrature.hpp"

namespace caustica {

namespace {

constexpr double kPi = std::numbers::pi;

using detail::simpson;

}  // namespace

complex RegularKernel::operator()(double a, double b) const {
  return regular_kernel(form, morse_index, hbar, a, b);
}

complex regular_kernel(const ActionQuadraticForm& form, int morse_index, double hbar, double a, double b) {
  if (!(hbar > 0.0)) throw InvalidInputError("hbar must be positive");
  if (form.B == 0.0 || !std::isfinite(form.B)) {
    throw CriticalPotentialError("regular kernel needs a finite, non-zero mixed derivative B");
  }
  const double modulus = std::sqrt(std::abs(form.B) / (2 * kPi * hbar));
  const double phase = form(a, b) / hbar - 0.5 * kPi * morse_index;
  return modulus * kPrefactorPhase * std::polar(1.0, phase);
}

double CriticalKernel::amplitude() const { return std::sqrt(std::abs(k)); }

double CriticalKernel::phase(double a) const { return action_at(a) / hbar - 0.5 * kPi * morse_index; }

CriticalKernel critical_kernel(const CausticReport& report, const FundamentalPair& pair, int morse_index,
                               double hbar) {
  if (!report.critical || !report.k || !report.focal_intercept) {
    throw NotCriticalError("critical kernel requested for a non-critical potential");
  }
  if (!(hbar > 0.0)) throw InvalidInputError("hbar must be positive");
  CriticalKernel kernel;
  kernel.k = *report.k;
  kernel.s_T = *report.focal_intercept;
  kernel.morse_index = morse_index;
  kernel.hbar = hbar;
  if (kernel.k == 0.0) throw InvalidInputError("stretching factor vanishes");

  // The action at a caustic does not depend on the initial momentum; p = 0.
  const double im = solve_trajectory(pair, -1.0, 0.0).action;
  const double i0 = solve_trajectory(pair, 0.0, 0.0).action;
  const double ip = solve_trajectory(pair, 1.0, 0.0).action;
  kernel.action_a0 = i0;
  kernel.action_a1 = 0.5 * (ip - im);
  kernel.action_a2 = 0.5 * (ip + im) - i0;
  return kernel;
}

Kernel make_kernel(const FundamentalPair& pair, double hbar, const SolverSettings& settings) {
  const CausticReport report = caustic_report(pair, settings.eps_caustic, settings.tol_zero);
  if (report.critical) return critical_kernel(report, pair, report.morse_index, hbar);
  return RegularKernel{action_coefficients(pair, settings.eps_caustic), report.morse_index, hbar};
}

std::vector<complex> apply_critical_kernel(const CriticalKernel& kernel, const UniformGrid& in,
                                           std::span<const complex> psi, const UniformGrid& out) {
  if (psi.size() != in.n) throw InvalidInputError("sample count does not match the input grid");
  if (kernel.k == 0.0) throw InvalidInputError("stretching factor vanishes");
  const double scale = 1.0 / std::sqrt(std::abs(kernel.k));
  std::vector<complex> result(out.n);
  for (std::size_t i = 0; i < out.n; ++i) {
    const double a = (out.x(i) - kernel.s_T) / kernel.k;
    result[i] = scale * std::polar(1.0, kernel.phase(a)) * interpolate(in, psi, a);
  }
  return result;
}

ForcedHoReference forced_ho_reference(double omega, const CoefficientProfile& f, double T, double a,
                                      int quadrature_steps) {
  if (!(omega > 0.0)) throw InvalidInputError("omega must be positive");
  if (!(T > 0.0) || T > f.horizon() * (1 + 1e-12)) throw InvalidInputError("T must lie in (0, horizon of f]");
  const int n = std::max(16, quadrature_steps + quadrature_steps % 2);
  const double h = T / n;

  std::vector<double> green(n + 1), drive(n + 1), coupled(n + 1);
  double cumulative = 0.0;  // int_0^t sin(omega t') f(t') dt', Simpson per step
  for (int i = 0; i <= n; ++i) {
    const double t = i == n ? T : i * h;
    const double ft = f(t);
    if (i > 0) {
      const double t0 = (i - 1) * h, tm = t0 + 0.5 * h;
      cumulative += h / 6.0 *
                    (std::sin(omega * t0) * f(t0) + 4 * std::sin(omega * tm) * f(tm) + std::sin(omega * t) * ft);
    }
    green[static_cast<std::size_t>(i)] = std::sin(omega * (T - t)) * ft;
    drive[static_cast<std::size_t>(i)] = std::cos(omega * t) * ft;
    coupled[static_cast<std::size_t>(i)] = std::cos(omega * t) * ft * cumulative;
  }

  ForcedHoReference ref;
  ref.s_T = simpson(green, h) / omega;
  ref.action = a * simpson(drive, h) - simpson(coupled, h) / omega;
  const double turns = omega * T / kPi;
  const double nearest = std::round(turns);
  ref.near_caustic = nearest >= 1.0 && std::abs(turns - nearest) <= 1e-6 * std::max(1.0, nearest);
  if (!ref.near_caustic) {
    ref.warning = "omega T / pi = " + std::to_string(turns) +
                  " is not an integer; the action formula holds only on caustics";
  }
  return ref;
}

}  // namespace caustica
