#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "caustica/classical.hpp"
#include "caustica/grid.hpp"
#include "caustica/timefun.hpp"

namespace caustica {

// Phase of the (1/i)^(1/2) in the Gaussian-integral prefactor, principal branch.
inline const complex kPrefactorPhase = std::polar(1.0, -0.25 * std::numbers::pi);

/// Transition amplitude away from caustics,
/// K(b;a) = (|B| / 2 pi hbar)^(1/2) e^{-i pi/4} e^{i I(b,a)/hbar - i pi m/2}.
struct RegularKernel {
  ActionQuadraticForm form;
  int morse_index = 0;
  double hbar = 1.0;

  complex operator()(double a, double b) const;
};

/// Transition amplitude on a caustic,
/// K(b;a) = sqrt|k| delta(b - k a - s_T) e^{i I(a)/hbar - i pi m/2}.
/// The delta function is kept symbolic; only its pushforward touches samples.
struct CriticalKernel {
  double k = 1.0;
  double s_T = 0.0;
  int morse_index = 0;
  double hbar = 1.0;
  // I(a) = action_a2 a^2 + action_a1 a + action_a0, fitted exactly from three
  // trajectory quadratures (the action is quadratic in a).
  double action_a2 = 0.0, action_a1 = 0.0, action_a0 = 0.0;

  double amplitude() const;
  double focal_point(double a) const { return k * a + s_T; }
  double action_at(double a) const { return (action_a2 * a + action_a1) * a + action_a0; }
  /// Exponent I(a)/hbar - pi m / 2 of the unit-modulus factor.
  double phase(double a) const;
};

using Kernel = std::variant<RegularKernel, CriticalKernel>;

complex regular_kernel(const ActionQuadraticForm& form, int morse_index, double hbar, double a, double b);

/// Throws NotCriticalError unless report.critical.
CriticalKernel critical_kernel(const CausticReport& report, const FundamentalPair& pair, int morse_index,
                               double hbar);

/// Regular or critical kernel, whichever the pair calls for.
Kernel make_kernel(const FundamentalPair& pair, double hbar, const SolverSettings& settings = {});

/// (K psi)(b) = |k|^(-1/2) e^{i I(a*)/hbar - i pi m/2} psi(a*), a* = (b - s_T)/k,
/// evaluated at the nodes of `out`. psi is interpolated between input nodes
/// and taken as zero outside the input grid.
std::vector<complex> apply_critical_kernel(const CriticalKernel& kernel, const UniformGrid& in,
                                           std::span<const complex> psi, const UniformGrid& out);

struct ForcedHoReference {
  double s_T = 0.0;
  double action = 0.0;
  bool near_caustic = true;
  std::string warning;  // set when omega T / pi is not close to an integer
};

/// Forced harmonic oscillator (lambda = omega^2, mu = -f) by direct quadrature:
/// s(T) = (1/omega) int_0^T sin omega(T-t') f(t') dt' and the caustic-family
/// action a int cos(omega t) f dt - (1/omega) int int_{t'<t} cos(omega t) sin(omega t') f f.
ForcedHoReference forced_ho_reference(double omega, const CoefficientProfile& f, double T, double a,
                                      int quadrature_steps = 4096);

}  // namespace caustica
