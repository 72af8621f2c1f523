#pragma once

#include "caustica/classical.hpp"
#include "caustica/grid.hpp"

namespace caustica {

/// A point source at x = 0, released at t = -tau, passes a Gaussian slit of
/// width sigma0 centred at a at t = 0. The post-slit state then carries the
/// mean momentum p = a / tau.
///
/// A decoupled setup keeps tau (the position-momentum correlation of the
/// state) but shifts the mean momentum to an independent p by an extra plane
/// wave factor exp(i (p - a/tau) x / hbar).
struct SlitSetup {
  double a = 0.0;
  double sigma0 = 1.0;
  double tau = 1.0;  // may be +inf (no correlation)
  double p = 0.0;
  double hbar = 1.0;
  bool decoupled = false;

  /// p given, tau = a / p; p = 0 means tau = +inf.
  static SlitSetup with_momentum(double a, double sigma0, double p, double hbar = 1.0);
  /// tau given, p = a / tau.
  static SlitSetup with_flight_time(double a, double sigma0, double tau, double hbar = 1.0);
  static SlitSetup decoupled_from(double a, double sigma0, double tau, double p, double hbar = 1.0);

  /// 1 / tau; zero for an uncorrelated state.
  double correlation() const;
  void validate() const;
};

/// psi(x) = norm (2 pi variance)^(-1/4) exp(-(x - center)^2 / (4 variance)
///          + i (quad_phase x^2 + lin_phase x + glob_phase)).
struct GaussianState {
  double center = 0.0;
  double variance = 1.0;
  double quad_phase = 0.0;
  double lin_phase = 0.0;
  double glob_phase = 0.0;
  double norm = 1.0;

  /// From psi(x) = exp(c2 x^2 + c1 x + c0), Re c2 < 0.
  static GaussianState from_exponent(complex c2, complex c1, complex c0);
  complex c2() const;
  complex c1() const;
  complex c0() const;

  complex operator()(double x) const;
  double sigma() const;
  double mean_momentum(double hbar) const;
  std::vector<complex> sample(const UniformGrid& grid) const;
};

GaussianState initial_state(const SlitSetup& setup);

/// The state at t = T under the regular kernel built from `form`, by exact
/// Gaussian integration. `morse_index` only affects the global phase.
/// Throws CriticalPotentialError for a form without finite non-zero B.
GaussianState evolve(const SlitSetup& setup, const ActionQuadraticForm& form, int morse_index = 0);

/// Closed-form centre and width at t = T, split into their two contributions:
/// sigma(T)^2 = sigma0^2 stretch^2 + (hbar / (2 sigma0 B))^2 with
/// stretch = -(2A + 1/tau) / B, which is x_cl(T)/a for the coupled slit.
struct SlitPrediction {
  double center = 0.0;
  double sigma = 0.0;
  double stretch = 0.0;
  double classical_width = 0.0;  // sigma0 |stretch|
  double quantum_width = 0.0;    // hbar / (2 sigma0 |B|)
};

SlitPrediction predict(const SlitSetup& setup, const ActionQuadraticForm& form);

struct OptimalSlit {
  bool infinite_concentration = false;  // x_cl(T) = 0: the width can be made arbitrarily small
  double sigma0_star = 0.0;
  double sigma_min = 0.0;
  double sigma_at_star = 0.0;  // evolve(sigma0_star) width, for verification
};

/// Minimises sigma(T) over the slit width; setup.sigma0 is ignored.
OptimalSlit optimal_slit(const SlitSetup& setup, const ActionQuadraticForm& form);

struct Susceptibility {
  double value = 0.0;              // closed form, |J| |stretch| / sqrt(stretch^2 + (hbar/(2 sigma0^2 B))^2)
  double finite_difference = 0.0;  // (a/sigma0) d sigma/dp by central differences of evolve
  double jacobi = 0.0;             // J(p,T) = -1/B
  double step = 0.0;               // finite-difference step in p
  bool purely_quantum = false;     // x_cl(T) = 0: S vanishes
};

/// Sensitivity (a/sigma0) d sigma(T)/dp along the coupled family p = a/tau
/// at fixed slit (a, sigma0); needs a != 0.
Susceptibility susceptibility(const SlitSetup& setup, const ActionQuadraticForm& form);

}  // namespace caustica
