#include "caustica/slit.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "caustica/errors.hpp"
#include "caustica/kernel.hpp"

namespace caustica {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr complex kI{0.0, 1.0};

void require_regular(const ActionQuadraticForm& form) {
  if (form.B == 0.0 || !std::isfinite(form.B)) {
    throw CriticalPotentialError("slit evolution needs a non-critical form; use apply_critical_kernel on caustics");
  }
}

double stretch_of(const ActionQuadraticForm& form, double correlation) {
  return -(2 * form.A + correlation) / form.B;
}

bool vanishing_stretch(const ActionQuadraticForm& form, double correlation) {
  const double g = stretch_of(form, correlation);
  const double scale = std::max(1.0, (std::abs(2 * form.A) + std::abs(correlation)) / std::abs(form.B));
  return std::abs(g) <= 1e-12 * scale;
}

}  // namespace

SlitSetup SlitSetup::with_momentum(double a, double sigma0, double p, double hbar) {
  SlitSetup s{a, sigma0, std::numeric_limits<double>::infinity(), p, hbar, false};
  if (p != 0.0) {
    if (a == 0.0) throw InvalidInputError("a slit at the origin cannot carry momentum without the decoupled flag");
    s.tau = a / p;
  }
  s.validate();
  return s;
}

SlitSetup SlitSetup::with_flight_time(double a, double sigma0, double tau, double hbar) {
  SlitSetup s{a, sigma0, tau, a / tau, hbar, false};
  s.validate();
  return s;
}

SlitSetup SlitSetup::decoupled_from(double a, double sigma0, double tau, double p, double hbar) {
  SlitSetup s{a, sigma0, tau, p, hbar, true};
  s.validate();
  return s;
}

double SlitSetup::correlation() const { return std::isinf(tau) ? 0.0 : 1.0 / tau; }

void SlitSetup::validate() const {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw InvalidInputError("sigma0 must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidInputError("hbar must be positive");
  if (std::isnan(tau) || tau == 0.0) throw InvalidInputError("tau must be non-zero");
  if (!std::isfinite(a) || !std::isfinite(p)) throw InvalidInputError("a and p must be finite");
  if (!decoupled && std::abs(p * tau - a) > 1e-12 * std::max(1.0, std::abs(a)) && !(std::isinf(tau) && p == 0.0)) {
    throw InvalidInputError("coupled slit requires p tau = a");
  }
}

GaussianState GaussianState::from_exponent(complex c2, complex c1, complex c0) {
  if (!(c2.real() < 0.0)) throw InvalidInputError("not a normalisable Gaussian: Re c2 >= 0");
  GaussianState g;
  g.variance = -1.0 / (4 * c2.real());
  g.center = 2 * g.variance * c1.real();
  g.norm = std::exp(c0.real() + g.center * g.center / (4 * g.variance)) * std::pow(2 * kPi * g.variance, 0.25);
  g.quad_phase = c2.imag();
  g.lin_phase = c1.imag();
  g.glob_phase = c0.imag();
  return g;
}

complex GaussianState::c2() const { return {-1.0 / (4 * variance), quad_phase}; }

complex GaussianState::c1() const { return {center / (2 * variance), lin_phase}; }

complex GaussianState::c0() const {
  return {-center * center / (4 * variance) + std::log(norm) - 0.25 * std::log(2 * kPi * variance), glob_phase};
}

complex GaussianState::operator()(double x) const { return std::exp((c2() * x + c1()) * x + c0()); }

double GaussianState::sigma() const { return std::sqrt(variance); }

double GaussianState::mean_momentum(double hbar) const { return hbar * (2 * quad_phase * center + lin_phase); }

std::vector<complex> GaussianState::sample(const UniformGrid& grid) const {
  std::vector<complex> out(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) out[i] = (*this)(grid.x(i));
  return out;
}

GaussianState initial_state(const SlitSetup& setup) {
  setup.validate();
  const double s2 = setup.sigma0 * setup.sigma0;
  const double plane = setup.decoupled ? setup.p - setup.a * setup.correlation() : 0.0;
  const complex c2{-1.0 / (4 * s2), setup.correlation() / (2 * setup.hbar)};
  const complex c1{setup.a / (2 * s2), plane / setup.hbar};
  const complex c0{-setup.a * setup.a / (4 * s2) - 0.25 * std::log(2 * kPi * s2), 0.0};
  return GaussianState::from_exponent(c2, c1, c0);
}

GaussianState evolve(const SlitSetup& setup, const ActionQuadraticForm& form, int morse_index) {
  require_regular(form);
  const GaussianState start = initial_state(setup);
  const double hbar = setup.hbar;
  const double B = form.B;

  // psi(y) = P e^{i(C y^2 + E y + F)/hbar} int dx exp(G2 x^2 + (g + i B y/hbar) x + c0)
  const complex G2 = start.c2() + kI * form.A / hbar;
  const complex g = start.c1() + kI * form.D / hbar;
  const complex h2 = B * B / (4 * hbar * hbar * G2) + kI * form.C / hbar;
  const complex h1 = -kI * B * g / (2 * hbar * G2) + kI * form.E / hbar;
  const complex log_prefactor = 0.5 * std::log(std::abs(B) / (2 * kPi * hbar)) + std::log(kPrefactorPhase) -
                                kI * (0.5 * kPi * morse_index) + 0.5 * std::log(kPi / (-G2));
  const complex h0 = start.c0() - g * g / (4.0 * G2) + kI * form.F / hbar + log_prefactor;
  return GaussianState::from_exponent(h2, h1, h0);
}

SlitPrediction predict(const SlitSetup& setup, const ActionQuadraticForm& form) {
  require_regular(form);
  setup.validate();
  SlitPrediction out;
  out.stretch = stretch_of(form, setup.correlation());
  out.center = -(2 * setup.a * form.A + setup.p + form.D) / form.B;
  out.classical_width = setup.sigma0 * std::abs(out.stretch);
  out.quantum_width = setup.hbar / (2 * setup.sigma0 * std::abs(form.B));
  out.sigma = std::hypot(out.classical_width, out.quantum_width);
  return out;
}

OptimalSlit optimal_slit(const SlitSetup& setup, const ActionQuadraticForm& form) {
  require_regular(form);
  OptimalSlit out;
  const double correlation = setup.correlation();
  if (vanishing_stretch(form, correlation)) {
    out.infinite_concentration = true;
    return out;
  }
  const double g = stretch_of(form, correlation);
  out.sigma0_star = std::sqrt(setup.hbar / (2 * std::abs(form.B * g)));
  out.sigma_min = std::sqrt(setup.hbar * std::abs(g / form.B));
  SlitSetup at_star = setup;
  at_star.sigma0 = out.sigma0_star;
  out.sigma_at_star = evolve(at_star, form).sigma();
  return out;
}

Susceptibility susceptibility(const SlitSetup& setup, const ActionQuadraticForm& form) {
  require_regular(form);
  setup.validate();
  if (setup.a == 0.0) throw InvalidInputError("susceptibility is normalised by a and needs a != 0");
  const double a = setup.a, s0 = setup.sigma0, p = setup.p, hbar = setup.hbar;

  Susceptibility out;
  out.jacobi = -1.0 / form.B;
  const double correlation = p / a;
  if (vanishing_stretch(form, correlation)) {
    out.purely_quantum = true;
  } else {
    const double g = stretch_of(form, correlation);
    const double q = hbar / (2 * s0 * s0 * form.B);
    out.value = std::abs(out.jacobi) * std::abs(g) / std::hypot(g, q);
  }

  out.step = 1e-5 * std::max(1.0, std::abs(p));
  auto width = [&](double momentum) { return evolve(SlitSetup::with_momentum(a, s0, momentum, hbar), form).sigma(); };
  out.finite_difference = (a / s0) * (width(p + out.step) - width(p - out.step)) / (2 * out.step);
  return out;
}

}  // namespace caustica
