#include "caustica/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "caustica/errors.hpp"

namespace caustica {

namespace {

void check_containment(const GridState& state, const PropagationSettings& settings) {
  const double edge = edge_amplitude(state, settings.edge_fraction);
  if (edge > settings.leak_tolerance) {
    throw BoundaryLeakError("wave reaches the box edge at t = " + std::to_string(state.t) +
                            " (edge amplitude ratio " + std::to_string(edge) + "); enlarge the box");
  }
}

}  // namespace

double edge_amplitude(const GridState& state, double edge_fraction) {
  const std::size_t n = state.samples.size();
  const std::size_t zone = std::max<std::size_t>(1, static_cast<std::size_t>(edge_fraction * static_cast<double>(n)));
  double peak = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::abs(state.samples[i]);
    peak = std::max(peak, m);
    if (i < zone || i >= n - zone) edge = std::max(edge, m);
  }
  if (!(peak > 0.0)) throw InvalidInputError("wave function vanishes on the grid");
  return edge / peak;
}

GridState propagate(GridState state, const CoefficientProfile& lambda, const CoefficientProfile& mu, double t0,
                    double t1, int n_steps, const PropagationSettings& settings) {
  if (n_steps < 16) throw InvalidInputError("propagation needs at least 16 steps");
  if (state.samples.size() != state.grid.n || state.grid.n < 8) {
    throw InvalidInputError("grid state has inconsistent sample count");
  }
  state.t = t0;
  check_containment(state, settings);

  const std::size_t n = state.grid.n;
  const double h = state.grid.dx();
  const double dt = (t1 - t0) / n_steps;
  const double hbar = settings.hbar;
  const complex i_unit{0.0, 1.0};
  // Tridiagonal H = kinetic (constant off-diagonal) + diagonal potential.
  const double kinetic_diag = hbar * hbar / (h * h);
  const double kinetic_off = -0.5 * hbar * hbar / (h * h);
  const complex factor = i_unit * dt / (2 * hbar);
  const complex off = factor * kinetic_off;

  const std::vector<double> x = state.grid.nodes();
  std::vector<complex> diag(n), rhs(n), c_prime(n);
  for (int step = 0; step < n_steps; ++step) {
    const double tm = t0 + (step + 0.5) * dt;
    const double l = lambda(tm), m = mu(tm);
    for (std::size_t j = 0; j < n; ++j) {
      const double v = 0.5 * l * x[j] * x[j] + m * x[j];
      diag[j] = factor * (kinetic_diag + v);
    }
    // rhs = (1 - i dt H / 2 hbar) psi
    const auto& psi = state.samples;
    for (std::size_t j = 0; j < n; ++j) {
      complex acc = (1.0 - diag[j]) * psi[j];
      if (j > 0) acc -= off * psi[j - 1];
      if (j + 1 < n) acc -= off * psi[j + 1];
      rhs[j] = acc;
    }
    // Thomas solve of (1 + i dt H / 2 hbar) psi' = rhs.
    complex denom = 1.0 + diag[0];
    c_prime[0] = off / denom;
    rhs[0] /= denom;
    for (std::size_t j = 1; j < n; ++j) {
      denom = 1.0 + diag[j] - off * c_prime[j - 1];
      c_prime[j] = off / denom;
      rhs[j] = (rhs[j] - off * rhs[j - 1]) / denom;
    }
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= c_prime[j] * rhs[j + 1];
    state.samples.swap(rhs);
    state.t = t0 + (step + 1) * dt;

    if ((step + 1) % settings.check_every == 0 || step + 1 == n_steps) check_containment(state, settings);
  }
  for (const auto& z : state.samples) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw NumericError("linear solve produced non-finite amplitudes");
    }
  }
  state.t = t1;
  return state;
}

Moments moments(const GridState& state, double hbar) {
  const auto& psi = state.samples;
  const std::size_t n = psi.size();
  const double h = state.grid.dx();
  auto weight = [n](std::size_t j) { return (j == 0 || j + 1 == n) ? 0.5 : 1.0; };

  Moments m;
  double first = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = std::norm(psi[j]) * weight(j);
    m.norm += rho;
    first += rho * state.grid.x(j);
  }
  m.norm *= h;
  m.center = first * h / m.norm;
  double second = 0.0;
  double momentum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = state.grid.x(j) - m.center;
    second += std::norm(psi[j]) * weight(j) * d * d;
    // fourth-order central difference, second order next to the edges
    complex dpsi{0.0, 0.0};
    if (j >= 2 && j + 2 < n) {
      dpsi = (8.0 * (psi[j + 1] - psi[j - 1]) - (psi[j + 2] - psi[j - 2])) / (12 * h);
    } else if (j > 0 && j + 1 < n) {
      dpsi = (psi[j + 1] - psi[j - 1]) / (2 * h);
    }
    {
      momentum += (std::conj(psi[j]) * complex{0.0, -hbar} * dpsi).real();
    }
  }
  m.variance = second * h / m.norm;
  m.mean_momentum = momentum * h / m.norm;
  return m;
}

UniformGrid default_box(double center_min, double center_max, double sigma_max, std::size_t n) {
  if (!(sigma_max > 0.0)) throw InvalidInputError("sigma_max must be positive");
  const double lo = std::min(center_min, center_max), hi = std::max(center_min, center_max);
  return {lo - 12 * sigma_max, hi + 12 * sigma_max, n};
}

complex inner_product(const UniformGrid& grid, std::span<const complex> a, std::span<const complex> b) {
  complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::conj(a[j]) * b[j];
  return acc * grid.dx();
}

double relative_l2_distance(std::span<const complex> a, std::span<const complex> b) {
  double diff = 0.0, ref = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff += std::norm(a[j] - b[j]);
    ref += std::norm(b[j]);
  }
  return std::sqrt(diff / ref);
}

double unitarity_check(const CoefficientProfile& lambda, const CoefficientProfile& mu, double T,
                       const UnitaritySettings& settings) {
  if (settings.basis_size < 1) throw InvalidInputError("basis needs at least one function");
  const UniformGrid& grid = settings.grid;
  std::vector<std::vector<complex>> before, after;
  for (int k = 0; k < settings.basis_size; ++k) {
    const double c = settings.basis_size == 1
                         ? 0.0
                         : -settings.basis_spread + 2 * settings.basis_spread * k / (settings.basis_size - 1);
    GridState phi{grid, std::vector<complex>(grid.n), 0.0};
    const double w = settings.basis_width;
    const double norm = std::pow(2 * std::numbers::pi * w * w, -0.25);
    for (std::size_t j = 0; j < grid.n; ++j) {
      const double d = grid.x(j) - c;
      phi.samples[j] = norm * std::exp(-d * d / (4 * w * w));
    }
    before.push_back(phi.samples);
    PropagationSettings ps;
    ps.hbar = settings.hbar;
    after.push_back(propagate(std::move(phi), lambda, mu, 0.0, T, settings.steps, ps).samples);
  }
  double deviation = 0.0;
  for (std::size_t c = 0; c < before.size(); ++c) {
    for (std::size_t a = 0; a < before.size(); ++a) {
      const complex g0 = inner_product(grid, before[c], before[a]);
      const complex g1 = inner_product(grid, after[c], after[a]);
      deviation = std::max(deviation, std::abs(g1 - g0));
    }
  }
  return deviation;
}

void write_density_csv(const GridState& state, std::ostream& out) {
  out << "x,density\n";
  char buf[64];
  for (std::size_t j = 0; j < state.samples.size(); ++j) {
    auto r = std::to_chars(buf, buf + sizeof buf, state.grid.x(j), std::chars_format::scientific, 16);
    out.write(buf, r.ptr - buf);
    out << ',';
    r = std::to_chars(buf, buf + sizeof buf, std::norm(state.samples[j]), std::chars_format::scientific, 16);
    out.write(buf, r.ptr - buf);
    out << '\n';
  }
}

}  // namespace caustica
