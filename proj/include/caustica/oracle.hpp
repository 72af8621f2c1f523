#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "caustica/grid.hpp"
#include "caustica/timefun.hpp"

namespace caustica {

/// Wave function samples on a uniform box; psi is taken to vanish beyond it.
struct GridState {
  UniformGrid grid;
  std::vector<complex> samples;
  double t = 0.0;
};

struct PropagationSettings {
  double hbar = 1.0;
  double leak_tolerance = 1e-6;  // allowed max|psi| in the edge zones, relative to max|psi|
  double edge_fraction = 0.05;   // width of each edge zone, as a fraction of the nodes
  int check_every = 64;          // containment check cadence, in steps
};

/// Crank-Nicolson propagation of i hbar psi_t = -(hbar^2/2) psi_xx + (lambda x^2/2 + mu x) psi
/// from t0 to t1, with the potential evaluated at each step midpoint. The
/// scheme is unitary in the discrete l2 norm. Throws BoundaryLeakError when
/// the wave reaches the edge zones.
GridState propagate(GridState state, const CoefficientProfile& lambda, const CoefficientProfile& mu, double t0,
                    double t1, int n_steps, const PropagationSettings& settings = {});

struct Moments {
  double norm = 0.0;  // int |psi|^2
  double center = 0.0;
  double variance = 0.0;
  double mean_momentum = 0.0;
};

Moments moments(const GridState& state, double hbar = 1.0);

/// max|psi| in the edge zones divided by max|psi|.
double edge_amplitude(const GridState& state, double edge_fraction = 0.05);

/// Box [c_min - 12 sigma_max, c_max + 12 sigma_max] with n nodes.
UniformGrid default_box(double center_min, double center_max, double sigma_max, std::size_t n = 2048);

struct UnitaritySettings {
  UniformGrid grid{-20.0, 20.0, 2048};
  int steps = 1024;
  double hbar = 1.0;
  int basis_size = 5;
  double basis_width = 0.5;  // sigma of each basis Gaussian
  double basis_spread = 2.0;  // basis centres are spread over [-spread, spread]
};

/// Propagates a basis of narrow Gaussians over [0, T] and returns
/// max |<U phi_c | U phi_a> - <phi_c | phi_a>|.
double unitarity_check(const CoefficientProfile& lambda, const CoefficientProfile& mu, double T,
                       const UnitaritySettings& settings = {});

/// Discrete inner product sum conj(a) b dx.
complex inner_product(const UniformGrid& grid, std::span<const complex> a, std::span<const complex> b);

/// ||a - b|| / ||b|| in the discrete l2 norm.
double relative_l2_distance(std::span<const complex> a, std::span<const complex> b);

/// CSV rows "x,density" of |psi|^2, for plotting.
void write_density_csv(const GridState& state, std::ostream& out);

}  // namespace caustica
