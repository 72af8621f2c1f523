#pragma once

#include <vector>

#include "caustica/classical.hpp"
#include "caustica/timefun.hpp"

namespace caustica {

/// Lowest Dirichlet eigenpairs of the fluctuation operator -(d^2/dt^2 + lambda)
/// discretised by second-order central differences on N interior points.
struct SpectrumReport {
  int grid_points = 0;
  double step = 0.0;                // h = T / (N + 1)
  std::vector<double> eigenvalues;  // ascending, lowest n_max
  // eigenvectors[n][i] at t_i = (i + 1) h, normalised so that sum h u_n u_m = delta_nm
  std::vector<std::vector<double>> eigenvectors;
  double eps_zero = 0.0;
  int negative_count = 0;  // #{E < -eps_zero} over the whole discrete spectrum
  int zero_count = 0;      // #{|E| <= eps_zero}
  int index = 0;           // negative_count + zero_count
};

/// Throws InvalidInputError when N < 64, n_max outside [1, N/4], or lambda is
/// not bounded above on the grid; EigenSolverError if bisection stalls.
SpectrumReport sturm_liouville_spectrum(const CoefficientProfile& lambda, int n_max, int N);

/// Number of eigenvalues of the discretised operator strictly below x.
int count_below(const CoefficientProfile& lambda, int N, double x);

struct MorseCrosscheck {
  bool agree = false;
  bool critical = false;
  int spectral_index = 0;
  int classical_index = 0;
  int negative_count = 0;
  int zero_count = 0;
  double min_abs_eigenvalue = 0.0;
};

MorseCrosscheck morse_crosscheck(const CoefficientProfile& lambda, int N = 1024, const SolverSettings& settings = {});

}  // namespace caustica
