#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace caustica {

using complex = std::complex<double>;

/// n equally spaced nodes from x_min to x_max inclusive.
struct UniformGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n = 0;

  double dx() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
  std::vector<double> nodes() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x(i);
    return out;
  }
};

/// Four-point Lagrange interpolation of grid samples; zero outside the grid.
complex interpolate(const UniformGrid& grid, std::span<const complex> samples, double x);

}  // namespace caustica
