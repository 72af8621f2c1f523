#include "caustica/grid.hpp"

#include <algorithm>
#include <cmath>

namespace caustica {

complex interpolate(const UniformGrid& grid, std::span<const complex> samples, double x) {
  const double h = grid.dx();
  const double pos = (x - grid.x_min) / h;
  const double last = static_cast<double>(grid.n - 1);
  if (pos < 0.0 || pos > last) return {0.0, 0.0};
  // Stencil of four nodes j0..j0+3 around pos, shifted inwards at the edges.
  std::ptrdiff_t j0 = static_cast<std::ptrdiff_t>(std::floor(pos)) - 1;
  j0 = std::clamp<std::ptrdiff_t>(j0, 0, static_cast<std::ptrdiff_t>(grid.n) - 4);
  const double s = pos - static_cast<double>(j0);
  complex acc{0.0, 0.0};
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m != j) w *= (s - m) / static_cast<double>(j - m);
    }
    acc += w * samples[static_cast<std::size_t>(j0 + j)];
  }
  return acc;
}

}  // namespace caustica
