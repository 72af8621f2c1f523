#pragma once

#include <vector>

namespace caustica::detail {

// Composite Simpson rule over an even number of uniform intervals.
inline double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  double acc = f.front() + f.back();
  for (std::size_t i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f[i];
  return acc * h / 3.0;
}

}  // namespace caustica::detail
