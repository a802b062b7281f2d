#include "ionkick/units.hpp"

#include <cmath>
#include <stdexcept>

namespace ionkick {

std::size_t default_truncation(double alpha_max) {
  const double a = std::abs(alpha_max);
  return static_cast<std::size_t>(std::ceil(a * a + 8.0 * a + 20.0));
}

double default_grid_extent(double alpha_max) { return 2.0 * std::abs(alpha_max) + 6.0; }

std::vector<double> uniform_grid(double extent, std::size_t points) {
  if (points < 2 || !(extent > 0.0) || !std::isfinite(extent))
    throw std::invalid_argument("uniform_grid: need extent > 0 and at least 2 points");
  std::vector<double> out(points);
  const double step = 2.0 * extent / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = -extent + step * static_cast<double>(i);
  out.back() = extent;
  return out;
}

}  // namespace ionkick
