#include "ionkick/detect.hpp"

#include <algorithm>
#include <cmath>

namespace ionkick {

std::vector<Peak> local_maxima(const DensityGrid& grid, double fraction) {
  const Eigen::MatrixXd v = grid.values.real().cwiseAbs();
  const double top = v.maxCoeff();
  std::vector<Peak> peaks;
  if (!(top > 0.0)) return peaks;
  const Eigen::Index rows = v.rows();
  const Eigen::Index cols = v.cols();
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double x = v(i, j);
      if (x < fraction * top) continue;
      bool is_max = true;
      for (Eigen::Index di = -1; di <= 1 && is_max; ++di)
        for (Eigen::Index dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const Eigen::Index a = i + di;
          const Eigen::Index b = j + dj;
          if (a < 0 || b < 0 || a >= rows || b >= cols) continue;
          if (v(a, b) > x) {
            is_max = false;
            break;
          }
        }
      if (is_max)
        peaks.push_back({grid.rows.values[static_cast<std::size_t>(i)], grid.cols.values[static_cast<std::size_t>(j)], x});
    }
  return peaks;
}

FourPeakResult four_peak_structure(const DensityGrid& grid, double centre, double radius, double fraction) {
  FourPeakResult out;
  out.centre = centre;
  const auto peaks = local_maxima(grid, fraction);
  const std::array<std::pair<double, double>, 4> targets{
      {{centre, centre}, {centre, -centre}, {-centre, centre}, {-centre, -centre}}};
  for (std::size_t k = 0; k < targets.size(); ++k)
    out.found[k] = std::any_of(peaks.begin(), peaks.end(), [&](const Peak& p) {
      return std::hypot(p.row - targets[k].first, p.col - targets[k].second) <= radius;
    });
  out.present = std::all_of(out.found.begin(), out.found.end(), [](bool b) { return b; });
  return out;
}

bool central_peak(const DensityGrid& grid, double centre, double fraction) {
  const auto peaks = local_maxima(grid, fraction);
  return std::any_of(peaks.begin(), peaks.end(), [&](const Peak& p) {
    return std::abs(p.row) < 0.5 * centre && std::abs(p.col) < 0.5 * centre;
  });
}

std::vector<Centroid> packet_centroids(const DensityGrid& grid, std::size_t count, double radius) {
  auto peaks = local_maxima(grid, 0.2);
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.value > b.value; });
  std::vector<Peak> chosen;
  for (const auto& p : peaks) {
    if (chosen.size() == count) break;
    const bool separated = std::all_of(chosen.begin(), chosen.end(), [&](const Peak& c) {
      return std::hypot(c.row - p.row, c.col - p.col) > radius;
    });
    if (separated) chosen.push_back(p);
  }
  std::vector<Centroid> out;
  for (const auto& p : chosen) {
    Centroid c;
    for (std::size_t i = 0; i < grid.rows.values.size(); ++i)
      for (std::size_t j = 0; j < grid.cols.values.size(); ++j) {
        const double x = grid.rows.values[i];
        const double y = grid.cols.values[j];
        if (std::hypot(x - p.row, y - p.col) > radius) continue;
        const double w = grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
        c.x += w * x;
        c.y += w * y;
        c.weight += w;
      }
    if (c.weight > 0.0) {
      c.x /= c.weight;
      c.y /= c.weight;
    }
    out.push_back(c);
  }
  while (!out.empty() && out.size() < count) out.push_back(out.front());
  return out;
}

}  // namespace ionkick
