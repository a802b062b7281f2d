// detect.hpp: peak and packet detectors used by reports and regression tests.
#pragma once

#include <array>
#include <vector>

#include "ionkick/state.hpp"

namespace ionkick {

struct Peak {
  double row = 0.0;
  double col = 0.0;
  double value = 0.0;
};

// Local maxima (8-neighbour) of |Re values| at or above fraction of the global maximum.
std::vector<Peak> local_maxima(const DensityGrid& grid, double fraction = 0.2);

struct FourPeakResult {
  bool present = false;
  std::array<bool, 4> found{};  // (+c,+c), (+c,-c), (-c,+c), (-c,-c)
  double centre = 0.0;
};

// Checks for a qualifying maximum within radius of each of (+-c, +-c).
FourPeakResult four_peak_structure(const DensityGrid& grid, double centre, double radius = 1.0,
                                   double fraction = 0.2);

// A qualifying maximum with |row|, |col| < centre / 2.
bool central_peak(const DensityGrid& grid, double centre, double fraction = 0.2);

struct Centroid {
  double x = 0.0;
  double y = 0.0;
  double weight = 0.0;
};

// Centroids of up to count packets in a probability grid: the strongest
// separated maxima, each averaged over a disc of the given radius. When fewer
// packets are resolved the strongest one is repeated.
std::vector<Centroid> packet_centroids(const DensityGrid& grid, std::size_t count = 2, double radius = 3.0);

}  // namespace ionkick
