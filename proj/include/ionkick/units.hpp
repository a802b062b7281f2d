// units.hpp: scaled units shared by both backends.
//
// hbar = 1, frequencies in units of the trap frequency nu, times in 1/nu.
// Positions are x/x0 with x0 = (2 m nu)^(-1/2), momenta p/p0 with
// p0 = (m nu / 2)^(1/2). A coherent state |alpha> then has <x/x0> = 2 Re alpha
// and <p/p0> = 2 Im alpha, and exp(i k x) is the displacement D(i eta).
#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace ionkick {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

inline double position_of(cplx alpha) { return 2.0 * alpha.real(); }
inline double momentum_of(cplx alpha) { return 2.0 * alpha.imag(); }

// Fock cutoff keeping the Poisson tail of |alpha_max> well below 1e-8.
std::size_t default_truncation(double alpha_max);

inline constexpr std::size_t default_grid_points = 201;
double default_grid_extent(double alpha_max);

// points samples spanning [-extent, extent].
std::vector<double> uniform_grid(double extent, std::size_t points);

}  // namespace ionkick
