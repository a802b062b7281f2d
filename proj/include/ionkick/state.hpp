// state.hpp: state types shared by the analytic and numeric backends.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ionkick/units.hpp"

namespace ionkick {

enum class Level { g = 0, e = 1 };
enum class Axis { x = 0, y = 1 };

inline Level other(Level l) { return l == Level::g ? Level::e : Level::g; }
const char* to_string(Level l);
const char* to_string(Axis a);

// Laser propagation direction: sign +1 toward positive axis values.
struct Direction {
  int sign = +1;
  Axis axis = Axis::x;

  static Direction plus(Axis a = Axis::x) { return {+1, a}; }
  static Direction minus(Axis a = Axis::x) { return {-1, a}; }
  Direction reversed() const { return {-sign, axis}; }
  bool operator==(const Direction&) const = default;
};

std::string to_string(Direction d);

struct CoherentComponent {
  Level level = Level::g;
  cplx coeff{1.0, 0.0};
  std::array<cplx, 2> alpha{};  // second entry unused for 1-mode states
};

// Finite sum of coherent components. Components are not orthogonal; all norms
// go through coherent overlaps.
struct SuperpositionState {
  int modes = 1;
  std::vector<CoherentComponent> components;

  static SuperpositionState coherent(Level level, cplx alpha, cplx coeff = 1.0);
  static SuperpositionState coherent2d(Level level, cplx alpha_x, cplx alpha_y, cplx coeff = 1.0);
};

// Amplitudes over {g,e} x Fock (x Fock). Index = level * M + nx * Ny + ny,
// M = Nx * Ny, with Ny = 1 for one mode.
struct FockState {
  int modes = 1;
  std::array<std::size_t, 2> dims{1, 1};
  Eigen::VectorXcd amplitudes;

  static FockState zero(int modes, std::array<std::size_t, 2> dims);
  std::size_t motional_size() const { return dims[0] * dims[1]; }
  std::size_t index(Level level, std::size_t nx, std::size_t ny = 0) const {
    return static_cast<std::size_t>(level) * motional_size() + nx * dims[1] + ny;
  }
  cplx amplitude(Level level, std::size_t nx, std::size_t ny = 0) const {
    return amplitudes(static_cast<Eigen::Index>(index(level, nx, ny)));
  }
  // Largest population found in the top 5% of Fock levels of any mode.
  double leak() const;
  bool under_truncated(double threshold = 1e-6) const { return leak() > threshold; }
};

cplx inner_product(const SuperpositionState& a, const SuperpositionState& b);
cplx inner_product(const FockState& a, const FockState& b);
double norm_squared(const SuperpositionState& s);
double norm_squared(const FockState& s);

SuperpositionState normalize(const SuperpositionState& s);
FockState normalize(const FockState& s);

// |<a|b>|^2 / (<a|a><b|b>).
double fidelity(const SuperpositionState& a, const SuperpositionState& b);
double fidelity(const FockState& a, const FockState& b);

// Amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n < N at the component's level,
// scaled by the component coefficient.
FockState fock_expand(const CoherentComponent& c, std::size_t n);
FockState fock_expand(const CoherentComponent& c, std::array<std::size_t, 2> dims, int modes);
FockState fock_expand(const SuperpositionState& s, std::array<std::size_t, 2> dims);

// Merges components with equal level and |d alpha| < tol and drops components
// whose coefficient is below 1e-15 of the largest one.
SuperpositionState simplify(const SuperpositionState& s, double tol = 1e-12);

// Equality of states up to coefficient tolerance. Coherent states with distinct
// amplitudes are linearly independent, so the simplified component list is a
// canonical form. With up_to_phase a global phase is removed first.
bool approx_equal(const SuperpositionState& a, const SuperpositionState& b, double tol,
                  bool up_to_phase = false);

// Largest |alpha| over all components and modes.
double max_amplitude(const SuperpositionState& s);

// Mean phonon number summed over modes (state need not be normalized).
double mean_phonon_number(const SuperpositionState& s);
double mean_phonon_number(const FockState& s);

enum class GridKind { density_operator, probability };

struct GridAxis {
  std::string name;  // "p", "p_prime", "x", "y"
  std::string unit;  // "p0" or "x0"
  std::vector<double> values;
};

// rho(p, p') or P(x, y) sampled on a uniform grid. values(i, j) belongs to
// rows.values[i], cols.values[j].
struct DensityGrid {
  GridKind kind = GridKind::density_operator;
  GridAxis rows;
  GridAxis cols;
  Eigen::MatrixXcd values;
  std::map<std::string, std::string> metadata;
};

// Throws ShapeError on non-increasing axes, size mismatch, or a
// non-Hermitian density-operator grid (tolerance 1e-10 relative to max |rho|).
void validate(const DensityGrid& grid);
double hermiticity_error(const DensityGrid& grid);
// Quadrature trace of a density-operator grid, or total probability of a
// probability grid.
double grid_trace(const DensityGrid& grid);

}  // namespace ionkick
