// analytic.hpp: closed-form backend in the strong-excitation limit.
//
// A laser event is an instantaneous kick: an internal rotation with
// coefficients (A, B) and a momentum displacement +-i eta on the pulse axis.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ionkick/state.hpp"

namespace ionkick::analytic {

struct KickCoefficients {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};
};

// Mixing angles at the start and end of an adiabatic ramp and the dynamical
// phase epsilon accumulated on the upper dressed state.
struct AdiabaticSpec {
  double theta_start = 0.0;
  double theta_end = 0.0;
  double epsilon = 0.0;
};

// <alpha|beta> = exp(-(|alpha|^2 + |beta|^2)/2 + conj(alpha) beta).
cplx coherent_overlap(cplx alpha, cplx beta);

// Square pulse of area Omega*tau: A = cos(area/2), B = -i sin(area/2).
KickCoefficients pulse_coeffs(double area);
KickCoefficients adiabatic_coeffs(const AdiabaticSpec& spec);

// theta in [0, pi/2] with cot(2 theta) = -delta / Omega.
double mixing_angle(double delta, double omega);

// epsilon = integral of sqrt(delta(t)^2 + Omega^2) / 2 over the ramp.
double dynamical_phase_linear(double omega, double delta_start, double delta_end, double duration);
// Adaptive Simpson for arbitrary detuning profiles, t in [0, duration].
double dynamical_phase(const std::function<double(double)>& delta, double omega, double duration,
                       double tol = 1e-10);

// Linear ramp. With ideal_endpoints the angles are 0, pi/4, pi/2 according to
// the sign of each endpoint detuning (the |delta| >> Omega limit).
AdiabaticSpec linear_ramp_spec(double omega, double delta_start, double delta_end, double duration,
                               bool ideal_endpoints = false);

// |g,a> -> A|g,a> + B D(s i eta)|e,a>,  |e,a> -> A*|e,a> - B* D(-s i eta)|g,a>.
// The displacement carries its exact phase D(b)|a> = e^{i Im(b conj(a))}|a+b>.
SuperpositionState apply_kick(const SuperpositionState& s, const KickCoefficients& k, Direction d,
                              double eta);

// alpha -> alpha e^{-i t} on every mode, or on one axis only.
SuperpositionState free_evolve(const SuperpositionState& s, double t);
SuperpositionState free_evolve(const SuperpositionState& s, double t, Axis axis);

// Resonant carrier pi rotation: |g> -> -i|e>, |e> -> -i|g>, motion untouched.
SuperpositionState carrier_flip(const SuperpositionState& s);

// Rotation |e> -> cos(angle)|e> - i sin(angle)|g> (and |g> -> cos|g> - i sin|e>)
// applied only to components selected by pick. Used for the localized field
// acting on one spatially separated packet.
SuperpositionState rotate_components(const SuperpositionState& s, double angle,
                                     const std::function<bool(const CoherentComponent&)>& pick);
// Selects the components on the given level.
SuperpositionState rotate_component(const SuperpositionState& s, Level selector, double angle);

struct Measurement {
  double probability = 0.0;
  SuperpositionState projected;
};

// Probability of the outcome (state normalized internally) and the
// renormalized branch. Throws ZeroNormError below 1e-14.
Measurement measure_internal(const SuperpositionState& s, Level outcome);
double probability(const SuperpositionState& s, Level outcome);
SuperpositionState project(const SuperpositionState& s, Level outcome);

// Coherent-state wavefunctions in scaled units.
cplx position_wavefunction(cplx alpha, double x);
cplx momentum_wavefunction(cplx alpha, double p);

// rho(p, p') with internal levels traced out. The weights allow classical
// mixtures: rho = sum_w w * |psi_w><psi_w| over normalized states.
DensityGrid momentum_density(const SuperpositionState& s, const std::vector<double>& grid);
DensityGrid momentum_density(const std::vector<std::pair<double, SuperpositionState>>& ensemble,
                             const std::vector<double>& grid);
DensityGrid position_density_2d(const SuperpositionState& s, const std::vector<double>& grid_x,
                                const std::vector<double>& grid_y);

}  // namespace ionkick::analytic
