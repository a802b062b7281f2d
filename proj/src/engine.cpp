#include "ionkick/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ionkick/analytic.hpp"
#include "ionkick/errors.hpp"

namespace ionkick {

const char* to_string(Backend b) { return b == Backend::analytic ? "analytic" : "numeric"; }

Backend parse_backend(const std::string& name) {
  if (name == "analytic") return Backend::analytic;
  if (name == "numeric") return Backend::numeric;
  throw std::invalid_argument("unknown backend '" + name + "'");
}

double Engine::motion_indicator() const {
  const double eta2 = settings_.eta * settings_.eta;
  return exposure_.laser_time * std::max(exposure_.max_mean_phonons, eta2);
}

void Engine::record_laser(double duration, double adiabaticity) {
  exposure_.laser_time += duration;
  exposure_.max_mean_phonons = std::max(exposure_.max_mean_phonons, mean_phonons());
  exposure_.max_adiabaticity = std::max(exposure_.max_adiabaticity, adiabaticity);
}

AnalyticEngine::AnalyticEngine(SuperpositionState initial, EngineSettings settings)
    : Engine(settings), state_(std::move(initial)) {}

void AnalyticEngine::pulse(Direction d, double area) {
  state_ = analytic::apply_kick(state_, analytic::pulse_coeffs(area), d, settings().eta);
  record_laser(pulse_duration(area), 0.0);
}

void AnalyticEngine::ramp(Direction d, double delta_start, double delta_end, double duration) {
  const double omega = settings().omega;
  const auto spec = analytic::linear_ramp_spec(omega, delta_start, delta_end, duration,
                                               settings().ideal_adiabatic_endpoints);
  state_ = analytic::apply_kick(state_, analytic::adiabatic_coeffs(spec), d, settings().eta);
  record_laser(duration, numeric::RampSpec{delta_start, delta_end, duration, 0}.adiabaticity(omega));
}

void AnalyticEngine::wait(double t) { state_ = analytic::free_evolve(state_, t); }

void AnalyticEngine::carrier_flip() { state_ = analytic::carrier_flip(state_); }

void AnalyticEngine::rotate_half_space(double angle, numeric::HalfSpace side,
                                       const numeric::HalfSpaceOptions& options) {
  // Packets are localized, so the field acts on whole components by centre.
  state_ = analytic::rotate_components(state_, angle, [&](const CoherentComponent& c) {
    const double x = position_of(c.alpha[0]);
    return side == numeric::HalfSpace::right ? x > options.boundary : x < options.boundary;
  });
}

double AnalyticEngine::probability(Level outcome) const { return analytic::probability(state_, outcome); }

double AnalyticEngine::measure(Level outcome) {
  auto m = analytic::measure_internal(state_, outcome);
  state_ = std::move(m.projected);
  return m.probability;
}

DensityGrid AnalyticEngine::momentum_grid(const std::vector<double>& grid) const {
  return analytic::momentum_density(state_, grid);
}

DensityGrid AnalyticEngine::position_grid(const std::vector<double>& gx, const std::vector<double>& gy) const {
  return analytic::position_density_2d(state_, gx, gy);
}

double AnalyticEngine::mean_phonons() const { return mean_phonon_number(state_); }

NumericEngine::NumericEngine(const SuperpositionState& initial, std::array<std::size_t, 2> dims,
                             EngineSettings settings)
    : Engine(settings), state_(fock_expand(initial, dims)) {
  if (!(settings.omega > 0.0)) throw std::invalid_argument("numeric backend needs Omega/nu > 0");
  ops_x_ = std::make_shared<numeric::OperatorSet>(state_.dims[0]);
  if (state_.modes == 2)
    ops_y_ = state_.dims[1] == state_.dims[0] ? ops_x_ : std::make_shared<numeric::OperatorSet>(state_.dims[1]);
}

const numeric::OperatorSet& NumericEngine::ops(Axis axis) const {
  if (axis == Axis::y) {
    if (!ops_y_) throw ShapeError("y-axis operation on a 1-mode state");
    return *ops_y_;
  }
  return *ops_x_;
}

void NumericEngine::pulse(Direction d, double area) {
  const double duration = pulse_duration(area);
  char key[96];
  std::snprintf(key, sizeof key, "%s:%.17g", to_string(d).c_str(), area);
  auto it = pulse_cache_.find(key);
  if (it == pulse_cache_.end()) {
    const numeric::HamiltonianParams p{settings().omega, 0.0, settings().eta, d};
    it = pulse_cache_.emplace(key, numeric::propagator(numeric::build_hamiltonian(p, ops(d.axis)), duration)).first;
  }
  state_ = numeric::apply_axis_operator(it->second, d.axis, state_);
  if (state_.modes == 2) state_ = numeric::free_evolve(state_, duration, d.axis == Axis::x ? Axis::y : Axis::x);
  if (!state_.amplitudes.allFinite()) throw IntegratorError("pulse produced non-finite amplitudes");
  record_laser(duration, 0.0);
}

void NumericEngine::ramp(Direction d, double delta_start, double delta_end, double duration) {
  const numeric::HamiltonianParams p{settings().omega, 0.0, settings().eta, d};
  const numeric::RampSpec spec{delta_start, delta_end, duration, settings().numeric.ramp_steps};
  numeric::RampOptions options;
  options.verify = settings().numeric.verify_ramps;
  state_ = numeric::evolve_ramp(p, spec, ops(d.axis), state_, options);
  record_laser(duration, spec.adiabaticity(settings().omega));
}

void NumericEngine::wait(double t) { state_ = numeric::free_evolve(state_, t); }

void NumericEngine::carrier_flip() { state_ = numeric::carrier_flip(state_); }

void NumericEngine::rotate_half_space(double angle, numeric::HalfSpace side,
                                      const numeric::HalfSpaceOptions& options) {
  state_ = numeric::apply_axis_operator(numeric::half_space_rotation(angle, side, ops(Axis::x), options),
                                        Axis::x, state_);
}

double NumericEngine::probability(Level outcome) const { return numeric::probability(state_, outcome); }

double NumericEngine::measure(Level outcome) {
  auto m = numeric::measure_internal(state_, outcome);
  state_ = std::move(m.projected);
  return m.probability;
}

DensityGrid NumericEngine::momentum_grid(const std::vector<double>& grid) const {
  return numeric::fock_to_momentum_grid(state_, grid);
}

DensityGrid NumericEngine::position_grid(const std::vector<double>& gx, const std::vector<double>& gy) const {
  return numeric::position_density_2d_numeric(state_, gx, gy);
}

double NumericEngine::mean_phonons() const { return mean_phonon_number(state_); }

std::unique_ptr<Engine> make_engine(Backend backend, const SuperpositionState& initial,
                                    const EngineSettings& settings, double alpha_max) {
  if (backend == Backend::analytic) return std::make_unique<AnalyticEngine>(initial, settings);
  std::size_t n = settings.numeric.truncation ? settings.numeric.truncation : default_truncation(alpha_max);
  return std::make_unique<NumericEngine>(initial, std::array<std::size_t, 2>{n, n}, settings);
}

}  // namespace ionkick
