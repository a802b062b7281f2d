// engine.hpp: one interface over both backends so each protocol is written once.
#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ionkick/numeric.hpp"
#include "ionkick/state.hpp"

namespace ionkick {

enum class Backend { analytic, numeric };
const char* to_string(Backend b);
Backend parse_backend(const std::string& name);

using AnyState = std::variant<SuperpositionState, FockState>;

struct NumericSettings {
  std::size_t truncation = 0;  // per mode; 0 uses default_truncation
  std::size_t ramp_steps = 0;  // 0 uses numeric::default_ramp_steps
  bool verify_ramps = false;
  double leak_threshold = 1e-6;
};

struct EngineSettings {
  double omega = 100.0;  // Omega/nu; the analytic backend uses it only for validity indicators
  double eta = 0.5;
  bool ideal_adiabatic_endpoints = false;  // analytic ramps only
  NumericSettings numeric;
};

// Laser exposure accumulated over a run, for the validity indicators.
struct Exposure {
  double laser_time = 0.0;       // total pulse and ramp time, 1/nu
  double max_mean_phonons = 0.0; // largest <n> seen after a laser event
  double max_adiabaticity = 0.0; // largest |d0 - d1| / (Omega^2 tau) over ramps
};

class Engine {
 public:
  virtual ~Engine() = default;

  virtual Backend backend() const = 0;
  virtual void pulse(Direction d, double area) = 0;
  virtual void ramp(Direction d, double delta_start, double delta_end, double duration) = 0;
  virtual void wait(double t) = 0;
  virtual void carrier_flip() = 0;
  // exp(-i angle sx) on the part of the state with x/x0 on the chosen side.
  virtual void rotate_half_space(double angle, numeric::HalfSpace side,
                                 const numeric::HalfSpaceOptions& options) = 0;
  virtual double probability(Level outcome) const = 0;
  // Projects onto the outcome, renormalizes and returns its probability.
  virtual double measure(Level outcome) = 0;
  virtual DensityGrid momentum_grid(const std::vector<double>& grid) const = 0;
  virtual DensityGrid position_grid(const std::vector<double>& gx, const std::vector<double>& gy) const = 0;
  virtual AnyState snapshot() const = 0;
  virtual double mean_phonons() const = 0;
  virtual double leak() const = 0;

  double pulse_duration(double area) const { return area / settings_.omega; }
  const EngineSettings& settings() const { return settings_; }
  const Exposure& exposure() const { return exposure_; }
  // nu tau max(<n>, eta^2) with tau the total laser time.
  double motion_indicator() const;

 protected:
  explicit Engine(EngineSettings settings) : settings_(settings) {}
  void record_laser(double duration, double adiabaticity);

 private:
  EngineSettings settings_;
  Exposure exposure_;
};

class AnalyticEngine : public Engine {
 public:
  AnalyticEngine(SuperpositionState initial, EngineSettings settings);

  Backend backend() const override { return Backend::analytic; }
  void pulse(Direction d, double area) override;
  void ramp(Direction d, double delta_start, double delta_end, double duration) override;
  void wait(double t) override;
  void carrier_flip() override;
  void rotate_half_space(double angle, numeric::HalfSpace side,
                         const numeric::HalfSpaceOptions& options) override;
  double probability(Level outcome) const override;
  double measure(Level outcome) override;
  DensityGrid momentum_grid(const std::vector<double>& grid) const override;
  DensityGrid position_grid(const std::vector<double>& gx, const std::vector<double>& gy) const override;
  AnyState snapshot() const override { return state_; }
  double mean_phonons() const override;
  double leak() const override { return 0.0; }

  const SuperpositionState& state() const { return state_; }

 private:
  SuperpositionState state_;
};

class NumericEngine : public Engine {
 public:
  NumericEngine(const SuperpositionState& initial, std::array<std::size_t, 2> dims, EngineSettings settings);

  Backend backend() const override { return Backend::numeric; }
  void pulse(Direction d, double area) override;
  void ramp(Direction d, double delta_start, double delta_end, double duration) override;
  void wait(double t) override;
  void carrier_flip() override;
  void rotate_half_space(double angle, numeric::HalfSpace side,
                         const numeric::HalfSpaceOptions& options) override;
  double probability(Level outcome) const override;
  double measure(Level outcome) override;
  DensityGrid momentum_grid(const std::vector<double>& grid) const override;
  DensityGrid position_grid(const std::vector<double>& gx, const std::vector<double>& gy) const override;
  AnyState snapshot() const override { return state_; }
  double mean_phonons() const override;
  double leak() const override { return state_.leak(); }

  const FockState& state() const { return state_; }

 private:
  const numeric::OperatorSet& ops(Axis axis) const;

  FockState state_;
  std::shared_ptr<const numeric::OperatorSet> ops_x_;
  std::shared_ptr<const numeric::OperatorSet> ops_y_;
  std::map<std::string, numeric::Matrix> pulse_cache_;
};

// Truncation per mode is settings.numeric.truncation or default_truncation(alpha_max).
std::unique_ptr<Engine> make_engine(Backend backend, const SuperpositionState& initial,
                                    const EngineSettings& settings, double alpha_max);

}  // namespace ionkick
