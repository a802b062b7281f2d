// protocols.hpp: experiment drivers shared by both backends.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ionkick/engine.hpp"

namespace ionkick {

// How nominal waits relate to finite laser events. With pulse_centres a wait
// next to a pulse or ramp is shortened by half of that event's duration, so
// the free evolution between event centres equals the nominal time.
enum class WaitTiming { pulse_centres, pulse_edges };

struct RunOptions {
  Backend backend = Backend::analytic;
  double omega = 100.0;  // Omega/nu
  NumericSettings numeric;
  WaitTiming timing = WaitTiming::pulse_centres;
  double wait = pi / 2.0;  // nominal protocol wait, 1/nu
  std::size_t grid_points = default_grid_points;
  double grid_extent = 0.0;  // 0 uses default_grid_extent
  bool ideal_adiabatic_endpoints = false;
};

struct Snapshot {
  std::string label;
  double time = 0.0;  // free evolution after preparation, 1/nu
  AnyState state;
};

struct Validity {
  double motion = 0.0;          // nu tau max(<n>, eta^2), tau = total laser time
  double adiabaticity = 0.0;    // max |d0 - d1| / (Omega^2 tau)
  double laser_time = 0.0;
  double max_mean_phonons = 0.0;
  double leak = 0.0;            // numeric only
  bool under_truncated = false; // numeric only
};

struct ScanSeries {
  std::string parameter;
  std::string observable;
  std::vector<double> x;
  std::vector<double> y;
};

struct ProtocolReport {
  std::string protocol;
  Backend backend = Backend::analytic;
  std::map<std::string, double> parameters;
  std::vector<Snapshot> snapshots;
  std::map<std::string, double> probabilities;
  std::vector<DensityGrid> grids;  // metadata "label" names each grid
  Validity validity;
  std::optional<ScanSeries> scan;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
  bool succeeded = true;
};

struct MixtureEnsemble {
  std::vector<std::pair<double, SuperpositionState>> members;
  void validate() const;  // weights >= 0 summing to 1
};

using PurityInput = std::variant<SuperpositionState, MixtureEnsemble>;

// K(|i a> + |-i a>)|e>.
SuperpositionState cat_state(double amplitude, Level level = Level::e);
// Inputs of the purity test: K(|eta> + |-eta>)|e> and the equal mixture of |+-eta>|e>.
SuperpositionState purity_cat(double eta);
MixtureEnsemble purity_mixture(double eta);

// pi/2(-), [pi(+), pi(-)] x n, pi/2(+), then measure e.
ProtocolReport prepare_cat_pulses(double eta, int n, const RunOptions& options);

// Counterpropagating detuning ramps of duration omega_tau / Omega each:
// (-, -D->0), n x [(+, -D->0), (+, 0->D), (-, -D->0), (-, 0->D)], (+, 0->D),
// then measure e. D = delta_over_omega * Omega.
ProtocolReport prepare_cat_adiabatic(double eta, int n, double delta_over_omega, double omega_tau,
                                     const RunOptions& options);

// Largest infidelity of the adiabatic cat with the ideal one when the
// dynamical phase of every ramp is swept over [0, 2 pi), finite-Delta angles.
double adiabatic_phase_sensitivity(double eta, int n, double delta_over_omega, std::size_t samples = 32);

// 1D cat on x, wait, 2n+1 alternating pi pulses on y (+y first). Snapshots of
// P(x, y) after the given free-evolution times.
ProtocolReport prepare_cat_2d(double eta, int n, const std::vector<double>& times, const RunOptions& options);
std::vector<double> default_snapshot_times();

// wait, pi/2(-), pi/2(+), measure. Mixtures run member by member.
ProtocolReport purity_probe(const PurityInput& input, double eta, const RunOptions& options);

struct RamseyOptions {
  std::optional<double> boundary;  // x/x0 of the field edge; default eta (between the packets)
  double smoothing = 0.0;
};

// pi/2(+), [pi(-), pi(+)] x n, wait, rotation of the right packet by alpha,
// wait, [pi(-), pi(+)] x n, pi/2(-), measure e; one point per alpha.
ProtocolReport ramsey_scan(double eta, int n, const std::vector<double>& alphas, const RunOptions& options,
                           const RamseyOptions& ramsey = {});

// (max - min) / (max + min).
double visibility(const std::vector<double>& values);

struct BackendComparison {
  std::string protocol;
  std::vector<std::pair<std::string, double>> snapshot_fidelities;
  double max_grid_deviation = 0.0;
  std::map<std::string, double> probability_deltas;
  double max_scan_delta = 0.0;
};

double state_fidelity(const AnyState& a, const AnyState& b);
BackendComparison compare_backends(const ProtocolReport& a, const ProtocolReport& b);

// Reruns the numeric protocol with 25% more Fock levels and returns the
// largest change in any reported probability or scan value.
double truncation_sensitivity(const std::function<ProtocolReport(const RunOptions&)>& run, RunOptions options,
                              std::size_t base_truncation);

}  // namespace ionkick
