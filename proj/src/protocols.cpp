#include "ionkick/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ionkick/analytic.hpp"
#include "ionkick/detect.hpp"
#include "ionkick/errors.hpp"

namespace ionkick {

namespace {

struct Step {
  enum class Kind { pulse, ramp, wait, rotate };
  Kind kind = Kind::wait;
  Direction direction{};
  double area = 0.0;
  double delta_start = 0.0;
  double delta_end = 0.0;
  double duration = 0.0;  // ramp length or nominal wait
  double angle = 0.0;
  numeric::HalfSpaceOptions half_space{};
};

Step pulse(Direction d, double area) { return {Step::Kind::pulse, d, area}; }
Step ramp(Direction d, double d0, double d1, double duration) {
  return {Step::Kind::ramp, d, 0.0, d0, d1, duration};
}
Step wait(double t) {
  Step s;
  s.kind = Step::Kind::wait;
  s.duration = t;
  return s;
}
Step rotate_right(double angle, numeric::HalfSpaceOptions hs) {
  Step s;
  s.kind = Step::Kind::rotate;
  s.angle = angle;
  s.half_space = hs;
  return s;
}

// Analytic kicks are instantaneous, so only numeric waits are compensated.
double laser_time(const Step& s, const Engine& engine) {
  if (engine.backend() == Backend::analytic) return 0.0;
  if (s.kind == Step::Kind::pulse) return engine.pulse_duration(s.area);
  if (s.kind == Step::Kind::ramp) return s.duration;
  return 0.0;
}

void run_steps(Engine& engine, const std::vector<Step>& steps, WaitTiming timing,
               std::vector<std::string>& warnings) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Step& s = steps[i];
    switch (s.kind) {
      case Step::Kind::pulse:
        engine.pulse(s.direction, s.area);
        break;
      case Step::Kind::ramp:
        engine.ramp(s.direction, s.delta_start, s.delta_end, s.duration);
        break;
      case Step::Kind::rotate:
        engine.rotate_half_space(s.angle, numeric::HalfSpace::right, s.half_space);
        break;
      case Step::Kind::wait: {
        double t = s.duration;
        if (timing == WaitTiming::pulse_centres) {
          if (i > 0) t -= 0.5 * laser_time(steps[i - 1], engine);
          if (i + 1 < steps.size()) t -= 0.5 * laser_time(steps[i + 1], engine);
        }
        if (t < 0.0) {
          warnings.push_back("adjacent laser events are longer than the wait; wait clamped to 0");
          t = 0.0;
        }
        engine.wait(t);
        break;
      }
    }
  }
}

EngineSettings engine_settings(double eta, const RunOptions& o) {
  EngineSettings s;
  s.omega = o.omega;
  s.eta = eta;
  s.ideal_adiabatic_endpoints = o.ideal_adiabatic_endpoints;
  s.numeric = o.numeric;
  return s;
}

void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be positive and finite");
}

void check_n(int n) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
}

std::vector<double> grid_for(const RunOptions& o, double alpha_max) {
  const double extent = o.grid_extent > 0.0 ? o.grid_extent : default_grid_extent(alpha_max);
  return uniform_grid(extent, o.grid_points);
}

void fill_validity(ProtocolReport& r, const Engine& e) {
  r.validity.motion = std::max(r.validity.motion, e.motion_indicator());
  r.validity.adiabaticity = std::max(r.validity.adiabaticity, e.exposure().max_adiabaticity);
  r.validity.laser_time = std::max(r.validity.laser_time, e.exposure().laser_time);
  r.validity.max_mean_phonons = std::max(r.validity.max_mean_phonons, e.exposure().max_mean_phonons);
  r.validity.leak = std::max(r.validity.leak, e.leak());
  r.validity.under_truncated = r.validity.under_truncated || e.leak() > e.settings().numeric.leak_threshold;
}

void finish_warnings(ProtocolReport& r, double leak_threshold) {
  if (r.validity.motion >= 0.1)
    r.warnings.push_back("motion during laser events is not negligible (nu tau max(n, eta^2) = " +
                         std::to_string(r.validity.motion) + ")");
  if (r.validity.adiabaticity > 1.0)
    r.warnings.push_back("adiabatic condition violated (ratio " + std::to_string(r.validity.adiabaticity) + ")");
  if (r.validity.under_truncated)
    r.warnings.push_back("Fock truncation leak " + std::to_string(r.validity.leak) + " exceeds " +
                         std::to_string(leak_threshold));
}

void label(DensityGrid& g, const std::string& protocol, const std::string& name, const ProtocolReport& r) {
  g.metadata["protocol"] = protocol;
  g.metadata["label"] = name;
  g.metadata["backend"] = to_string(r.backend);
  for (const auto& [k, v] : r.parameters) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    g.metadata[k] = buf;
  }
}

double cat_fidelity(const AnyState& state, double amplitude) {
  return state_fidelity(state, AnyState{cat_state(amplitude)});
}

void cat_diagnostics(ProtocolReport& r, const DensityGrid& grid, double amplitude) {
  const double c = 2.0 * amplitude;
  r.diagnostics["four_peak"] = four_peak_structure(grid, c).present ? 1.0 : 0.0;
  r.diagnostics["central_peak"] = central_peak(grid, c) ? 1.0 : 0.0;
  r.diagnostics["cat_fidelity"] = cat_fidelity(r.snapshots.back().state, amplitude);
}

// Measures e, records the branch probabilities and the post-selected state.
bool post_select_e(Engine& engine, ProtocolReport& r) {
  r.snapshots.push_back({"pre_measurement", 0.0, engine.snapshot()});
  const double pe = engine.probability(Level::e);
  r.probabilities["e"] = pe;
  r.probabilities["g"] = engine.probability(Level::g);
  if (pe < 1e-14) {
    r.succeeded = false;
    r.warnings.push_back("e outcome has zero probability; no cat prepared");
    return false;
  }
  engine.measure(Level::e);
  return true;
}

}  // namespace

void MixtureEnsemble::validate() const {
  if (members.empty()) throw std::invalid_argument("mixture has no members");
  double sum = 0.0;
  for (const auto& [w, s] : members) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("mixture weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
}

SuperpositionState cat_state(double amplitude, Level level) {
  SuperpositionState s{1, {{level, 1.0, {cplx(0.0, amplitude), 0.0}}, {level, 1.0, {cplx(0.0, -amplitude), 0.0}}}};
  return normalize(s);
}

SuperpositionState purity_cat(double eta) {
  return normalize(SuperpositionState{1, {{Level::e, 1.0, {cplx(eta), 0.0}}, {Level::e, 1.0, {cplx(-eta), 0.0}}}});
}

MixtureEnsemble purity_mixture(double eta) {
  return {{{0.5, SuperpositionState::coherent(Level::e, eta)}, {0.5, SuperpositionState::coherent(Level::e, -eta)}}};
}

ProtocolReport prepare_cat_pulses(double eta, int n, const RunOptions& options) {
  check_eta(eta);
  check_n(n);
  ProtocolReport r;
  r.protocol = "cat1d-pulses";
  r.backend = options.backend;
  r.parameters = {{"eta", eta}, {"n", n}, {"omega_ratio", options.omega}};

  auto engine = make_engine(options.backend, SuperpositionState::coherent(Level::g, 0.0),
                            engine_settings(eta, options), (2 * n + 2) * eta);
  std::vector<Step> steps{pulse(Direction::minus(), pi / 2)};
  for (int k = 0; k < n; ++k) {
    steps.push_back(pulse(Direction::plus(), pi));
    steps.push_back(pulse(Direction::minus(), pi));
  }
  steps.push_back(pulse(Direction::plus(), pi / 2));
  run_steps(*engine, steps, options.timing, r.warnings);
  fill_validity(r, *engine);

  if (post_select_e(*engine, r)) {
    const double amplitude = (2 * n + 1) * eta;
    r.snapshots.push_back({"cat", 0.0, engine->snapshot()});
    DensityGrid grid = engine->momentum_grid(grid_for(options, amplitude));
    label(grid, r.protocol, "momentum", r);
    cat_diagnostics(r, grid, amplitude);
    r.grids.push_back(std::move(grid));
  }
  finish_warnings(r, options.numeric.leak_threshold);
  return r;
}

namespace {

std::vector<Step> adiabatic_steps(int n, double delta, double duration) {
  std::vector<Step> steps{ramp(Direction::minus(), -delta, 0.0, duration)};
  for (int k = 0; k < n; ++k) {
    steps.push_back(ramp(Direction::plus(), -delta, 0.0, duration));
    steps.push_back(ramp(Direction::plus(), 0.0, delta, duration));
    steps.push_back(ramp(Direction::minus(), -delta, 0.0, duration));
    steps.push_back(ramp(Direction::minus(), 0.0, delta, duration));
  }
  steps.push_back(ramp(Direction::plus(), 0.0, delta, duration));
  return steps;
}

}  // namespace

double adiabatic_phase_sensitivity(double eta, int n, double delta_over_omega, std::size_t samples) {
  check_eta(eta);
  check_n(n);
  const double lower = analytic::mixing_angle(-delta_over_omega, 1.0);
  const double upper = analytic::mixing_angle(delta_over_omega, 1.0);
  const double mid = analytic::mixing_angle(0.0, 1.0);
  const SuperpositionState ideal = cat_state((2 * n + 1) * eta);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double eps = 2.0 * pi * static_cast<double>(k) / static_cast<double>(samples);
    SuperpositionState s = SuperpositionState::coherent(Level::g, 0.0);
    for (const Step& step : adiabatic_steps(n, 1.0, 1.0)) {
      const double t0 = step.delta_start < 0.0 ? lower : mid;
      const double t1 = step.delta_end > 0.0 ? upper : mid;
      s = analytic::apply_kick(s, analytic::adiabatic_coeffs({t0, t1, eps}), step.direction, eta);
    }
    const double pe = analytic::probability(s, Level::e);
    if (pe < 1e-14) return 1.0;
    worst = std::max(worst, 1.0 - fidelity(analytic::project(s, Level::e), ideal));
  }
  return worst;
}

ProtocolReport prepare_cat_adiabatic(double eta, int n, double delta_over_omega, double omega_tau,
                                     const RunOptions& options) {
  check_eta(eta);
  check_n(n);
  if (!(delta_over_omega > 0.0) || !(omega_tau > 0.0))
    throw std::invalid_argument("delta_over_omega and omega_tau must be positive");
  ProtocolReport r;
  r.protocol = "cat1d-adiabatic";
  r.backend = options.backend;
  r.parameters = {{"eta", eta},
                  {"n", n},
                  {"omega_ratio", options.omega},
                  {"delta_over_omega", delta_over_omega},
                  {"omega_tau", omega_tau}};
  if (delta_over_omega < 5.0)
    r.warnings.push_back("Delta/Omega < 5: finite-detuning oscillations are large");

  const double delta = delta_over_omega * options.omega;
  const double duration = omega_tau / options.omega;
  auto engine = make_engine(options.backend, SuperpositionState::coherent(Level::g, 0.0),
                            engine_settings(eta, options), (2 * n + 2) * eta);
  run_steps(*engine, adiabatic_steps(n, delta, duration), options.timing, r.warnings);
  fill_validity(r, *engine);
  r.diagnostics["dynamical_phase"] = analytic::dynamical_phase_linear(options.omega, -delta, 0.0, duration);
  r.diagnostics["oscillation_amplitude"] = adiabatic_phase_sensitivity(eta, n, delta_over_omega);

  if (post_select_e(*engine, r)) {
    const double amplitude = (2 * n + 1) * eta;
    r.snapshots.push_back({"cat", 0.0, engine->snapshot()});
    DensityGrid grid = engine->momentum_grid(grid_for(options, amplitude));
    label(grid, r.protocol, "momentum", r);
    cat_diagnostics(r, grid, amplitude);
    r.grids.push_back(std::move(grid));
  }
  finish_warnings(r, options.numeric.leak_threshold);
  return r;
}

std::vector<double> default_snapshot_times() { return {0.0, pi / 4, pi / 2, 3 * pi / 4, 40 * pi}; }

ProtocolReport prepare_cat_2d(double eta, int n, const std::vector<double>& times, const RunOptions& options) {
  check_eta(eta);
  check_n(n);
  for (std::size_t k = 0; k < times.size(); ++k)
    if (!(times[k] >= 0.0) || (k > 0 && times[k] < times[k - 1]))
      throw std::invalid_argument("snapshot times must be non-negative and ascending");
  ProtocolReport r;
  r.protocol = "cat2d";
  r.backend = options.backend;
  r.parameters = {{"eta", eta}, {"n", n}, {"omega_ratio", options.omega}};

  RunOptions o = options;
  const double reach = (2 * n + 2) * eta;
  if (o.numeric.truncation == 0) o.numeric.truncation = std::min<std::size_t>(default_truncation(reach), 40);
  auto engine = make_engine(o.backend, SuperpositionState::coherent2d(Level::g, 0.0, 0.0),
                            engine_settings(eta, o), reach);

  std::vector<Step> x_steps{pulse(Direction::minus(), pi / 2)};
  for (int k = 0; k < n; ++k) {
    x_steps.push_back(pulse(Direction::plus(), pi));
    x_steps.push_back(pulse(Direction::minus(), pi));
  }
  x_steps.push_back(pulse(Direction::plus(), pi / 2));
  run_steps(*engine, x_steps, o.timing, r.warnings);
  if (!post_select_e(*engine, r)) {
    fill_validity(r, *engine);
    finish_warnings(r, o.numeric.leak_threshold);
    return r;
  }

  // Free evolution between the last x pulse and the first y pulse.
  const bool centred = o.timing == WaitTiming::pulse_centres && engine->backend() == Backend::numeric;
  double t = o.wait;
  if (centred) t -= 0.5 * (engine->pulse_duration(pi / 2) + engine->pulse_duration(pi));
  if (t < 0.0) {
    r.warnings.push_back("pulses are longer than the wait; wait clamped to 0");
    t = 0.0;
  }
  engine->wait(t);
  std::vector<Step> y_steps;
  for (int k = 0; k < 2 * n + 1; ++k)
    y_steps.push_back(pulse(k % 2 == 0 ? Direction::plus(Axis::y) : Direction::minus(Axis::y), pi));
  run_steps(*engine, y_steps, o.timing, r.warnings);
  fill_validity(r, *engine);
  r.probabilities["final_g"] = engine->probability(Level::g);
  r.probabilities["final_e"] = engine->probability(Level::e);

  const double radius = 2.0 * (2 * n + 1) * eta;
  r.diagnostics["circle_radius"] = radius;
  const auto grid = grid_for(o, std::sqrt(2.0) * (2 * n + 1) * eta);
  const double last = centred ? 0.5 * engine->pulse_duration(pi) : 0.0;
  double elapsed = 0.0;
  for (double t : times) {
    const double target = std::max(0.0, t - last);
    engine->wait(target - elapsed);
    elapsed = target;
    char name[64];
    std::snprintf(name, sizeof name, "nut_%.6f", t);
    r.snapshots.push_back({name, t, engine->snapshot()});
    DensityGrid g = engine->position_grid(grid, grid);
    label(g, r.protocol, name, r);
    char tv[64];
    std::snprintf(tv, sizeof tv, "%.17g", t);
    g.metadata["nu_t"] = tv;
    r.grids.push_back(std::move(g));
  }
  finish_warnings(r, o.numeric.leak_threshold);
  return r;
}

ProtocolReport purity_probe(const PurityInput& input, double eta, const RunOptions& options) {
  check_eta(eta);
  ProtocolReport r;
  r.protocol = "purity";
  r.backend = options.backend;
  r.parameters = {{"eta", eta}, {"omega_ratio", options.omega}};

  MixtureEnsemble ensemble;
  if (const auto* pure = std::get_if<SuperpositionState>(&input)) {
    ensemble.members.push_back({1.0, *pure});
    r.parameters["mixture"] = 0.0;
  } else {
    ensemble = std::get<MixtureEnsemble>(input);
    r.parameters["mixture"] = 1.0;
  }
  ensemble.validate();

  const std::vector<Step> steps{wait(options.wait), pulse(Direction::minus(), pi / 2),
                                pulse(Direction::plus(), pi / 2)};
  double pg = 0.0;
  double pe = 0.0;
  for (const auto& [weight, state] : ensemble.members) {
    if (state.modes != 1) throw ShapeError("purity_probe: needs 1-mode input states");
    auto engine = make_engine(options.backend, normalize(state), engine_settings(eta, options),
                              max_amplitude(state) + 3.0 * eta);
    run_steps(*engine, steps, options.timing, r.warnings);
    fill_validity(r, *engine);
    pg += weight * engine->probability(Level::g);
    pe += weight * engine->probability(Level::e);
    if (ensemble.members.size() == 1) r.snapshots.push_back({"final", 0.0, engine->snapshot()});
  }
  r.probabilities["g"] = pg;
  r.probabilities["e"] = pe;
  finish_warnings(r, options.numeric.leak_threshold);
  return r;
}

double visibility(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("visibility of an empty series");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return (*hi - *lo) / (*hi + *lo);
}

ProtocolReport ramsey_scan(double eta, int n, const std::vector<double>& alphas, const RunOptions& options,
                           const RamseyOptions& ramsey) {
  check_eta(eta);
  check_n(n);
  if (alphas.empty()) throw std::invalid_argument("ramsey_scan: empty phase list");
  ProtocolReport r;
  r.protocol = "ramsey";
  r.backend = options.backend;
  const double boundary = ramsey.boundary.value_or(eta);
  r.parameters = {{"eta", eta}, {"n", n}, {"omega_ratio", options.omega}, {"boundary", boundary}};
  ScanSeries scan{"alpha", "P_e", {}, {}};
  double worst_cos = 0.0;
  double worst_sum = 0.0;
  for (double a : alphas) {
    if (!std::isfinite(a)) throw std::invalid_argument("ramsey_scan: phases must be finite");
    auto engine = make_engine(options.backend, SuperpositionState::coherent(Level::g, 0.0),
                              engine_settings(eta, options), (2 * n + 2) * eta);
    std::vector<Step> steps{pulse(Direction::plus(), pi / 2)};
    auto train = [&] {
      for (int k = 0; k < n; ++k) {
        steps.push_back(pulse(Direction::minus(), pi));
        steps.push_back(pulse(Direction::plus(), pi));
      }
    };
    train();
    steps.push_back(wait(options.wait));
    steps.push_back(rotate_right(a, {boundary, ramsey.smoothing}));
    steps.push_back(wait(options.wait));
    train();
    steps.push_back(pulse(Direction::minus(), pi / 2));
    run_steps(*engine, steps, options.timing, r.warnings);
    fill_validity(r, *engine);
    const double pe = engine->probability(Level::e);
    const double pg = engine->probability(Level::g);
    scan.x.push_back(a);
    scan.y.push_back(pe);
    const double c = std::cos(0.5 * a);
    worst_cos = std::max(worst_cos, std::abs(pe - c * c));
    worst_sum = std::max(worst_sum, std::abs(pe + pg - 1.0));
  }
  r.diagnostics["visibility"] = visibility(scan.y);
  r.diagnostics["max_deviation_cos2"] = worst_cos;
  r.diagnostics["max_completeness_error"] = worst_sum;
  r.scan = std::move(scan);
  // Duplicate warnings from repeated points add nothing.
  std::sort(r.warnings.begin(), r.warnings.end());
  r.warnings.erase(std::unique(r.warnings.begin(), r.warnings.end()), r.warnings.end());
  finish_warnings(r, options.numeric.leak_threshold);
  return r;
}

double state_fidelity(const AnyState& a, const AnyState& b) {
  const auto* sa = std::get_if<SuperpositionState>(&a);
  const auto* sb = std::get_if<SuperpositionState>(&b);
  if (sa && sb) return fidelity(*sa, *sb);
  if (!sa && !sb) return fidelity(std::get<FockState>(a), std::get<FockState>(b));
  const FockState& f = sa ? std::get<FockState>(b) : std::get<FockState>(a);
  const SuperpositionState& s = sa ? *sa : *sb;
  if (s.modes != f.modes) throw ShapeError("state_fidelity: mode count mismatch");
  return fidelity(fock_expand(s, f.dims), f);
}

BackendComparison compare_backends(const ProtocolReport& a, const ProtocolReport& b) {
  if (a.protocol != b.protocol) throw std::invalid_argument("compare_backends: different protocols");
  for (const auto& [k, v] : a.parameters) {
    if (k == "omega_ratio" && a.backend != b.backend) continue;
    auto it = b.parameters.find(k);
    if (it == b.parameters.end() || it->second != v)
      throw std::invalid_argument("compare_backends: parameter '" + k + "' differs");
  }
  BackendComparison c;
  c.protocol = a.protocol;
  for (const auto& sa : a.snapshots)
    for (const auto& sb : b.snapshots)
      if (sa.label == sb.label) c.snapshot_fidelities.push_back({sa.label, state_fidelity(sa.state, sb.state)});
  for (const auto& ga : a.grids)
    for (const auto& gb : b.grids) {
      if (ga.metadata.at("label") != gb.metadata.at("label")) continue;
      if (ga.values.rows() != gb.values.rows() || ga.values.cols() != gb.values.cols()) continue;
      c.max_grid_deviation = std::max(c.max_grid_deviation, (ga.values - gb.values).cwiseAbs().maxCoeff());
    }
  for (const auto& [k, v] : a.probabilities) {
    auto it = b.probabilities.find(k);
    if (it != b.probabilities.end()) c.probability_deltas[k] = std::abs(v - it->second);
  }
  if (a.scan && b.scan) {
    if (a.scan->x != b.scan->x) throw std::invalid_argument("compare_backends: scan grids differ");
    for (std::size_t i = 0; i < a.scan->y.size(); ++i)
      c.max_scan_delta = std::max(c.max_scan_delta, std::abs(a.scan->y[i] - b.scan->y[i]));
  }
  return c;
}

double truncation_sensitivity(const std::function<ProtocolReport(const RunOptions&)>& run, RunOptions options,
                              std::size_t base_truncation) {
  options.backend = Backend::numeric;
  options.numeric.truncation = base_truncation;
  const ProtocolReport coarse = run(options);
  options.numeric.truncation = static_cast<std::size_t>(std::ceil(1.25 * static_cast<double>(base_truncation)));
  const ProtocolReport fine = run(options);
  double worst = 0.0;
  for (const auto& [k, v] : coarse.probabilities) {
    auto it = fine.probabilities.find(k);
    if (it != fine.probabilities.end()) worst = std::max(worst, std::abs(v - it->second));
  }
  if (coarse.scan && fine.scan)
    for (std::size_t i = 0; i < coarse.scan->y.size(); ++i)
      worst = std::max(worst, std::abs(coarse.scan->y[i] - fine.scan->y[i]));
  return worst;
}

}  // namespace ionkick
