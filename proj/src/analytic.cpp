#include "ionkick/analytic.hpp"

#include <cmath>

#include "ionkick/errors.hpp"

namespace ionkick::analytic {

cplx coherent_overlap(cplx alpha, cplx beta) {
  return std::exp(-0.5 * (std::norm(alpha) + std::norm(beta)) + std::conj(alpha) * beta);
}

KickCoefficients pulse_coeffs(double area) {
  return {std::cos(0.5 * area), cplx(0.0, -std::sin(0.5 * area))};
}

KickCoefficients adiabatic_coeffs(const AdiabaticSpec& spec) {
  const double ce = std::cos(spec.epsilon);
  const double se = std::sin(spec.epsilon);
  const double diff = spec.theta_start - spec.theta_end;
  const double sum = spec.theta_start + spec.theta_end;
  return {cplx(ce * std::cos(diff), se * std::cos(sum)), cplx(ce * std::sin(diff), -se * std::sin(sum))};
}

double mixing_angle(double delta, double omega) { return 0.5 * std::atan2(omega, -delta); }

namespace {

// Antiderivative of sqrt(x^2 + w^2).
double root_integral(double x, double w) {
  const double r = std::sqrt(x * x + w * w);
  if (w == 0.0) return 0.5 * x * r;
  return 0.5 * (x * r + w * w * std::asinh(x / w));
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double dynamical_phase_linear(double omega, double delta_start, double delta_end, double duration) {
  const double span = delta_end - delta_start;
  const double scale = std::max({std::abs(delta_start), std::abs(delta_end), std::abs(omega), 1.0});
  if (std::abs(span) < 1e-12 * scale)
    return 0.5 * duration * std::sqrt(delta_start * delta_start + omega * omega);
  return 0.5 * duration / span * (root_integral(delta_end, omega) - root_integral(delta_start, omega));
}

double dynamical_phase(const std::function<double(double)>& delta, double omega, double duration,
                       double tol) {
  if (duration <= 0.0) return 0.0;
  auto energy = [&](double t) {
    const double d = delta(t);
    return 0.5 * std::sqrt(d * d + omega * omega);
  };
  const double fa = energy(0.0);
  const double fm = energy(0.5 * duration);
  const double fb = energy(duration);
  const double whole = duration / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(energy, 0.0, duration, fa, fm, fb, whole, tol, 50);
}

AdiabaticSpec linear_ramp_spec(double omega, double delta_start, double delta_end, double duration,
                               bool ideal_endpoints) {
  auto angle = [&](double d) {
    if (!ideal_endpoints) return mixing_angle(d, omega);
    if (d < 0.0) return 0.0;
    if (d > 0.0) return 0.5 * pi;
    return 0.25 * pi;
  };
  return {angle(delta_start), angle(delta_end),
          dynamical_phase_linear(omega, delta_start, delta_end, duration)};
}

namespace {

// D(beta) on one mode of a component, exact phase included.
CoherentComponent displaced(CoherentComponent c, cplx beta, Axis axis, Level level, cplx factor) {
  cplx& a = c.alpha[static_cast<std::size_t>(axis)];
  const double phase = (beta * std::conj(a)).imag();
  c.coeff *= factor * std::polar(1.0, phase);
  a += beta;
  c.level = level;
  return c;
}

}  // namespace

SuperpositionState apply_kick(const SuperpositionState& s, const KickCoefficients& k, Direction d,
                              double eta) {
  if (d.axis == Axis::y && s.modes < 2) throw ShapeError("apply_kick: y kick on a 1-mode state");
  const cplx beta = cplx(0.0, d.sign * eta);
  SuperpositionState out{s.modes, {}};
  out.components.reserve(2 * s.components.size());
  for (const auto& c : s.components) {
    if (c.level == Level::g) {
      if (k.a != cplx(0.0)) out.components.push_back({Level::g, c.coeff * k.a, c.alpha});
      if (k.b != cplx(0.0)) out.components.push_back(displaced(c, beta, d.axis, Level::e, k.b));
    } else {
      if (k.a != cplx(0.0)) out.components.push_back({Level::e, c.coeff * std::conj(k.a), c.alpha});
      if (k.b != cplx(0.0))
        out.components.push_back(displaced(c, -beta, d.axis, Level::g, -std::conj(k.b)));
    }
  }
  return simplify(out);
}

SuperpositionState free_evolve(const SuperpositionState& s, double t) {
  SuperpositionState out = free_evolve(s, t, Axis::x);
  return s.modes == 2 ? free_evolve(out, t, Axis::y) : out;
}

SuperpositionState free_evolve(const SuperpositionState& s, double t, Axis axis) {
  if (axis == Axis::y && s.modes < 2) throw ShapeError("free_evolve: y axis on a 1-mode state");
  SuperpositionState out = s;
  const cplx rot = std::polar(1.0, -t);
  for (auto& c : out.components) c.alpha[static_cast<std::size_t>(axis)] *= rot;
  return out;
}

SuperpositionState carrier_flip(const SuperpositionState& s) {
  SuperpositionState out = s;
  for (auto& c : out.components) {
    c.level = other(c.level);
    c.coeff *= cplx(0.0, -1.0);
  }
  return out;
}

SuperpositionState rotate_components(const SuperpositionState& s, double angle,
                                     const std::function<bool(const CoherentComponent&)>& pick) {
  SuperpositionState out{s.modes, {}};
  const double co = std::cos(angle);
  const cplx si = cplx(0.0, -std::sin(angle));
  for (const auto& c : s.components) {
    if (!pick(c)) {
      out.components.push_back(c);
      continue;
    }
    if (co != 0.0) out.components.push_back({c.level, c.coeff * co, c.alpha});
    if (si != cplx(0.0)) out.components.push_back({other(c.level), c.coeff * si, c.alpha});
  }
  return simplify(out);
}

SuperpositionState rotate_component(const SuperpositionState& s, Level selector, double angle) {
  return rotate_components(s, angle, [selector](const CoherentComponent& c) { return c.level == selector; });
}

SuperpositionState project(const SuperpositionState& s, Level outcome) {
  SuperpositionState out{s.modes, {}};
  for (const auto& c : s.components)
    if (c.level == outcome) out.components.push_back(c);
  return out;
}

double probability(const SuperpositionState& s, Level outcome) {
  const double total = norm_squared(s);
  if (!(total > 0.0)) throw ZeroNormError("probability: zero-norm state", 0.0);
  const SuperpositionState branch = project(s, outcome);
  return branch.components.empty() ? 0.0 : norm_squared(branch) / total;
}

Measurement measure_internal(const SuperpositionState& s, Level outcome) {
  const double p = probability(s, outcome);
  if (p < 1e-14)
    throw ZeroNormError(std::string("measurement outcome ") + to_string(outcome) + " has zero probability", p);
  return {p, normalize(project(s, outcome))};
}

cplx position_wavefunction(cplx alpha, double x) {
  static const double norm = std::pow(2.0 * pi, -0.25);
  return norm * std::exp(-0.5 * std::norm(alpha) - 0.5 * alpha * alpha + alpha * x - 0.25 * x * x);
}

cplx momentum_wavefunction(cplx alpha, double p) {
  static const double norm = std::pow(2.0 * pi, -0.25);
  return norm * std::exp(-0.5 * std::norm(alpha) + 0.5 * alpha * alpha - I * alpha * p - 0.25 * p * p);
}

namespace {

Eigen::VectorXcd level_momentum_amplitude(const SuperpositionState& s, Level level,
                                          const std::vector<double>& grid) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(grid.size()));
  for (const auto& c : s.components) {
    if (c.level != level) continue;
    for (std::size_t i = 0; i < grid.size(); ++i)
      v(static_cast<Eigen::Index>(i)) += c.coeff * momentum_wavefunction(c.alpha[0], grid[i]);
  }
  return v;
}

DensityGrid momentum_grid_shell(const std::vector<double>& grid) {
  DensityGrid out;
  out.kind = GridKind::density_operator;
  out.rows = {"p", "p0", grid};
  out.cols = {"p_prime", "p0", grid};
  const auto n = static_cast<Eigen::Index>(grid.size());
  out.values = Eigen::MatrixXcd::Zero(n, n);
  out.metadata["backend"] = "analytic";
  return out;
}

}  // namespace

DensityGrid momentum_density(const SuperpositionState& s, const std::vector<double>& grid) {
  return momentum_density({{1.0, s}}, grid);
}

DensityGrid momentum_density(const std::vector<std::pair<double, SuperpositionState>>& ensemble,
                             const std::vector<double>& grid) {
  DensityGrid out = momentum_grid_shell(grid);
  for (const auto& [weight, state] : ensemble) {
    if (state.modes != 1) throw ShapeError("momentum_density: needs a 1-mode state");
    const SuperpositionState s = normalize(state);
    for (Level level : {Level::g, Level::e}) {
      const Eigen::VectorXcd v = level_momentum_amplitude(s, level, grid);
      out.values += weight * v * v.adjoint();
    }
  }
  validate(out);
  return out;
}

DensityGrid position_density_2d(const SuperpositionState& state, const std::vector<double>& grid_x,
                                const std::vector<double>& grid_y) {
  if (state.modes != 2) throw ShapeError("position_density_2d: needs a 2-mode state");
  const SuperpositionState s = normalize(state);
  const auto nx = static_cast<Eigen::Index>(grid_x.size());
  const auto ny = static_cast<Eigen::Index>(grid_y.size());
  DensityGrid out;
  out.kind = GridKind::probability;
  out.rows = {"x", "x0", grid_x};
  out.cols = {"y", "x0", grid_y};
  out.values = Eigen::MatrixXcd::Zero(nx, ny);
  out.metadata["backend"] = "analytic";
  for (Level level : {Level::g, Level::e}) {
    Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(nx, ny);
    for (const auto& c : s.components) {
      if (c.level != level) continue;
      Eigen::VectorXcd u(nx), v(ny);
      for (Eigen::Index i = 0; i < nx; ++i) u(i) = position_wavefunction(c.alpha[0], grid_x[static_cast<std::size_t>(i)]);
      for (Eigen::Index j = 0; j < ny; ++j) v(j) = position_wavefunction(c.alpha[1], grid_y[static_cast<std::size_t>(j)]);
      amp += c.coeff * u * v.transpose();
    }
    out.values += amp.cwiseAbs2().cast<cplx>();
  }
  validate(out);
  return out;
}

}  // namespace ionkick::analytic
