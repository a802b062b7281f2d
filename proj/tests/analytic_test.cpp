#include <random>

#include "doctest.h"
#include "ionkick/analytic.hpp"
#include "ionkick/errors.hpp"
#include "oracle.hpp"

using namespace ionkick;
namespace an = ionkick::analytic;

namespace {

oracle::Spinor to_spinor(const SuperpositionState& s, std::size_t n) {
  FockState f = fock_expand(s, {n, 1});
  oracle::Spinor out{oracle::Vec(n), oracle::Vec(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.g[k] = f.amplitude(Level::g, k);
    out.e[k] = f.amplitude(Level::e, k);
  }
  return out;
}

double spinor_distance(const oracle::Spinor& a, const oracle::Spinor& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.g.size(); ++k) d = std::max({d, std::abs(a.g[k] - b.g[k]), std::abs(a.e[k] - b.e[k])});
  return d;
}

SuperpositionState random_state(std::mt19937_64& rng, int components, double spread) {
  std::normal_distribution<double> gauss(0.0, spread);
  SuperpositionState s{1, {}};
  for (int k = 0; k < components; ++k)
    s.components.push_back({k % 2 ? Level::e : Level::g, {gauss(rng), gauss(rng)}, {cplx(gauss(rng), gauss(rng)), 0.0}});
  return normalize(s);
}

SuperpositionState mirror(SuperpositionState s) {
  for (auto& c : s.components) c.alpha[0] = -c.alpha[0];
  return s;
}

}  // namespace

TEST_CASE("coherent overlap against Fock sums") {
  const cplx a(0.4, -1.2), b(-0.3, 0.5);
  const cplx fock = oracle::dot(oracle::coherent(a, 60), oracle::coherent(b, 60));
  CHECK(std::abs(an::coherent_overlap(a, b) - fock) < 1e-14);
}

TEST_CASE("pulse coefficients") {
  auto k = an::pulse_coeffs(pi);
  CHECK(std::abs(k.a) < 1e-15);
  CHECK(std::abs(k.b - cplx(0.0, -1.0)) < 1e-15);
  auto h = an::pulse_coeffs(pi / 2);
  CHECK(std::norm(h.a) + std::norm(h.b) == doctest::Approx(1.0));
}

TEST_CASE("mixing angle limits") {
  CHECK(an::mixing_angle(-1e9, 1.0) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(an::mixing_angle(0.0, 1.0) == doctest::Approx(pi / 4));
  CHECK(an::mixing_angle(1e9, 1.0) == doctest::Approx(pi / 2).epsilon(1e-8));
  // cot(2 theta) = -delta / Omega
  const double th = an::mixing_angle(0.7, 2.0);
  CHECK(1.0 / std::tan(2 * th) == doctest::Approx(-0.35));
}

TEST_CASE("adiabatic coefficients are unitary and reduce to full passage") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, pi);
  for (int i = 0; i < 20; ++i) {
    auto k = an::adiabatic_coeffs({u(rng) / 2, u(rng) / 2, 10 * u(rng)});
    CHECK(std::norm(k.a) + std::norm(k.b) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const double eps = 0.83;
  auto full = an::adiabatic_coeffs({0.0, pi / 2, eps});
  CHECK(std::abs(full.a) < 1e-15);
  CHECK(std::abs(full.b + std::polar(1.0, eps)) < 1e-15);
}

TEST_CASE("dynamical phase of linear ramps") {
  // quadrature references at 25 digits
  CHECK(an::dynamical_phase_linear(100.0, -1000.0, 0.0, 0.4) == doctest::Approx(103.4969791615068724).epsilon(1e-13));
  CHECK(an::dynamical_phase_linear(3.0, -2.0, 5.0, 1.7) == doctest::Approx(3.25102712059517283).epsilon(1e-13));
  auto delta = [](double t) { return -2.0 + 7.0 * t / 1.7; };
  CHECK(an::dynamical_phase(delta, 3.0, 1.7) == doctest::Approx(3.25102712059517283).epsilon(1e-9));
  CHECK(an::dynamical_phase_linear(2.0, 0.0, 0.0, 3.0) == doctest::Approx(3.0));
}

TEST_CASE("linear ramp spec endpoints") {
  auto ideal = an::linear_ramp_spec(1.0, -10.0, 0.0, 40.0, true);
  CHECK(ideal.theta_start == 0.0);
  CHECK(ideal.theta_end == doctest::Approx(pi / 4));
  auto finite = an::linear_ramp_spec(1.0, -10.0, 0.0, 40.0);
  CHECK(finite.theta_start == doctest::Approx(an::mixing_angle(-10.0, 1.0)));
  CHECK(finite.theta_start > 0.0);
}

TEST_CASE("kick on a ground coherent state has the closed form") {
  for (double eta : {0.1, 0.5, 2.5}) {
    const cplx alpha(0.3, -0.8);
    const auto k = an::pulse_coeffs(0.9);
    auto out = an::apply_kick(SuperpositionState::coherent(Level::g, alpha), k, Direction::plus(), eta);
    const cplx beta(0.0, eta);
    SuperpositionState expect{1, {{Level::g, k.a, {alpha, 0.0}},
                                  {Level::e, k.b * std::polar(1.0, std::imag(beta * std::conj(alpha))), {alpha + beta, 0.0}}}};
    CHECK(approx_equal(out, expect, 1e-15));
  }
}

TEST_CASE("kicks agree with the Laguerre displacement oracle") {
  std::mt19937_64 rng(3);
  for (double eta : {0.1, 0.5, 2.5}) {
    const std::size_t n = 90;
    auto s = random_state(rng, 3, 0.6);
    for (int sign : {+1, -1}) {
      const double area = 1.3;
      auto out = an::apply_kick(s, an::pulse_coeffs(area), {sign, Axis::x}, eta);
      auto ref = oracle::kick(to_spinor(s, n), area, sign, eta);
      CHECK(spinor_distance(to_spinor(out, n), ref) < 1e-12);
    }
  }
}

TEST_CASE("kick direction duality") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    auto s = random_state(rng, 4, 1.0);
    auto k = an::pulse_coeffs(0.37 * (i + 1));
    auto lhs = mirror(an::apply_kick(mirror(s), k, Direction::plus(), 0.8));
    auto rhs = an::apply_kick(s, k, Direction::minus(), 0.8);
    CHECK(approx_equal(lhs, rhs, 0.0));
  }
}

TEST_CASE("pulses compose") {
  std::mt19937_64 rng(9);
  auto s = random_state(rng, 2, 0.5);
  // two pi/2 pulses along the same direction equal one pi pulse
  auto twice = an::apply_kick(an::apply_kick(s, an::pulse_coeffs(pi / 2), Direction::plus(), 0.6),
                              an::pulse_coeffs(pi / 2), Direction::plus(), 0.6);
  auto once = an::apply_kick(s, an::pulse_coeffs(pi), Direction::plus(), 0.6);
  CHECK(approx_equal(twice, once, 1e-14));
  // a pulse followed by its inverse is the identity
  auto back = an::apply_kick(an::apply_kick(s, an::pulse_coeffs(0.7), Direction::plus(), 0.6),
                             an::pulse_coeffs(-0.7), Direction::plus(), 0.6);
  CHECK(approx_equal(back, s, 1e-14));
}

TEST_CASE("free evolution rotates amplitudes") {
  auto s = an::free_evolve(SuperpositionState::coherent(Level::g, 2.0), pi / 2);
  CHECK(std::abs(s.components[0].alpha[0] - cplx(0.0, -2.0)) < 1e-15);
  auto t = an::free_evolve(SuperpositionState::coherent2d(Level::g, 1.0, 1.0), pi, Axis::y);
  CHECK(t.components[0].alpha[0] == cplx(1.0));
  CHECK(std::abs(t.components[0].alpha[1] + 1.0) < 1e-15);

  std::mt19937_64 rng(1);
  auto r = random_state(rng, 3, 0.7);
  auto ref = oracle::wait(to_spinor(r, 60), 0.9);
  CHECK(spinor_distance(to_spinor(an::free_evolve(r, 0.9), 60), ref) < 1e-13);
}

TEST_CASE("measurement probabilities are complete") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    auto s = random_state(rng, 4, 1.0);
    CHECK(an::probability(s, Level::g) + an::probability(s, Level::e) == doctest::Approx(1.0).epsilon(1e-12));
    auto m = an::measure_internal(s, Level::e);
    CHECK(norm_squared(m.projected) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(an::measure_internal(SuperpositionState::coherent(Level::g, 0.0), Level::e), ZeroNormError);
}

TEST_CASE("carrier flip and component rotation") {
  auto s = an::carrier_flip(SuperpositionState::coherent(Level::g, 0.4));
  CHECK(s.components[0].level == Level::e);
  CHECK(s.components[0].coeff == cplx(0.0, -1.0));
  auto r = an::rotate_component(SuperpositionState::coherent(Level::e, 0.4), Level::e, pi / 2);
  CHECK(an::probability(r, Level::g) == doctest::Approx(1.0));
}

TEST_CASE("wavefunctions are normalized with the expected centres") {
  const cplx alpha(0.6, -1.1);
  double nx = 0.0, mx = 0.0, np = 0.0, mp = 0.0;
  const double h = 0.01;
  for (double x = -20.0; x <= 20.0; x += h) {
    const double px = std::norm(an::position_wavefunction(alpha, x));
    const double pp = std::norm(an::momentum_wavefunction(alpha, x));
    nx += px * h;
    mx += x * px * h;
    np += pp * h;
    mp += x * pp * h;
  }
  CHECK(nx == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mx == doctest::Approx(2 * alpha.real()).epsilon(1e-10));
  CHECK(np == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mp == doctest::Approx(2 * alpha.imag()).epsilon(1e-10));
}

TEST_CASE("momentum density of a mixture") {
  auto grid = uniform_grid(10.0, 201);
  std::vector<std::pair<double, SuperpositionState>> mix{{0.5, SuperpositionState::coherent(Level::e, {0.0, 2.0})},
                                                         {0.5, SuperpositionState::coherent(Level::e, {0.0, -2.0})}};
  auto rho = an::momentum_density(mix, grid);
  CHECK_NOTHROW(validate(rho));
  CHECK(grid_trace(rho) == doctest::Approx(1.0).epsilon(1e-8));
  // only Gaussian tails couple p = 4 and p = -4
  CHECK(std::abs(rho.values(140, 60)) < 1e-7);
  auto pure = an::momentum_density(normalize(SuperpositionState{1, {mix[0].second.components[0], mix[1].second.components[0]}}), grid);
  CHECK(std::abs(pure.values(140, 60)) > 0.05);
}
