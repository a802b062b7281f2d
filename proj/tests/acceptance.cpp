// Acceptance runner: one line per criterion, nonzero exit if any fails.
// `acceptance --criterion N` runs a single criterion (used by ctest).

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ionkick/analytic.hpp"
#include "ionkick/detect.hpp"
#include "ionkick/protocols.hpp"
#include "oracle.hpp"

using namespace ionkick;
namespace an = ionkick::analytic;
namespace nm = ionkick::numeric;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED " << what << "; ";
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

RunOptions options(Backend b, double omega) {
  RunOptions o;
  o.backend = b;
  o.omega = omega;
  return o;
}

const AnyState& snapshot(const ProtocolReport& r, const std::string& label) {
  for (const auto& s : r.snapshots)
    if (s.label == label) return s.state;
  throw std::runtime_error("missing snapshot " + label);
}

oracle::Spinor to_spinor(const SuperpositionState& s, std::size_t n) {
  FockState f = fock_expand(s, {n, 1});
  oracle::Spinor out{oracle::Vec(n), oracle::Vec(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.g[k] = f.amplitude(Level::g, k);
    out.e[k] = f.amplitude(Level::e, k);
  }
  return out;
}

SuperpositionState mirror(SuperpositionState s) {
  for (auto& c : s.components) c.alpha[0] = -c.alpha[0];
  return s;
}

// 1. Kick algebra against the closed form and the Laguerre oracle.
void kick_algebra(Outcome& out) {
  double worst_symbolic = 0.0;
  double worst_fock = 0.0;
  bool all_equal = true;
  const std::vector<cplx> alphas{0.0, {0.3, -0.8}, {-1.1, 0.4}};
  for (double eta : {0.1, 0.5, 2.5}) {
    for (cplx alpha : alphas) {
      for (int sign : {+1, -1}) {
        for (const auto& k : {an::pulse_coeffs(pi / 2), an::pulse_coeffs(pi), an::pulse_coeffs(0.77),
                              an::adiabatic_coeffs({0.1, 1.3, 2.4})}) {
          const cplx beta(0.0, sign * eta);
          auto g = an::apply_kick(SuperpositionState::coherent(Level::g, alpha), k, {sign, Axis::x}, eta);
          SuperpositionState g_ref{1, {{Level::g, k.a, {alpha, 0.0}},
                                       {Level::e, k.b * std::polar(1.0, std::imag(beta * std::conj(alpha))),
                                        {alpha + beta, 0.0}}}};
          auto e = an::apply_kick(SuperpositionState::coherent(Level::e, alpha), k, {sign, Axis::x}, eta);
          SuperpositionState e_ref{1, {{Level::e, std::conj(k.a), {alpha, 0.0}},
                                       {Level::g, -std::conj(k.b) * std::polar(1.0, std::imag(-beta * std::conj(alpha))),
                                        {alpha - beta, 0.0}}}};
          all_equal = all_equal && approx_equal(g, g_ref, 1e-12) && approx_equal(e, e_ref, 1e-12);
          for (const auto& [x, y] : {std::pair{g, g_ref}, std::pair{e, e_ref}})
            worst_symbolic = std::max(worst_symbolic, 1.0 - fidelity(x, y));
        }
        // same kick in Fock space on a superposition of both levels
        SuperpositionState mix{1, {{Level::g, {0.6, 0.1}, {alpha, 0.0}}, {Level::e, {-0.2, 0.7}, {-alpha, 0.0}}}};
        const std::size_t n = 90;
        auto fock = to_spinor(an::apply_kick(mix, an::pulse_coeffs(1.3), {sign, Axis::x}, eta), n);
        auto ref = oracle::kick(to_spinor(mix, n), 1.3, sign, eta);
        for (std::size_t m = 0; m < n; ++m)
          worst_fock = std::max({worst_fock, std::abs(fock.g[m] - ref.g[m]), std::abs(fock.e[m] - ref.e[m])});
      }
    }
  }
  out.detail << "closed-form equality " << (all_equal ? "yes" : "no") << ", Fock oracle max dev " << fmt(worst_fock)
             << "; ";
  out.require(all_equal, "closed-form state equality within 1e-12");
  out.require(worst_fock <= 1e-12, "Fock oracle agreement within 1e-12");
}

// 2. Separation (2n+1) eta on the e branch.
void amplification(Outcome& out) {
  const double eta = 0.5;
  for (int n = 0; n <= 3; ++n) {
    auto r = prepare_cat_pulses(eta, n, options(Backend::analytic, 100.0));
    const auto& cat = std::get<SuperpositionState>(snapshot(r, "cat"));
    double worst = 0.0;
    for (const auto& c : cat.components) worst = std::max(worst, std::abs(std::abs(c.alpha[0]) - (2 * n + 1) * eta));
    const bool exact = approx_equal(cat, cat_state((2 * n + 1) * eta), 1e-12, true);
    out.detail << "n=" << n << " amplitude dev " << fmt(worst) << (exact ? " exact" : " inexact") << "; ";
    out.require(exact && worst <= 1e-12 && cat.components.size() == 2, "n=" + std::to_string(n) + " cat");
  }
}

// 3. Numeric-analytic fidelity of the pulse cat versus Omega/nu.
void strong_excitation(Outcome& out) {
  std::vector<double> fid;
  for (double omega : {1.0, 10.0, 100.0}) {
    auto a = prepare_cat_pulses(0.5, 2, options(Backend::analytic, omega));
    auto n = prepare_cat_pulses(0.5, 2, options(Backend::numeric, omega));
    const double f = n.succeeded ? state_fidelity(snapshot(a, "cat"), snapshot(n, "cat")) : 0.0;
    fid.push_back(f);
    out.detail << "Omega/nu=" << omega << " F=" << fmt(f) << " motion=" << fmt(n.validity.motion) << "; ";
  }
  out.require(fid[2] >= 0.98, "F >= 0.98 at Omega/nu=100");
  out.require(fid[0] < 0.9, "F < 0.9 at Omega/nu=1");
  out.require(fid[0] < fid[1] && fid[1] < fid[2], "monotone trend");
}

// 4. Purity probe: mixture, pure-cat limit and the Fock oracle.
void purity(Outcome& out) {
  for (double eta : {0.5, 1.5, 2.5, 5.0}) {
    const double pg = purity_probe(purity_mixture(eta), eta, options(Backend::analytic, 100.0)).probabilities.at("g");
    out.detail << "mixture eta=" << eta << " P_g-0.5=" << fmt(pg - 0.5) << "; ";
    out.require(std::abs(pg - 0.5) <= 1e-9, "mixture P_g = 0.5 +- 1e-9 at eta=" + fmt(eta));
  }
  for (double eta : {2.5, 5.0}) {
    const double pg = purity_probe(purity_cat(eta), eta, options(Backend::analytic, 100.0)).probabilities.at("g");
    out.detail << "cat eta=" << eta << " P_g=" << fmt(pg) << "; ";
    out.require(std::abs(pg - 0.75) <= 0.01, "cat P_g -> 0.75 at eta=" + fmt(eta));
  }
  double worst = 0.0;
  for (double eta : {0.5, 1.5, 2.5}) {
    // the second kick reaches |alpha| = 3 eta, so the oracle needs many levels
    const std::size_t levels = 200;
    oracle::Vec cat(levels);
    for (std::size_t n = 0; n < levels; ++n)
      cat[n] = oracle::coherent_amplitude(eta, n) + oracle::coherent_amplitude(-eta, n);
    const double ref_cat = oracle::purity_probe_pg(cat, eta, pi / 2);
    const double ref_mix = 0.5 * oracle::purity_probe_pg(oracle::coherent(eta, levels), eta, pi / 2) +
                           0.5 * oracle::purity_probe_pg(oracle::coherent(-eta, levels), eta, pi / 2);
    const double pc = purity_probe(purity_cat(eta), eta, options(Backend::analytic, 100.0)).probabilities.at("g");
    const double pm = purity_probe(purity_mixture(eta), eta, options(Backend::analytic, 100.0)).probabilities.at("g");
    worst = std::max({worst, std::abs(pc - ref_cat), std::abs(pm - ref_mix)});
  }
  out.detail << "Fock oracle max dev " << fmt(worst) << "; ";
  out.require(worst <= 1e-6, "finite-eta agreement with the Fock oracle");
}

// 5. Numeric Ramsey fringes at eta = 2.5.
void ramsey(Outcome& out) {
  std::vector<double> alphas;
  for (int k = 0; k < 21; ++k) alphas.push_back(2 * pi * k / 20);
  std::vector<double> vis;
  double deviation = 0.0;
  for (double omega : {100.0, 10.0, 4.0, 1.0}) {
    auto r = ramsey_scan(2.5, 0, alphas, options(Backend::numeric, omega));
    vis.push_back(r.diagnostics.at("visibility"));
    if (omega == 100.0) deviation = r.diagnostics.at("max_deviation_cos2");
    out.detail << "Omega/nu=" << omega << " V=" << fmt(vis.back()) << "; ";
  }
  out.detail << "max |P_e - cos^2(a/2)| at 100 = " << fmt(deviation) << "; ";
  out.require(deviation <= 0.02, "max deviation <= 0.02");
  out.require(vis[0] >= 0.95, "visibility >= 0.95");
  out.require(vis[0] > vis[1] && vis[1] > vis[2] && vis[2] > vis[3], "visibility decreasing with Omega/nu");
}

// 6. Adiabatic passage at Delta = 10 Omega, Omega/nu = 100.
void adiabatic(Outcome& out) {
  const double omega = 100.0, eta = 0.5;
  const std::vector<double> taus{40.0, 50.0, 60.0, 70.0};
  // Branch split of one ramp (-, -Delta -> 0) from |g,0>: compared with
  // (|g,0> - |e,-i eta>)/sqrt2. The transfer completes at the end of the ramp.
  const SuperpositionState split =
      normalize(SuperpositionState{1, {{Level::g, 1.0, {cplx(0.0), 0.0}}, {Level::e, -1.0, {cplx(0.0, -eta), 0.0}}}});
  double best_split = 0.0;
  EngineSettings s;
  s.omega = omega;
  s.eta = eta;
  for (double wt : taus) {
    auto engine = make_engine(Backend::numeric, SuperpositionState::coherent(Level::g, 0.0), s, 2 * eta);
    engine->ramp(Direction::minus(), -10.0 * omega, 0.0, wt / omega);
    const double f = state_fidelity(engine->snapshot(), AnyState{split});
    best_split = std::max(best_split, f);
    out.detail << "split F(" << wt << ")=" << fmt(f) << " ";
  }
  out.detail << "; ";
  out.require(best_split >= 0.98, "branch split fidelity >= 0.98 for at least one tau");

  bool four = false, centre = false;
  for (double wt : taus) {
    auto r = prepare_cat_adiabatic(eta, 2, 10.0, wt, options(Backend::numeric, omega));
    four = four || r.diagnostics["four_peak"] == 1.0;
    centre = centre || r.diagnostics["central_peak"] == 1.0;
    out.detail << "tau=" << wt << " four=" << r.diagnostics["four_peak"] << " centre=" << r.diagnostics["central_peak"]
               << " catF=" << fmt(r.diagnostics["cat_fidelity"]) << " motion=" << fmt(r.validity.motion) << "; ";
  }
  out.require(four, "four-peak structure for at least one tau");
  out.require(centre, "central peak for at least one tau");
}

// 7. Circulation of the 2D cat.
void circulation(Outcome& out) {
  const double radius = 2.0 * 5 * 0.5;
  const std::vector<double> times = default_snapshot_times();
  for (Backend b : {Backend::analytic, Backend::numeric}) {
    auto r = prepare_cat_2d(0.5, 2, times, options(b, 300.0));
    if (r.grids.size() != times.size()) {
      out.require(false, std::string(to_string(b)) + " snapshots");
      continue;
    }
    std::vector<std::vector<Centroid>> c;
    for (const auto& g : r.grids) c.push_back(packet_centroids(g));
    double worst = 0.0;
    for (std::size_t k = 1; k <= 3; ++k)
      for (const auto& p : c[k]) worst = std::max(worst, std::abs(std::hypot(p.x, p.y) - radius) / radius);
    // follow each packet from t = 0 to pi/4 by nearest centroid
    int turn[2];
    for (int i = 0; i < 2; ++i) {
      const auto& p0 = c[0][static_cast<std::size_t>(i)];
      const Centroid* best = &c[1][0];
      for (const auto& q : c[1])
        if (std::hypot(q.x - p0.x, q.y - p0.y) < std::hypot(best->x - p0.x, best->y - p0.y)) best = &q;
      const double cross = p0.x * best->y - p0.y * best->x;
      turn[i] = cross > 0 ? +1 : -1;
    }
    const bool opposite = turn[0] == -turn[1];
    out.detail << to_string(b) << " radius dev " << fmt(worst) << (opposite ? " opposite" : " same") << " direction; ";
    out.require(worst <= 0.1, std::string(to_string(b)) + " radius within 10%");
    out.require(opposite, std::string(to_string(b)) + " opposite angular directions");
    if (b == Backend::analytic) {
      const double d = (r.grids.back().values - r.grids.front().values).cwiseAbs().maxCoeff();
      out.detail << "analytic |P(40pi) - P(0)| max " << fmt(d) << "; ";
      out.require(d <= 1e-6, "40 pi matches 0");
    }
  }
}

// 8. Property suites.
void properties(Outcome& out) {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // norm conservation through every numeric operation
  double norm_dev = 0.0;
  double unitarity = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    SuperpositionState s{1, {}};
    for (int k = 0; k < 3; ++k)
      s.components.push_back({k % 2 ? Level::e : Level::g, {gauss(rng), gauss(rng)}, {0.5 * cplx(gauss(rng), gauss(rng)), 0.0}});
    EngineSettings es;
    es.omega = 1.0 + 99.0 * uni(rng);
    es.eta = 0.2 + uni(rng);
    auto engine = make_engine(Backend::numeric, normalize(s), es, 4.0);
    engine->pulse(Direction::plus(), 1.7);
    engine->wait(0.3);
    engine->ramp(Direction::minus(), -5.0 * es.omega, 5.0 * es.omega, 20.0 / es.omega);
    engine->rotate_half_space(0.9, nm::HalfSpace::right, {0.3, 0.2});
    engine->carrier_flip();
    norm_dev = std::max(norm_dev, std::abs(norm_squared(std::get<FockState>(engine->snapshot())) - 1.0));
    nm::OperatorSet ops(50);
    nm::Matrix u = nm::propagator(nm::build_hamiltonian({es.omega, gauss(rng), es.eta, Direction::plus()}, ops), 0.4);
    unitarity = std::max(unitarity, (u.adjoint() * u - nm::Matrix::Identity(100, 100)).cwiseAbs().maxCoeff());
  }
  out.detail << "norm dev " << fmt(norm_dev) << ", U^dag U dev " << fmt(unitarity) << "; ";
  out.require(norm_dev <= 1e-9 && unitarity <= 1e-9, "unitarity and norm conservation");

  // parity of prepared cats
  double odd = 0.0;
  for (int n = 0; n <= 3; ++n) {
    auto r = prepare_cat_pulses(0.5, n, options(Backend::analytic, 100.0));
    FockState f = fock_expand(std::get<SuperpositionState>(snapshot(r, "cat")), {120, 1});
    for (std::size_t k = 1; k < 120; k += 2) odd = std::max(odd, std::abs(f.amplitude(Level::e, k)));
  }
  out.detail << "odd Fock max " << fmt(odd) << "; ";
  out.require(odd < 1e-10, "cat parity");

  // direction duality: a kick along -x is the mirror image of a kick along +x
  bool dual = true;
  for (int trial = 0; trial < 20; ++trial) {
    SuperpositionState s{1, {}};
    for (int k = 0; k < 3; ++k)
      s.components.push_back({k % 2 ? Level::e : Level::g, {gauss(rng), gauss(rng)}, {cplx(gauss(rng), gauss(rng)), 0.0}});
    const auto k = an::pulse_coeffs(3.0 * uni(rng));
    const double eta = 2.0 * uni(rng);
    dual = dual && approx_equal(mirror(an::apply_kick(mirror(s), k, Direction::plus(), eta)),
                                an::apply_kick(s, k, Direction::minus(), eta), 0.0);
  }
  nm::OperatorSet ops(60);
  nm::Matrix h_minus = nm::build_hamiltonian({40.0, 0.3, 0.7, Direction::minus()}, ops);
  nm::Matrix h_plus = nm::build_hamiltonian({40.0, 0.3, -0.7, Direction::plus()}, ops);
  const bool dual_numeric = ops.kick(-0.7) == nm::Matrix(ops.kick(0.7).conjugate()) && h_minus == h_plus;
  out.detail << "duality " << (dual && dual_numeric ? "exact" : "broken") << "; ";
  out.require(dual && dual_numeric, "direction duality");

  // momentum grids of both backends at eta = 0.5, N = 60, in the strong-drive limit
  RunOptions strong = options(Backend::numeric, 1e7);
  strong.numeric.truncation = 60;
  auto num = prepare_cat_pulses(0.5, 2, strong);
  auto ana = prepare_cat_pulses(0.5, 2, options(Backend::analytic, 1e7));
  const double grid_dev = compare_backends(ana, num).max_grid_deviation;
  const auto& cat = std::get<SuperpositionState>(snapshot(ana, "cat"));
  const auto grid = uniform_grid(default_grid_extent(2.5), default_grid_points);
  const double repr_dev = (an::momentum_density(cat, grid).values -
                           nm::fock_to_momentum_grid(fock_expand(cat, {60, 1}), grid).values)
                              .cwiseAbs()
                              .maxCoeff();
  out.detail << "grid dev (Omega/nu=1e7) " << fmt(grid_dev) << ", same state " << fmt(repr_dev) << "; ";
  out.require(grid_dev <= 1e-6 && repr_dev <= 1e-6, "backend momentum-grid agreement");

  // truncation convergence
  RunOptions nopt = options(Backend::numeric, 100.0);
  const double sens_cat = truncation_sensitivity([](const RunOptions& o) { return prepare_cat_pulses(0.5, 2, o); },
                                                 nopt, default_truncation(3.0));
  const double sens_purity = truncation_sensitivity(
      [](const RunOptions& o) { return purity_probe(purity_cat(1.5), 1.5, o); }, nopt, default_truncation(3.0));
  out.detail << "truncation sensitivity " << fmt(sens_cat) << ", " << fmt(sens_purity) << "; ";
  out.require(sens_cat < 1e-6 && sens_purity < 1e-6, "truncation convergence");

  // measurement completeness
  double completeness = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    SuperpositionState s{1, {}};
    for (int k = 0; k < 4; ++k)
      s.components.push_back({k % 2 ? Level::e : Level::g, {gauss(rng), gauss(rng)}, {cplx(gauss(rng), gauss(rng)), 0.0}});
    s = normalize(s);
    for (Backend b : {Backend::analytic, Backend::numeric}) {
      EngineSettings es;
      auto engine = make_engine(b, s, es, max_amplitude(s) + 1.0);
      engine->pulse(Direction::plus(), 1.0);
      completeness = std::max(completeness, std::abs(engine->probability(Level::g) + engine->probability(Level::e) - 1.0));
    }
  }
  out.detail << "P_g + P_e - 1 max " << fmt(completeness) << "; ";
  out.require(completeness <= 1e-9, "measurement completeness");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{{1, "kick algebra exactness", kick_algebra},
                                        {2, "amplification law", amplification},
                                        {3, "strong-excitation convergence", strong_excitation},
                                        {4, "purity discrimination", purity},
                                        {5, "Ramsey fringes", ramsey},
                                        {6, "adiabatic passage", adiabatic},
                                        {7, "2D circulation", circulation},
                                        {8, "property suites", properties}};
  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %d %s (%.1fs): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, secs, out.detail.str().c_str());
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
