// ionkick: command-line front end for the trapped-ion cat-state experiments.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ionkick/errors.hpp"
#include "ionkick/output.hpp"
#include "ionkick/run.hpp"

namespace {

struct Overrides {
  std::string backend;
  double eta = 0, omega_ratio = 0, delta_over_omega = 0, omega_tau = 0, wait = 0, boundary = 0, smoothing = 0,
         grid_extent = 0, leak_threshold = 0;
  int n = 0;
  std::size_t truncation = 0, ramp_steps = 0, grid_points = 0;
  std::vector<double> alphas, times;
  std::string input, timing, out;
  bool verify_ramps = false, ideal_endpoints = false;
};

void add_overrides(CLI::App* app, Overrides& o) {
  auto add = [&](const std::string& name, auto& target, const std::string& help) {
    app->add_option(name, target, help);
  };
  add("--backend", o.backend, "analytic, numeric or both");
  add("--eta", o.eta, "Lamb-Dicke parameter");
  add("--n", o.n, "intermediate pulse pairs");
  add("--omega-ratio", o.omega_ratio, "Omega/nu");
  add("--delta-over-omega", o.delta_over_omega, "adiabatic detuning span Delta/Omega");
  add("--omega-tau", o.omega_tau, "ramp duration in units of 1/Omega");
  app->add_option("--alphas", o.alphas, "ramsey phases")->delimiter(',');
  add("--input", o.input, "purity input: cat or mixture");
  add("--truncation", o.truncation, "Fock levels per mode");
  add("--ramp-steps", o.ramp_steps, "integrator steps per ramp");
  app->add_flag("--verify-ramps", o.verify_ramps, "check ramp convergence by step doubling");
  add("--leak-threshold", o.leak_threshold, "truncation leak flag threshold");
  add("--timing", o.timing, "pulse_centres or pulse_edges");
  add("--wait", o.wait, "nominal wait in 1/nu");
  add("--boundary", o.boundary, "ramsey field edge in x/x0");
  add("--smoothing", o.smoothing, "ramsey field edge width in x/x0");
  app->add_flag("--ideal-endpoints", o.ideal_endpoints, "analytic ramps use limiting angles");
  add("--grid-points", o.grid_points, "grid points per axis");
  add("--grid-extent", o.grid_extent, "grid half width");
  app->add_option("--times", o.times, "snapshot times in 1/nu")->delimiter(',');
  add("--out", o.out, "output directory");
}

nlohmann::json with_overrides(const Overrides& o, const CLI::App* sub, nlohmann::json doc) {
  auto set = [&](const char* flag, const char* section, const char* key, const nlohmann::json& value) {
    if (sub->get_option(flag)->count() == 0) return;
    if (section[0] == '\0')
      doc[key] = value;
    else
      doc[section][key] = value;
  };
  set("--backend", "", "backend", o.backend);
  set("--eta", "physics", "eta", o.eta);
  set("--n", "physics", "n", o.n);
  set("--omega-ratio", "physics", "omega_ratio", o.omega_ratio);
  set("--delta-over-omega", "physics", "delta_over_omega", o.delta_over_omega);
  set("--omega-tau", "physics", "omega_tau", o.omega_tau);
  set("--alphas", "physics", "alphas", o.alphas);
  set("--input", "physics", "input", o.input);
  set("--truncation", "numeric", "truncation", o.truncation);
  set("--ramp-steps", "numeric", "ramp_steps", o.ramp_steps);
  set("--verify-ramps", "numeric", "verify_ramps", o.verify_ramps);
  set("--leak-threshold", "numeric", "leak_threshold", o.leak_threshold);
  set("--timing", "numeric", "timing", o.timing);
  set("--wait", "numeric", "wait", o.wait);
  set("--boundary", "numeric", "boundary", o.boundary);
  set("--smoothing", "numeric", "smoothing", o.smoothing);
  set("--ideal-endpoints", "numeric", "ideal_adiabatic_endpoints", o.ideal_endpoints);
  set("--grid-points", "output", "grid_points", o.grid_points);
  set("--grid-extent", "output", "grid_extent", o.grid_extent);
  set("--times", "output", "snapshot_times", o.times);
  set("--out", "output", "directory", o.out);
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trapped-ion strong-excitation simulator"};
  app.require_subcommand(1);
  Overrides overrides;
  std::string config_path;

  std::vector<std::pair<std::string, CLI::App*>> protocol_commands;
  for (const auto& name : ionkick::protocol_names) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " protocol");
    add_overrides(sub, overrides);
    protocol_commands.push_back({name, sub});
  }
  CLI::App* run = app.add_subcommand("run", "run an experiment described by a JSON config");
  run->add_option("config", config_path, "config file")->required();
  add_overrides(run, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    nlohmann::json doc;
    const CLI::App* chosen = run;
    if (run->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw ionkick::ConfigError("", "cannot open config file '" + config_path + "'");
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ionkick::ConfigError("", std::string("malformed JSON: ") + e.what());
      }
    } else {
      for (const auto& [name, sub] : protocol_commands)
        if (sub->parsed()) {
          doc["protocol"] = name;
          chosen = sub;
        }
    }
    const ionkick::ExperimentConfig config = ionkick::parse_config(with_overrides(overrides, chosen, doc));
    const ionkick::RunManifest manifest = ionkick::run_experiment(config);
    for (const auto& f : manifest.files) std::cout << f.name << '\n';
    std::cout << "manifest.json\n";
    return 0;
  } catch (const ionkick::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ionkick::ConvergenceError& e) {
    std::cerr << "numeric failure: " << e.what() << " (steps " << e.steps() << ", infidelity " << e.infidelity()
              << ")\n";
    return 3;
  } catch (const ionkick::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
