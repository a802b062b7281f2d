#include "ionkick/run.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>

#include "ionkick/output.hpp"

namespace ionkick {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ProtocolReport run_protocol(const ExperimentConfig& c, Backend backend) {
  const RunOptions o = run_options(c, backend);
  const auto& p = c.physics;
  if (c.protocol == "cat1d-pulses") return prepare_cat_pulses(p.eta, p.n, o);
  if (c.protocol == "cat1d-adiabatic")
    return prepare_cat_adiabatic(p.eta, p.n, p.delta_over_omega, p.omega_tau, o);
  if (c.protocol == "cat2d") return prepare_cat_2d(p.eta, p.n, c.output.snapshot_times, o);
  if (c.protocol == "purity") {
    const PurityInput input = p.input == "mixture" ? PurityInput{purity_mixture(p.eta)} : PurityInput{purity_cat(p.eta)};
    return purity_probe(input, p.eta, o);
  }
  RamseyOptions r;
  r.boundary = c.numeric.boundary;
  r.smoothing = c.numeric.smoothing;
  return ramsey_scan(p.eta, p.n, p.alphas, o, r);
}

}  // namespace

std::string snapshot_file_name(Backend backend, double nu_t) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "position_%s_nut_%.6f.csv", to_string(backend), nu_t);
  return buf;
}

RunManifest run_experiment(const ExperimentConfig& config) {
  validate(config);
  RunManifest m;
  m.config = to_json(config);
  m.tool_version = tool_version;
  m.started = utc_now();

  const fs::path dir = config.output.directory;
  fs::create_directories(dir);
  std::vector<std::string> written;
  auto emit_json = [&](const std::string& name, const json& j) {
    write_text(dir / name, j.dump(2) + "\n");
    written.push_back(name);
  };

  std::vector<ProtocolReport> reports;
  for (Backend b : backends_of(config)) reports.push_back(run_protocol(config, b));

  for (const auto& r : reports) {
    const std::string tag = to_string(r.backend);
    if (config.protocol == "cat2d") {
      for (std::size_t k = 0; k < r.grids.size(); ++k) {
        const std::string name = snapshot_file_name(r.backend, r.snapshots[k + 1].time);
        emit_grid(r.grids[k], dir / name);
        written.push_back(name);
      }
    } else if (config.protocol == "ramsey") {
      emit_scan(r, dir / ("fringe_" + tag + ".csv"));
      written.push_back("fringe_" + tag + ".csv");
      const ProtocolReport* other = nullptr;
      for (const auto& o : reports)
        if (o.backend != r.backend) other = &o;
      emit_json("fringe_" + tag + "_summary.json", scan_summary(r, other));
    } else if (!r.grids.empty()) {
      emit_grid(r.grids.front(), dir / ("momentum_" + tag + ".csv"));
      written.push_back("momentum_" + tag + ".csv");
    }
    emit_json("report_" + tag + ".json", report_json(r));
  }
  if (reports.size() == 2) emit_json("comparison.json", comparison_json(compare_backends(reports[0], reports[1])));

  for (const auto& name : written)
    m.files.push_back({name, sha256_file(dir / name), fs::file_size(dir / name)});
  m.finished = utc_now();
  write_text(dir / "manifest.json", manifest_json(m).dump(2) + "\n");
  return m;
}

json manifest_json(const RunManifest& m) {
  json files = json::array();
  for (const auto& f : m.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return {{"tool", "ionkick"},
          {"tool_version", m.tool_version},
          {"started", m.started},
          {"finished", m.finished},
          {"config", m.config},
          {"files", files}};
}

}  // namespace ionkick
