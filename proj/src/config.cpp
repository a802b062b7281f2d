#include "ionkick/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "ionkick/errors.hpp"

namespace ionkick {

using nlohmann::json;

ExperimentConfig default_config(const std::string& protocol) {
  ExperimentConfig c;
  c.protocol = protocol;
  if (protocol == "cat2d") {
    c.physics.omega_ratio = 300.0;
    c.output.snapshot_times = default_snapshot_times();
  } else if (protocol == "purity") {
    c.physics.eta = 2.5;
    c.physics.n = 0;
  } else if (protocol == "ramsey") {
    c.physics.eta = 2.5;
    c.physics.n = 0;
    for (int k = 0; k <= 20; ++k) c.physics.alphas.push_back(2.0 * pi * k / 20.0);
  }
  return c;
}

namespace {

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError(path.empty() ? k : path + "." + k, "unknown key");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_number(const json& obj, const std::string& path, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

long long get_integer(const json& obj, const std::string& path, const std::string& key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<long long>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v.get<bool>();
}

std::vector<double> get_numbers(const json& obj, const std::string& path, const std::string& key,
                                const std::vector<double>& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(join(path, key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::size_t get_count(const json& obj, const std::string& path, const std::string& key, std::size_t fallback) {
  const long long v = get_integer(obj, path, key, static_cast<long long>(fallback));
  if (v < 0) throw ConfigError(join(path, key), "must be non-negative");
  return static_cast<std::size_t>(v);
}

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, "", {"protocol", "backend", "physics", "numeric", "output"});
  const std::string protocol = get_string(doc, "", "protocol", "");
  if (std::find(protocol_names.begin(), protocol_names.end(), protocol) == protocol_names.end())
    throw ConfigError("protocol", protocol.empty() ? "missing protocol name" : "unknown protocol '" + protocol + "'");
  ExperimentConfig c = default_config(protocol);
  c.backend = get_string(doc, "", "backend", c.backend);

  if (doc.contains("physics")) {
    const json& p = doc.at("physics");
    check_keys(p, "physics", {"eta", "n", "omega_ratio", "delta_over_omega", "omega_tau", "alphas", "input"});
    c.physics.eta = get_number(p, "physics", "eta", c.physics.eta);
    const long long n = get_integer(p, "physics", "n", c.physics.n);
    require(n >= 0 && n <= 1000, "physics.n", "must be a non-negative integer");
    c.physics.n = static_cast<int>(n);
    c.physics.omega_ratio = get_number(p, "physics", "omega_ratio", c.physics.omega_ratio);
    c.physics.delta_over_omega = get_number(p, "physics", "delta_over_omega", c.physics.delta_over_omega);
    c.physics.omega_tau = get_number(p, "physics", "omega_tau", c.physics.omega_tau);
    c.physics.alphas = get_numbers(p, "physics", "alphas", c.physics.alphas);
    c.physics.input = get_string(p, "physics", "input", c.physics.input);
  }
  if (doc.contains("numeric")) {
    const json& q = doc.at("numeric");
    check_keys(q, "numeric", {"truncation", "ramp_steps", "verify_ramps", "leak_threshold", "timing", "wait",
                              "boundary", "smoothing", "ideal_adiabatic_endpoints"});
    c.numeric.truncation = get_count(q, "numeric", "truncation", c.numeric.truncation);
    c.numeric.ramp_steps = get_count(q, "numeric", "ramp_steps", c.numeric.ramp_steps);
    c.numeric.verify_ramps = get_bool(q, "numeric", "verify_ramps", c.numeric.verify_ramps);
    c.numeric.leak_threshold = get_number(q, "numeric", "leak_threshold", c.numeric.leak_threshold);
    c.numeric.timing = get_string(q, "numeric", "timing", c.numeric.timing);
    c.numeric.wait = get_number(q, "numeric", "wait", c.numeric.wait);
    if (q.contains("boundary")) c.numeric.boundary = get_number(q, "numeric", "boundary", 0.0);
    c.numeric.smoothing = get_number(q, "numeric", "smoothing", c.numeric.smoothing);
    c.numeric.ideal_adiabatic_endpoints =
        get_bool(q, "numeric", "ideal_adiabatic_endpoints", c.numeric.ideal_adiabatic_endpoints);
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, "output", {"grid_points", "grid_extent", "snapshot_times", "directory"});
    c.output.grid_points = get_count(o, "output", "grid_points", c.output.grid_points);
    c.output.grid_extent = get_number(o, "output", "grid_extent", c.output.grid_extent);
    c.output.snapshot_times = get_numbers(o, "output", "snapshot_times", c.output.snapshot_times);
    c.output.directory = get_string(o, "output", "directory", c.output.directory);
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

void validate(const ExperimentConfig& c) {
  require(std::find(protocol_names.begin(), protocol_names.end(), c.protocol) != protocol_names.end(), "protocol",
          c.protocol.empty() ? "missing protocol name" : "unknown protocol '" + c.protocol + "'");
  require(c.backend == "analytic" || c.backend == "numeric" || c.backend == "both", "backend",
          "must be analytic, numeric or both");
  require(positive(c.physics.eta), "physics.eta", "must be positive and finite");
  require(c.physics.n >= 0, "physics.n", "must be non-negative");
  require(positive(c.physics.omega_ratio), "physics.omega_ratio", "must be positive and finite");
  require(positive(c.physics.delta_over_omega), "physics.delta_over_omega", "must be positive and finite");
  require(positive(c.physics.omega_tau), "physics.omega_tau", "must be positive and finite");
  for (std::size_t i = 0; i < c.physics.alphas.size(); ++i)
    require(std::isfinite(c.physics.alphas[i]), "physics.alphas[" + std::to_string(i) + "]", "must be finite");
  if (c.protocol == "ramsey") require(!c.physics.alphas.empty(), "physics.alphas", "needs at least one phase");
  require(c.physics.input == "cat" || c.physics.input == "mixture", "physics.input", "must be cat or mixture");
  require(c.numeric.truncation == 0 || c.numeric.truncation >= 2, "numeric.truncation", "must be 0 or at least 2");
  require(c.numeric.ramp_steps == 0 || c.numeric.ramp_steps >= 100, "numeric.ramp_steps",
          "must be 0 or at least 100");
  require(positive(c.numeric.leak_threshold), "numeric.leak_threshold", "must be positive");
  require(c.numeric.timing == "pulse_centres" || c.numeric.timing == "pulse_edges", "numeric.timing",
          "must be pulse_centres or pulse_edges");
  require(std::isfinite(c.numeric.wait) && c.numeric.wait >= 0.0, "numeric.wait", "must be finite and >= 0");
  if (c.numeric.boundary) require(std::isfinite(*c.numeric.boundary), "numeric.boundary", "must be finite");
  require(std::isfinite(c.numeric.smoothing) && c.numeric.smoothing >= 0.0, "numeric.smoothing",
          "must be finite and >= 0");
  require(c.output.grid_points >= 2, "output.grid_points", "must be at least 2");
  require(std::isfinite(c.output.grid_extent) && c.output.grid_extent >= 0.0, "output.grid_extent",
          "must be finite and >= 0");
  for (std::size_t i = 0; i < c.output.snapshot_times.size(); ++i) {
    const double t = c.output.snapshot_times[i];
    const std::string path = "output.snapshot_times[" + std::to_string(i) + "]";
    require(std::isfinite(t) && t >= 0.0, path, "must be finite and >= 0");
    require(i == 0 || t >= c.output.snapshot_times[i - 1], path, "times must be ascending");
  }
  if (c.protocol == "cat2d") require(!c.output.snapshot_times.empty(), "output.snapshot_times", "needs at least one time");
  require(!c.output.directory.empty(), "output.directory", "must not be empty");
}

json to_json(const ExperimentConfig& c) {
  json numeric = {{"truncation", c.numeric.truncation},
                  {"ramp_steps", c.numeric.ramp_steps},
                  {"verify_ramps", c.numeric.verify_ramps},
                  {"leak_threshold", c.numeric.leak_threshold},
                  {"timing", c.numeric.timing},
                  {"wait", c.numeric.wait},
                  {"smoothing", c.numeric.smoothing},
                  {"ideal_adiabatic_endpoints", c.numeric.ideal_adiabatic_endpoints}};
  if (c.numeric.boundary) numeric["boundary"] = *c.numeric.boundary;
  return {{"protocol", c.protocol},
          {"backend", c.backend},
          {"physics",
           {{"eta", c.physics.eta},
            {"n", c.physics.n},
            {"omega_ratio", c.physics.omega_ratio},
            {"delta_over_omega", c.physics.delta_over_omega},
            {"omega_tau", c.physics.omega_tau},
            {"alphas", c.physics.alphas},
            {"input", c.physics.input}}},
          {"numeric", numeric},
          {"output",
           {{"grid_points", c.output.grid_points},
            {"grid_extent", c.output.grid_extent},
            {"snapshot_times", c.output.snapshot_times},
            {"directory", c.output.directory}}}};
}

std::vector<Backend> backends_of(const ExperimentConfig& c) {
  if (c.backend == "both") return {Backend::analytic, Backend::numeric};
  return {parse_backend(c.backend)};
}

RunOptions run_options(const ExperimentConfig& c, Backend backend) {
  RunOptions o;
  o.backend = backend;
  o.omega = c.physics.omega_ratio;
  o.numeric.truncation = c.numeric.truncation;
  o.numeric.ramp_steps = c.numeric.ramp_steps;
  o.numeric.verify_ramps = c.numeric.verify_ramps;
  o.numeric.leak_threshold = c.numeric.leak_threshold;
  o.timing = c.numeric.timing == "pulse_edges" ? WaitTiming::pulse_edges : WaitTiming::pulse_centres;
  o.wait = c.numeric.wait;
  o.grid_points = c.output.grid_points;
  o.grid_extent = c.output.grid_extent;
  o.ideal_adiabatic_endpoints = c.numeric.ideal_adiabatic_endpoints;
  return o;
}

}  // namespace ionkick
