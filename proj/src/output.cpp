#include "ionkick/output.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "ionkick/detect.hpp"
#include "ionkick/errors.hpp"

namespace ionkick {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "': " + std::strerror(errno));
  out << text;
  out.close();
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "': " + std::strerror(errno));
}

void emit_grid(const DensityGrid& grid, const std::filesystem::path& path) {
  validate(grid);
  std::ostringstream os;
  const bool density = grid.kind == GridKind::density_operator;
  os << "# kind=" << (density ? "density_operator" : "probability") << '\n';
  os << "# row_axis=" << grid.rows.name << '\n' << "# row_unit=" << grid.rows.unit << '\n';
  os << "# col_axis=" << grid.cols.name << '\n' << "# col_unit=" << grid.cols.unit << '\n';
  for (const auto& [k, v] : grid.metadata) os << "# " << k << '=' << v << '\n';
  os << grid.rows.name << ',' << grid.cols.name << (density ? ",re,im" : ",value") << '\n';
  for (std::size_t i = 0; i < grid.rows.values.size(); ++i)
    for (std::size_t j = 0; j < grid.cols.values.size(); ++j) {
      const cplx v = grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      os << format_double(grid.rows.values[i]) << ',' << format_double(grid.cols.values[j]) << ','
         << format_double(v.real());
      if (density) os << ',' << format_double(v.imag());
      os << '\n';
    }
  write_text(path, os.str());
}

DensityGrid parse_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "': " + std::strerror(errno));
  DensityGrid g;
  std::string line;
  bool header_done = false;
  std::vector<double> rows, cols, re, im;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "kind")
        g.kind = value == "probability" ? GridKind::probability : GridKind::density_operator;
      else if (key == "row_axis")
        g.rows.name = value;
      else if (key == "row_unit")
        g.rows.unit = value;
      else if (key == "col_axis")
        g.cols.name = value;
      else if (key == "col_unit")
        g.cols.unit = value;
      else
        g.metadata[key] = value;
      continue;
    }
    if (!header_done) {
      header_done = true;  // column-name line
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<double> f;
    while (std::getline(ls, field, ',')) f.push_back(std::strtod(field.c_str(), nullptr));
    const std::size_t want = g.kind == GridKind::density_operator ? 4 : 3;
    if (f.size() != want) throw ShapeError("parse_grid: malformed row '" + line + "'");
    if (rows.empty() || f[0] != rows.back()) rows.push_back(f[0]);
    if (rows.size() == 1) cols.push_back(f[1]);
    re.push_back(f[2]);
    im.push_back(want == 4 ? f[3] : 0.0);
  }
  if (rows.empty() || re.size() != rows.size() * cols.size()) throw ShapeError("parse_grid: incomplete grid");
  g.rows.values = rows;
  g.cols.values = cols;
  g.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < re.size(); ++k)
    g.values(static_cast<Eigen::Index>(k / cols.size()), static_cast<Eigen::Index>(k % cols.size())) =
        cplx(re[k], im[k]);
  validate(g);
  return g;
}

void emit_scan(const ProtocolReport& report, const std::filesystem::path& path) {
  if (!report.scan || report.scan->x.empty()) throw std::invalid_argument("emit_scan: report has no scan points");
  std::ostringstream os;
  os << "# protocol=" << report.protocol << '\n' << "# backend=" << to_string(report.backend) << '\n';
  for (const auto& [k, v] : report.parameters) os << "# " << k << '=' << format_double(v) << '\n';
  os << report.scan->parameter << ',' << report.scan->observable << '\n';
  for (std::size_t i = 0; i < report.scan->x.size(); ++i)
    os << format_double(report.scan->x[i]) << ',' << format_double(report.scan->y[i]) << '\n';
  write_text(path, os.str());
}

namespace {

json validity_json(const Validity& v) {
  return {{"motion", v.motion},
          {"adiabaticity", v.adiabaticity},
          {"laser_time", v.laser_time},
          {"max_mean_phonons", v.max_mean_phonons},
          {"leak", v.leak},
          {"under_truncated", v.under_truncated}};
}

}  // namespace

json scan_summary(const ProtocolReport& report, const ProtocolReport* other) {
  if (!report.scan || report.scan->x.empty()) throw std::invalid_argument("scan_summary: report has no scan points");
  json j = {{"protocol", report.protocol},
            {"backend", to_string(report.backend)},
            {"points", report.scan->x.size()},
            {"visibility", visibility(report.scan->y)},
            {"validity", validity_json(report.validity)}};
  if (report.diagnostics.count("max_deviation_cos2"))
    j["max_deviation_cos2"] = report.diagnostics.at("max_deviation_cos2");
  if (other) {
    const BackendComparison c = compare_backends(report, *other);
    j["compared_with"] = to_string(other->backend);
    j["max_delta_" + report.scan->observable] = c.max_scan_delta;
  }
  return j;
}

json report_json(const ProtocolReport& r) {
  json j = {{"protocol", r.protocol},
            {"backend", to_string(r.backend)},
            {"succeeded", r.succeeded},
            {"parameters", r.parameters},
            {"probabilities", r.probabilities},
            {"diagnostics", r.diagnostics},
            {"validity", validity_json(r.validity)},
            {"warnings", r.warnings}};
  json snaps = json::array();
  for (const auto& s : r.snapshots) snaps.push_back({{"label", s.label}, {"nu_t", s.time}});
  j["snapshots"] = snaps;
  json grids = json::array();
  for (const auto& g : r.grids) {
    json entry = {{"label", g.metadata.count("label") ? g.metadata.at("label") : ""},
                  {"trace", grid_trace(g)}};
    if (g.kind == GridKind::probability) {
      json packets = json::array();
      for (const auto& c : packet_centroids(g)) packets.push_back({c.x, c.y});
      entry["packet_centroids"] = packets;
    }
    grids.push_back(entry);
  }
  j["grids"] = grids;
  if (r.scan) j["scan"] = {{"parameter", r.scan->parameter}, {"observable", r.scan->observable},
                           {"x", r.scan->x}, {"y", r.scan->y}};
  return j;
}

json comparison_json(const BackendComparison& c) {
  json fid = json::object();
  for (const auto& [label, f] : c.snapshot_fidelities) fid[label] = f;
  return {{"protocol", c.protocol},
          {"snapshot_fidelities", fid},
          {"max_grid_deviation", c.max_grid_deviation},
          {"probability_deltas", c.probability_deltas},
          {"max_scan_delta", c.max_scan_delta}};
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "': " + std::strerror(errno));
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 15];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

}  // namespace ionkick
