// output.hpp: CSV and JSON serialization of grids, scans and reports.
//
// Grid CSV: "# key=value" header lines (kind, axes, units, metadata), one
// column-name line, then one row per grid point with values printed to 17
// significant digits:  p,p_prime,re,im  or  x,y,value.
#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ionkick/protocols.hpp"

namespace ionkick {

std::string format_double(double x);

void emit_grid(const DensityGrid& grid, const std::filesystem::path& path);
DensityGrid parse_grid(const std::filesystem::path& path);

// "alpha,P_e" rows of the report's scan. Throws on a missing or empty scan.
void emit_scan(const ProtocolReport& report, const std::filesystem::path& path);

// Visibility, validity and, when a second backend is given, max |delta P_e|.
nlohmann::json scan_summary(const ProtocolReport& report, const ProtocolReport* other = nullptr);

nlohmann::json report_json(const ProtocolReport& report);
nlohmann::json comparison_json(const BackendComparison& comparison);

// Writes text, throwing std::runtime_error with the OS message on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace ionkick
