#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "tumor/timedep.hpp"

namespace tumor {

/// Long-format snapshot stream: columns (t, r, sigma, m, E, u).
void write_snapshots_csv(const TimeSeries& series, std::ostream& os);

/// Per-step scalar series: columns (t, R, u1, dist_sigma, dist_E, dist_m).
void write_series_csv(const TimeSeries& series, std::ostream& os);

/// Initial data from CSV with a "# R0 <value>" header line and columns
/// (r, sigma, m, E) on an ascending unit grid; resampled to n+1 nodes.
InitialData read_initial_csv(const std::filesystem::path& path, int n);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

} // namespace tumor
