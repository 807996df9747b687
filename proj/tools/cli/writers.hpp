// writers.hpp: CSV/JSON rendering with platform-stable number text

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dualseries/numerics.hpp"

namespace dualseries::cli {

// Shortest text that parses back to the same double.
std::string format_double(double x);

// Parses a whole string as a finite double; false on trailing junk or overflow.
bool parse_double(const std::string& text, double& out);

// "# config-hash: <hex>", header "t,u00_re,u00_im,...", then one row per grid point.
std::string matrix_path_csv(const std::string& hash, const TimeGrid& grid, const std::vector<CMat>& path,
                            const std::string& prefix = "u");

// Writes `content` to `path` in one go; throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace dualseries::cli
