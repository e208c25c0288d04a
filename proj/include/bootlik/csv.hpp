#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bootlik {

/// Single-column CSV with a one-line header carrying the series name and,
/// when meaningful, the time step ("value dt=0.1").
void write_series_csv(const std::vector<double>& values, const std::string& path,
                      const std::string& name = "value", std::optional<double> dt = {});

struct SeriesFile {
  std::vector<double> values;
  std::string name;
  std::optional<double> dt;
};
SeriesFile read_series_csv(const std::string& path);

std::string format_double(double v);

}  // namespace bootlik
