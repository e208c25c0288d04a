#include "bootlik/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bootlik {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_series_csv(const std::vector<double>& values, const std::string& path,
                      const std::string& name, std::optional<double> dt) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_series_csv: cannot open " + path);
  out << name;
  if (dt) out << " dt=" << format_double(*dt);
  out << '\n';
  for (double v : values) out << format_double(v) << '\n';
}

SeriesFile read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_series_csv: cannot open " + path);
  SeriesFile f;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_series_csv: empty file " + path);

  const auto sp = line.find(' ');
  f.name = line.substr(0, sp);
  if (sp != std::string::npos) {
    const auto eq = line.find("dt=", sp);
    if (eq != std::string::npos) f.dt = std::stod(line.substr(eq + 3));
  }

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    f.values.push_back(std::stod(line));
  }
  if (f.values.empty()) throw std::runtime_error("read_series_csv: no values in " + path);
  return f;
}

}  // namespace bootlik
