#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bootlik {

/// Binary M x N pixel grid.
struct Lattice {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> px;  // row-major, values 0/1

  Lattice() = default;
  Lattice(int rows_, int cols_, std::uint8_t fill = 0);

  std::uint8_t at(int i, int j) const { return px[static_cast<std::size_t>(i) * cols + j]; }
  std::uint8_t& at(int i, int j) { return px[static_cast<std::size_t>(i) * cols + j]; }

  bool operator==(const Lattice&) const = default;
};

/// CSV of 0/1 values, rows x cols.
void write_lattice_csv(const Lattice& x, const std::string& path);
Lattice read_lattice_csv(const std::string& path);

/// Plain portable bitmap ("P1") text form.
void write_lattice_pbm(const Lattice& x, const std::string& path);
Lattice read_lattice_pbm(const std::string& path);

}  // namespace bootlik
