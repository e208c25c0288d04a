#include "bootlik/lattice.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bootlik {

Lattice::Lattice(int rows_, int cols_, std::uint8_t fill)
    : rows(rows_), cols(cols_) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("Lattice: dimensions must be >= 2");
  if (fill > 1) throw std::invalid_argument("Lattice: values are binary");
  px.assign(static_cast<std::size_t>(rows) * cols, fill);
}

void write_lattice_csv(const Lattice& x, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_lattice_csv: cannot open " + path);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) {
      if (j) out << ',';
      out << static_cast<int>(x.at(i, j));
    }
    out << '\n';
  }
}

Lattice read_lattice_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_lattice_csv: cannot open " + path);
  std::vector<std::vector<std::uint8_t>> grid;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::uint8_t> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell != "0" && cell != "1") {
        throw std::runtime_error("read_lattice_csv: non-binary cell '" + cell + "'");
      }
      row.push_back(cell == "1" ? 1 : 0);
    }
    if (!grid.empty() && row.size() != grid.front().size()) {
      throw std::runtime_error("read_lattice_csv: ragged rows");
    }
    grid.push_back(std::move(row));
  }
  if (grid.size() < 2 || grid.front().size() < 2) {
    throw std::runtime_error("read_lattice_csv: lattice must be at least 2x2");
  }
  Lattice x(static_cast<int>(grid.size()), static_cast<int>(grid.front().size()));
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) x.at(i, j) = grid[i][j];
  }
  return x;
}

void write_lattice_pbm(const Lattice& x, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_lattice_pbm: cannot open " + path);
  out << "P1\n" << x.cols << ' ' << x.rows << '\n';
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) {
      if (j) out << ' ';
      out << static_cast<int>(x.at(i, j));
    }
    out << '\n';
  }
}

Lattice read_lattice_pbm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_lattice_pbm: cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P1") throw std::runtime_error("read_lattice_pbm: expected magic P1");
  int cols = 0, rows = 0;
  in >> cols >> rows;
  if (rows < 2 || cols < 2) throw std::runtime_error("read_lattice_pbm: lattice must be at least 2x2");
  Lattice x(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      int v = -1;
      in >> v;
      if (v != 0 && v != 1) throw std::runtime_error("read_lattice_pbm: non-binary pixel");
      x.at(i, j) = static_cast<std::uint8_t>(v);
    }
  }
  return x;
}

}  // namespace bootlik
