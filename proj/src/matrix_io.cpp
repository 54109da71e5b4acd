#include "graphon/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace graphon {

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;
  return fmt::format("{}", value);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  std::string buffer = fmt::format("n={}\n", m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) buffer.push_back(',');
      buffer += format_double(m(i, j));
    }
    buffer.push_back('\n');
  }
  out << buffer;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrix_csv(out, m);
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("n=", 0) != 0)
    throw std::runtime_error("matrix CSV: missing 'n=<rows>' header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const long rows = std::stol(line.substr(2));
  if (rows < 0) throw std::runtime_error("matrix CSV: negative row count");
  std::vector<std::vector<double>> data;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      row.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::runtime_error("matrix CSV: bad cell '" + cell + "'");
    }
    data.push_back(std::move(row));
  }
  if (static_cast<long>(data.size()) != rows)
    throw std::runtime_error("matrix CSV: header says " + std::to_string(rows) + " rows, found " +
                             std::to_string(data.size()));
  const std::size_t cols = data.empty() ? 0 : data.front().size();
  Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(cols));
  for (long i = 0; i < rows; ++i) {
    if (data[i].size() != cols) throw std::runtime_error("matrix CSV: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, static_cast<Eigen::Index>(j)) = data[i][j];
  }
  return m;
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrix_csv(in);
}

}  // namespace graphon
