#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace graphon {

// Dense row-major CSV; first line "n=<rows>", then one comma-separated row per
// line, LF endings, shortest round-trip decimal form.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);

Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace graphon
