#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Core>

#include "wpg/patches.hpp"

namespace wpg {

// Solver input: header "d n", d rows of n values, then the r line and the
// Gamma line, all whitespace-separated.
struct SolverInput {
  Eigen::MatrixXd x;
  SeedAssignment seeds;
};

// Throws a format error naming the line on malformed input.
SolverInput read_solver_input(std::istream& in);
SolverInput read_solver_input(const std::filesystem::path& path);
void write_solver_input(std::ostream& out, const SolverInput& input);

// Plain matrix: header "rows cols" then one line per row.
Eigen::MatrixXd read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);

}  // namespace wpg
