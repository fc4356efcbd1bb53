#include <sstream>

#include <gtest/gtest.h>

#include "wpg/error.hpp"
#include "wpg/matrix_io.hpp"

namespace wpg {
namespace {

std::string format_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_solver_input(in);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFormat);
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

TEST(MatrixIo, ReadsSolverInput) {
  std::istringstream in("2 3\n1 2 3\n4 5 6\n1 0 0\n1 1 0\n");
  const SolverInput s = read_solver_input(in);
  EXPECT_EQ(s.x.rows(), 2);
  EXPECT_EQ(s.x(1, 2), 6.0);
  EXPECT_EQ(s.seeds.r[0], 1.0);
  EXPECT_EQ(s.seeds.gamma[1], 1.0);
  EXPECT_EQ(s.seeds.gamma[2], 0.0);
}

TEST(MatrixIo, RoundTripIsExact) {
  SolverInput s;
  s.x = Eigen::MatrixXd::Random(4, 5);
  s.seeds.r = Eigen::VectorXd::Zero(5);
  s.seeds.gamma = Eigen::VectorXd::Ones(5);
  s.seeds.r[3] = 1.0;
  std::stringstream io;
  write_solver_input(io, s);
  const SolverInput back = read_solver_input(io);
  EXPECT_EQ(back.x, s.x);
  EXPECT_EQ(back.seeds.r, s.seeds.r);
  EXPECT_EQ(back.seeds.gamma, s.seeds.gamma);

  std::stringstream m;
  write_matrix(m, s.x);
  EXPECT_EQ(read_matrix(m), s.x);
}

TEST(MatrixIo, RejectsMalformedInput) {
  EXPECT_NE(format_error("").find("line"), std::string::npos);
  EXPECT_NE(format_error("2 2\n1 2\n3\n0 0\n0 0\n").find("line 3"), std::string::npos);
  format_error("2 2\n1 2\n3 x\n0 0\n0 0\n");
  format_error("1 2\n1 2\n0.5 0\n0 0\n");
  format_error("1 2\n1 2\n0 0\n0 0\n9\n");
  format_error("-1 2\n");
}

TEST(MatrixIo, MissingFileIsReported) {
  try {
    read_solver_input(std::filesystem::path("/nonexistent/input.txt"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/input.txt"), std::string::npos);
  }
}

}  // namespace
}  // namespace wpg
