#include "curlmhd/linalg.hpp"

#include <gtest/gtest.h>

#include <limits>

using namespace curlmhd;

namespace {

SpMat small() {
  return finalize(3, 3, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 2.0}, {1, 1, 5.0}, {1, 2, 1.0}, {2, 1, 1.0}, {2, 2, 3.0}});
}

}  // namespace

TEST(Linalg, SolvesSmallSystem) {
  const Vector x_true = (Vector(3) << 1.0, -2.0, 0.5).finished();
  const SpMat A = small();
  const Vector x = lu_solve(A, A * x_true);
  EXPECT_LT((x - x_true).norm(), 1e-14);
}

TEST(Linalg, FinalizeSumsDuplicates) {
  const SpMat A = finalize(2, 2, {{0, 0, 1.0}, {0, 0, 2.5}, {1, 1, 1.0}});
  EXPECT_DOUBLE_EQ(A.coeff(0, 0), 3.5);
  EXPECT_EQ(A.nonZeros(), 2);
}

TEST(Linalg, FinalizeRejectsBadTriplets) {
  EXPECT_THROW(finalize(2, 2, {{2, 0, 1.0}}), std::out_of_range);
  EXPECT_THROW(finalize(2, 2, {{0, 0, std::numeric_limits<double>::quiet_NaN()}}), std::domain_error);
}

TEST(Linalg, AppendBlockOffsetsAndScales) {
  std::vector<Triplet> t;
  append_block(t, small(), 1, 2, -2.0);
  const SpMat B = finalize(4, 5, t);
  EXPECT_DOUBLE_EQ(B.coeff(1, 2), -8.0);
  EXPECT_DOUBLE_EQ(B.coeff(3, 4), -6.0);
}

TEST(Linalg, SingularMatrixReportsSolverError) {
  const SpMat A = finalize(3, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {0, 1, 2.0}});
  LUSolver lu;
  try {
    lu.factorize(A);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("singular"), std::string::npos) << e.what();
  }
  EXPECT_FALSE(lu.factorized());
  EXPECT_THROW(lu.solve(Vector::Ones(3)), SolverError);
}

TEST(Linalg, ReusesSymbolicAnalysis) {
  LUSolver lu;
  SpMat A = small();
  lu.factorize(A);
  A.coeffRef(0, 0) = 7.0;
  lu.factorize(A);
  EXPECT_EQ(lu.symbolic_count(), 1);
  const Vector b = Vector::Ones(3);
  EXPECT_LT((A * lu.solve(b) - b).norm(), 1e-14);
  lu.factorize(finalize(3, 3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}));
  EXPECT_EQ(lu.symbolic_count(), 2);
}

TEST(Linalg, RejectsNonSquare) {
  LUSolver lu;
  EXPECT_THROW(lu.factorize(SpMat(2, 3)), std::invalid_argument);
}
