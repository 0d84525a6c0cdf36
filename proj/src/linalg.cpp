#include "curlmhd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace curlmhd {

SpMat finalize(int rows, int cols, const std::vector<Triplet>& triplets) {
  for (const auto& t : triplets) {
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols)
      throw std::out_of_range("finalize: triplet (" + std::to_string(t.row()) + ", " + std::to_string(t.col()) +
                              ") outside " + std::to_string(rows) + " x " + std::to_string(cols));
    if (!std::isfinite(t.value()))
      throw std::domain_error("finalize: non-finite entry at (" + std::to_string(t.row()) + ", " +
                              std::to_string(t.col()) + ")");
  }
  SpMat A(rows, cols);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

void append_block(std::vector<Triplet>& out, const SpMat& A, int row0, int col0, double scale) {
  for (int j = 0; j < A.outerSize(); ++j)
    for (SpMat::InnerIterator it(A, j); it; ++it) out.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
}

void LUSolver::factorize(const SpMat& Ain) {
  if (Ain.rows() != Ain.cols()) throw std::invalid_argument("LUSolver: matrix is not square");
  A_ = Ain;
  A_.makeCompressed();
  const int n = static_cast<int>(A_.cols());
  const bool same = factorized_ && static_cast<int>(outer_.size()) == n + 1 &&
                    static_cast<int>(inner_.size()) == A_.nonZeros() &&
                    std::equal(outer_.begin(), outer_.end(), A_.outerIndexPtr()) &&
                    std::equal(inner_.begin(), inner_.end(), A_.innerIndexPtr());
  if (!same) {
    lu_.analyzePattern(A_);
    ++symbolic_count_;
    outer_.assign(A_.outerIndexPtr(), A_.outerIndexPtr() + n + 1);
    inner_.assign(A_.innerIndexPtr(), A_.innerIndexPtr() + A_.nonZeros());
  }
  lu_.factorize(A_);
  if (lu_.info() != Eigen::Success) {
    factorized_ = false;
    outer_.clear();
    // Locate the smallest pivot of U and map it back to an original row.
    std::string where;
    try {
      const SpMat U = lu_.matrixU();
      int imin = 0;
      double dmin = std::numeric_limits<double>::infinity();
      for (int i = 0; i < U.rows(); ++i) {
        const double d = std::abs(U.coeff(i, i));
        if (d < dmin) dmin = d, imin = i;
      }
      const auto P = lu_.permutationP();
      int row = imin;
      for (int r = 0; r < P.size(); ++r)
        if (P(r) == imin) row = r;
      where = " at pivot " + std::to_string(imin) + " (original row " + std::to_string(row) + ")";
    } catch (...) {
    }
    for (int i = 0; i < n && where.empty(); ++i)
      if (A_.row(i).norm() == 0.0) where = " (row " + std::to_string(i) + " is empty)";
    throw SolverError("LUSolver: singular matrix" + where + "; check constraint rows such as the mean-zero condition");
  }
  factorized_ = true;
}

Vector LUSolver::solve(const Vector& b) const {
  if (!factorized_) throw SolverError("LUSolver: solve called before a successful factorization");
  Vector x = lu_.solve(b);
  if (!x.allFinite()) throw SolverError("LUSolver: non-finite solution");
  return x;
}

Vector lu_solve(const SpMat& A, const Vector& b) {
  LUSolver s;
  s.factorize(A);
  Vector x = s.solve(b);
  const double nb = b.norm();
  const double res = (A * x - b).norm();
  if (res > 1e-10 * std::max(nb, 1e-300) && res > 1e-14)
    throw SolverError("lu_solve: relative residual " + std::to_string(res / std::max(nb, 1e-300)) + " exceeds 1e-10");
  return x;
}

}  // namespace curlmhd
