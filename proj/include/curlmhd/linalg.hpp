#pragma once

#include "curlmhd/common.hpp"

#include <Eigen/UmfPackSupport>

#include <memory>
#include <vector>

namespace curlmhd {

using Triplet = Eigen::Triplet<double>;

/// Compressed matrix from triplets; duplicates are summed. Out-of-range indices throw.
SpMat finalize(int rows, int cols, const std::vector<Triplet>& triplets);

/// Appends `scale * A` shifted by (row0, col0) to `out`, keeping explicit zeros so the
/// sparsity pattern depends only on the structure of A.
void append_block(std::vector<Triplet>& out, const SpMat& A, int row0, int col0, double scale = 1.0);

/// Sparse LU (UMFPACK, fill-reducing ordering). The symbolic analysis is reused while the
/// sparsity pattern stays the same.
class LUSolver {
 public:
  void factorize(const SpMat& A);
  Vector solve(const Vector& b) const;
  bool factorized() const { return factorized_; }
  int symbolic_count() const { return symbolic_count_; }

 private:
  Eigen::UmfPackLU<SpMat> lu_;
  SpMat A_;
  std::vector<int> outer_, inner_;
  bool factorized_ = false;
  int symbolic_count_ = 0;
};

/// One-shot solve with a relative residual check of 1e-10.
Vector lu_solve(const SpMat& A, const Vector& b);

}  // namespace curlmhd
