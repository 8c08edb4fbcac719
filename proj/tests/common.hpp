#pragma once

#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/rng.hpp"

namespace opalg::testing {

inline Matrix block_diag(const std::vector<Matrix>& blocks) {
  Index n = 0;
  for (const Matrix& b : blocks) n += b.rows();
  Matrix out = Matrix::Zero(n, n);
  Index off = 0;
  for (const Matrix& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

inline Matrix diag(std::initializer_list<double> entries) {
  Matrix m = Matrix::Zero(static_cast<Index>(entries.size()), static_cast<Index>(entries.size()));
  Index i = 0;
  for (double e : entries) m(i, i) = e, ++i;
  return m;
}

/// Algebra unitarily equivalent to \oplus_k M_{dims_k} (x) 1_{mults_k},
/// generated from two random elements; the expected structure is the
/// canonical reordering of (dims, mults).
inline FiniteDimAlgebra random_block_algebra(const std::vector<Index>& dims,
                                             const std::vector<Index>& mults, CounterRng& rng,
                                             double tol = kDefaultTol) {
  Index n = 0;
  for (size_t k = 0; k < dims.size(); ++k) n += dims[k] * mults[k];
  const Matrix u = random_unitary(n, rng);
  auto embed = [&](const std::vector<Matrix>& comps) {
    std::vector<Matrix> expanded;
    for (size_t k = 0; k < comps.size(); ++k)
      expanded.push_back(kron(comps[k], Matrix::Identity(mults[k], mults[k])));
    return Matrix(u * block_diag(expanded) * u.adjoint());
  };
  std::vector<Matrix> gen1, gen2;
  for (Index d : dims) {
    gen1.push_back(random_hermitian(d, rng));
    gen2.push_back(random_matrix(d, d, rng));
  }
  return generate_algebra({embed(gen1), embed(gen2)}, n, tol);
}

/// The qubit-pair standard: M_2 + M_3 embedded block-diagonally in M_5.
inline FiniteDimAlgebra m2_plus_m3(double tol = kDefaultTol) {
  auto embed = [](const Matrix& a, const Matrix& b) {
    return block_diag({a, b});
  };
  Matrix s2 = Matrix::Zero(2, 2), e2 = Matrix::Zero(2, 2);
  s2(1, 0) = 1.0;
  e2(0, 0) = 1.0;
  Matrix s3 = Matrix::Zero(3, 3), e3 = Matrix::Zero(3, 3);
  s3(1, 0) = 1.0;
  s3(2, 1) = 1.0;
  s3(0, 2) = 1.0;
  e3(0, 0) = 1.0;
  std::vector<Matrix> gens = {embed(s2, Matrix::Zero(3, 3)), embed(e2, Matrix::Zero(3, 3)),
                              embed(Matrix::Zero(2, 2), s3), embed(Matrix::Zero(2, 2), e3)};
  return generate_algebra(gens, 5, tol);
}

}  // namespace opalg::testing
