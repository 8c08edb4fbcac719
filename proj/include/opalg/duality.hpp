#pragma once

#include <vector>

#include "opalg/algebra.hpp"
#include "opalg/group.hpp"

namespace opalg {

/// Unitary permutation e_i -> e_{image[i]}, kept as an index map and
/// materialized to a dense matrix only on request.
struct PermutationUnitary {
  Index dim = 0;
  std::vector<Index> image;

  Matrix dense() const;
  bool operator==(const PermutationUnitary&) const = default;
};

/// The multiplicative unitary V|s,t> = |s, s+t> on C[G] (x) C[G], with pair
/// index s*|G| + t.
PermutationUnitary multiplicative_unitary(const FiniteAbelianGroup& g);

/// Residual of the pentagonal relation V12 V13 V23 = V23 V12 on the triple
/// tensor power. Exact integer arithmetic: 0.0 iff the permutation identity
/// holds, otherwise the Frobenius norm of the difference.
double check_pentagonal(const PermutationUnitary& v);

/// Same check for an arbitrary operator on a two-fold tensor square; throws
/// DimensionError when the size is not a perfect square.
double check_pentagonal(const Matrix& v);

/// Translation operator lambda_g |t> = |g + t>.
Matrix lambda_translation(const FiniteAbelianGroup& g, int element);

/// lambda(omega) = sum_s omega_s lambda_s, the slice of V against a weight
/// vector over G. A homomorphism from the convolution algebra:
/// lambda(w1 * w2) = lambda(w1) lambda(w2).
Matrix lambda_of(const FiniteAbelianGroup& g, const Vector& weights);

Vector convolution(const FiniteAbelianGroup& g, const Vector& w1, const Vector& w2);

/// Unitary Fourier transform F[chi, t] = chi(t)/sqrt(|G|); diagonalizes
/// every lambda_g with eigenvalues the character values.
Matrix fourier_matrix(const FiniteAbelianGroup& g);

/// A maximal abelian subalgebra of a full factor, with its joint eigenbasis
/// and rank-one spectral projections E(gamma), gamma = 0..n-1 labelled by
/// the canonical spectrum ordering.
struct MasaData {
  FiniteDimAlgebra factor;
  FiniteDimAlgebra masa;
  Matrix eigenbasis;                        // columns e_0..e_{n-1}
  std::vector<Matrix> spectral_projections;  // E(gamma) = e_g e_g*
};

/// Checks N' intersect M = N (maximality), commutativity and containment,
/// and extracts the spectral data. Spectrum labels follow the joint
/// eigenvalue tuples sorted lexicographically (real part, then imaginary
/// part, per basis element of N).
MasaData verify_masa(const FiniteDimAlgebra& m, const FiniteDimAlgebra& n,
                     double tol = kDefaultTol);

struct ConditionalSectorReport {
  Index sector_count = 0;
  double center_residual = 0.0;  // distance from Z(M (x) N) to 1 (x) N
  FiniteDimAlgebra tensor_center;
};

/// Builds M (x) N on the tensor product space and verifies that its center
/// is 1 (x) N; the sector count equals |Spec(N)|.
ConditionalSectorReport conditional_sector_structure(const FiniteDimAlgebra& m,
                                                     const FiniteDimAlgebra& n,
                                                     double tol = kDefaultTol);

}  // namespace opalg
