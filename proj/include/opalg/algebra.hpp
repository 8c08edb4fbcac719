#pragma once

#include <vector>

#include "opalg/linalg.hpp"
#include "opalg/types.hpp"

namespace opalg {

/// One Wedderburn block: the algebra contains a summand isomorphic to the
/// dim x dim matrices, acting with the given multiplicity.
struct Block {
  Index dim = 0;
  Index multiplicity = 0;
  bool operator==(const Block&) const = default;
};

/// A unital *-subalgebra of the n x n complex matrices, carried by an
/// orthonormal basis under the trace inner product together with its block
/// decomposition. Instances are immutable once built; construct through
/// generate_algebra / algebra_from_span or the named factories below.
///
/// Conventions:
///  - blocks are in canonical order: block dimension ascending, ties broken
///    by descending lexicographic order of the rounded diagonal of the
///    block's central projection (so blocks supported nearer the top-left
///    of the computational basis come first);
///  - block_unitary() U satisfies U* x U = \oplus_k (x_k (x) 1_{m_k}) for
///    every x in the algebra, with the block index slow and the
///    multiplicity index fast.
class FiniteDimAlgebra {
 public:
  FiniteDimAlgebra() = default;

  Index ambient_dim() const { return n_; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  Index block_count() const { return static_cast<Index>(structure_.size()); }

  const std::vector<Matrix>& basis() const { return basis_; }
  const std::vector<Block>& structure() const { return structure_; }
  const Matrix& block_unitary() const { return block_unitary_; }
  const std::vector<Matrix>& central_projections() const { return central_; }
  /// Generating set the algebra was built from (basis when unknown).
  const std::vector<Matrix>& generators() const {
    return generators_.empty() ? basis_ : generators_;
  }
  /// n^2 x dim matrix whose orthonormal columns are the vectorized basis.
  const Matrix& span() const { return span_; }
  double tolerance() const { return tol_; }

  Matrix unit() const { return Matrix::Identity(n_, n_); }
  bool contains(const Matrix& x, double tol) const;
  bool contains(const Matrix& x) const { return contains(x, tol_); }
  /// Hilbert-Schmidt orthogonal projection onto the span; for a unital
  /// *-subalgebra this is the trace-preserving conditional expectation.
  Matrix project(const Matrix& x) const;
  /// Coordinates of x in the orthonormal basis (x must lie in the span).
  Vector coordinates(const Matrix& x) const;
  Matrix from_coordinates(const Vector& c) const;
  /// The dim_k x dim_k component of x in block k.
  Matrix block_component(const Matrix& x, Index k) const;
  /// Embed per-block components back into the ambient space.
  Matrix from_block_components(const std::vector<Matrix>& comps) const;
  bool is_factor() const { return structure_.size() == 1; }
  bool is_commutative(double tol) const;
  bool is_commutative() const { return is_commutative(tol_); }

  // Used by the factory functions; validates nothing by itself.
  static FiniteDimAlgebra from_parts(Index n, std::vector<Matrix> basis,
                                     std::vector<Matrix> generators,
                                     std::vector<Block> structure, Matrix block_unitary,
                                     std::vector<Matrix> central, double tol);

 private:
  Index n_ = 0;
  std::vector<Matrix> basis_;
  std::vector<Matrix> generators_;
  std::vector<Block> structure_;
  Matrix block_unitary_;
  std::vector<Matrix> central_;
  Matrix span_;
  double tol_ = kDefaultTol;
};

/// Smallest unital *-algebra containing the generators, computed as the
/// double commutant of the *-closed generator set. The ambient identity is
/// always adjoined.
FiniteDimAlgebra generate_algebra(const std::vector<Matrix>& generators, Index ambient_dim,
                                  double tol = kDefaultTol);

/// Wrap an explicitly spanned subspace that is already a unital *-algebra;
/// throws NotSubalgebraError if the span is not closed under products,
/// adjoints, or does not contain the ambient identity.
FiniteDimAlgebra algebra_from_span(const std::vector<Matrix>& spanning, Index ambient_dim,
                                   double tol = kDefaultTol);

FiniteDimAlgebra commutant(const FiniteDimAlgebra& a, double tol);
inline FiniteDimAlgebra commutant(const FiniteDimAlgebra& a) { return commutant(a, a.tolerance()); }

/// A intersect A'.
FiniteDimAlgebra center(const FiniteDimAlgebra& a, double tol);
inline FiniteDimAlgebra center(const FiniteDimAlgebra& a) { return center(a, a.tolerance()); }

/// Pairwise orthogonal minimal projections of the center, in canonical
/// order, summing to the identity. One per sector.
std::vector<Matrix> minimal_central_projections(const FiniteDimAlgebra& a);

FiniteDimAlgebra full_matrix_algebra(Index n);
FiniteDimAlgebra scalar_algebra(Index n);
FiniteDimAlgebra diagonal_algebra(Index n);

/// Algebra generated by { x (x) 1 } and { 1 (x) y } on the tensor product
/// space.
FiniteDimAlgebra tensor_algebra(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b,
                                double tol = kDefaultTol);

/// Algebra generated jointly by the elements of a and b (on a common
/// ambient space).
FiniteDimAlgebra join_algebra(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b,
                              double tol = kDefaultTol);

bool same_span(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b, double tol = kDefaultTol);

}  // namespace opalg
