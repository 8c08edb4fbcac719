#pragma once

#include <memory>
#include <vector>

#include "opalg/algebra.hpp"

namespace opalg {

/// A *-representation of a FiniteDimAlgebra, determined up to unitary
/// equivalence by its multiplicity vector over the algebra's blocks and
/// carried concretely by the images of the algebra's orthonormal basis.
/// The zero representation (all multiplicities 0, dimension 0) is legal.
struct Representation {
  std::shared_ptr<const FiniteDimAlgebra> algebra;
  std::vector<Index> multiplicities;  // one entry per block, >= 0
  std::vector<Matrix> images;         // pi(basis_i), each dim x dim
  Index dim = 0;

  /// pi(x) for x in the span of the algebra.
  Matrix apply(const Matrix& x) const;
  /// Blocks with nonzero multiplicity.
  std::vector<bool> support() const;
};

/// Build the representation \oplus_k (x_k (x) 1_{mult_k}) with the block
/// index slow, matching the algebra's canonical block order.
Representation represent(std::shared_ptr<const FiniteDimAlgebra> algebra,
                         std::vector<Index> multiplicities);
Representation represent(const FiniteDimAlgebra& algebra, std::vector<Index> multiplicities);

/// The defining (ambient) representation.
Representation identity_representation(std::shared_ptr<const FiniteDimAlgebra> algebra);
Representation identity_representation(const FiniteDimAlgebra& algebra);

/// Direct sum (multiplicities add).
Representation direct_sum(const Representation& a, const Representation& b);

bool same_underlying_algebra(const Representation& a, const Representation& b,
                             double tol = kDefaultTol);

/// Basis of { T : T pi1(a) = pi2(a) T for all a }; empty iff disjoint.
std::vector<Matrix> intertwiner_space(const Representation& pi1, const Representation& pi2,
                                      double tol = kDefaultTol);

/// Unitary equivalence up to multiplicity: identical support sets.
bool quasi_equivalent(const Representation& pi1, const Representation& pi2);

/// No nonzero intertwiners: disjoint support sets.
bool disjoint(const Representation& pi1, const Representation& pi2);

}  // namespace opalg
