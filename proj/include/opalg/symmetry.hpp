#pragma once

#include <optional>
#include <vector>

#include "opalg/group.hpp"
#include "opalg/representation.hpp"

namespace opalg {

/// A *-automorphism of a concrete algebra, stored as its action on the
/// algebra's orthonormal basis coordinates, optionally together with an
/// ambient unitary implementing it (Ad u).
struct AlgebraAutomorphism {
  Matrix coord_map;
  std::optional<Matrix> implementing_unitary;

  Matrix apply(const FiniteDimAlgebra& f, const Matrix& x) const {
    return f.from_coordinates(coord_map * f.coordinates(x));
  }
};

AlgebraAutomorphism ad_automorphism(const FiniteDimAlgebra& f, const Matrix& u,
                                    double tol = kDefaultTol);
/// From explicit images of the algebra's basis (possibly outer).
AlgebraAutomorphism map_automorphism(const FiniteDimAlgebra& f,
                                     const std::vector<Matrix>& basis_images,
                                     double tol = kDefaultTol);

/// A finite-group action on an algebra. The group is carried as a Cayley
/// table (identity = index 0); abelian groups keep their cyclic structure,
/// which the crossed-product operations require.
struct GroupAction {
  std::vector<std::vector<int>> table;
  std::optional<FiniteAbelianGroup> abelian;
  std::vector<AlgebraAutomorphism> maps;

  int order() const { return static_cast<int>(table.size()); }
  int multiply(int g, int h) const { return table[static_cast<size_t>(g)][static_cast<size_t>(h)]; }
  int inverse(int g) const;
};

GroupAction make_action(const FiniteAbelianGroup& g, std::vector<AlgebraAutomorphism> maps);
GroupAction make_action(std::vector<std::vector<int>> table,
                        std::vector<AlgebraAutomorphism> maps);

/// Checks the action axioms on f: each map is a *-automorphism of the
/// span and the composition law matches the Cayley table. Throws on
/// failure.
void validate_action(const FiniteDimAlgebra& f, const GroupAction& act,
                     double tol = kDefaultTol);

/// A = { x in F : alpha_g(x) = x for all g }, by the group-averaging
/// projector.
FiniteDimAlgebra fixed_point_algebra(const FiniteDimAlgebra& f, const GroupAction& act,
                                     double tol = kDefaultTol);

struct BreakingReport {
  /// Per group element: permutation of the represented sectors (indices
  /// into the supported blocks in canonical order).
  std::vector<std::vector<int>> sector_permutations;
  bool broken = false;
  /// G-orbits partitioning the represented sectors; minimal invariant
  /// (centrally ergodic) components.
  std::vector<std::vector<int>> ergodic_components;
};

/// The breaking criterion: the symmetry is unbroken in the representation
/// iff the induced action fixes every represented sector pointwise.
/// Throws when some alpha_g moves a represented sector out of the
/// representation's support.
BreakingReport breaking_analysis(const FiniteDimAlgebra& f, const GroupAction& act,
                                 const Representation& rep, double tol = kDefaultTol);

/// The crossed product M x|_alpha G on H_M (x) C[G], generated by
/// 1 (x) lambda(G) and the embedding alpha(B) = sum_g alpha_g(B) (x) E_g.
/// Requires the abelian structure.
FiniteDimAlgebra crossed_product(const FiniteDimAlgebra& m, const GroupAction& act,
                                 double tol = kDefaultTol);

struct DhrReport {
  FiniteDimAlgebra fixed_points;         // A = F^G
  double duality_residual = 0.0;         // pi(A)'' vs U(G)'
  double bicommutant_residual = 0.0;     // U(G)'' vs pi(A)'
  Index sector_count = 0;
  std::vector<int> sector_characters;    // canonical sector k -> character index
  double labeling_residual = 0.0;        // z_k vs the character isotypic projection
};

/// Toy sector/character correspondence for a diagonalizable action: F must
/// act irreducibly (the full matrix algebra), the action is Ad of a unitary
/// representation U of the abelian G. Verifies pi(A)'' = U(G)',
/// U(G)'' = pi(A)', that the center of A is spanned by the isotypic
/// projections of the characters appearing in U, and labels each sector
/// with its character.
DhrReport dhr_toy(const FiniteDimAlgebra& f, const FiniteAbelianGroup& g,
                  const std::vector<Matrix>& unitaries, double tol = kDefaultTol);

struct AugmentedReport {
  FiniteDimAlgebra algebra;  // represented augmented algebra
  Index center_dim = 0;
  double implementing_residual = 0.0;
  std::vector<Matrix> implementing_unitaries;  // one per group element
  Index quotient_order = 0;
};

/// The augmented algebra F x| (H\G)^ for finite abelian G: fibres of F
/// twisted over the coset space G/H, on which every g in G becomes
/// unitarily implemented at the price of a center of dimension >= |G/H|.
/// H must consist exactly of elements acting trivially on the sectors.
AugmentedReport augmented_algebra(const FiniteDimAlgebra& f, const GroupAction& act,
                                  const std::vector<int>& unbroken_subgroup,
                                  double tol = kDefaultTol);

}  // namespace opalg
