#pragma once

#include <vector>

#include "opalg/states.hpp"

namespace opalg {

/// The reference ("reduced universal") representation carries one copy of
/// each block; projections such as P(pi) and c(pi) live on its Hilbert
/// space, where they are block-diagonal 0/1 matrices.
Representation reduced_universal(std::shared_ptr<const FiniteDimAlgebra> algebra);

/// The maximal representation disjoint from pi inside the reference
/// representation: multiplicity 1 exactly on the blocks pi misses.
Representation disjoint_complement(const Representation& pi);

/// pi-degree-two complement; has the support of pi with multiplicity 1.
Representation biorthogonal(const Representation& pi);

/// Central support c(pi) as a projection on the reference Hilbert space.
Matrix central_support(const Representation& pi);

/// P(rho) for a sub-representation of the reference representation
/// (multiplicities 0/1): the projection onto its blocks.
Matrix universal_projection(const Representation& pi);

struct BiorthReport {
  bool complement_projection_identity = false;  // P(pi°) = 1 - c(pi)
  bool biorth_support_identity = false;         // P(pi°°) = c(pi)
  bool triple_complement_identity = false;      // pi° = pi°°°
  bool contained_in_biorth = false;             // pi <= pi°°
  bool all() const {
    return complement_projection_identity && biorth_support_identity &&
           triple_complement_identity && contained_in_biorth;
  }
};

BiorthReport biorth_identities(const Representation& pi);

/// Quasi-equivalence tested through pi1°° = pi2°° (equal supports).
bool quasi_equiv_via_biorth(const Representation& pi1, const Representation& pi2);

/// Standard form of a finite-dimensional von Neumann algebra with the
/// Tomita-Takesaki data of a faithful state: the GNS space of phi carries
/// Delta(x Omega) = rho x rho^{-1} Omega and the antiunitary
/// J(x Omega) = rho^{1/2} x* rho^{-1/2} Omega with S = J Delta^{1/2}
/// implementing x Omega -> x* Omega. J is stored as a unitary followed by
/// entrywise conjugation.
struct ModularData {
  Representation rep;
  Vector cyclic;     // Omega, cyclic and separating
  Matrix delta;      // positive invertible
  Matrix j_unitary;  // J = j_unitary . conj
  Matrix rho;        // faithful density compressed into the algebra

  Vector apply_j(const Vector& v) const { return j_unitary * v.conjugate(); }
};

ModularData standard_form(const FiniteDimAlgebra& a, const State& phi,
                          double tol = kDefaultTol);

struct TomitaReport {
  double s_residual = 0.0;     // max | J Delta^{1/2} x Omega - x* Omega |
  double jmj_residual = 0.0;   // subspace distance J M J vs M'
  double flow_residual = 0.0;  // Delta^{it} M Delta^{-it} stays in M
  double kms_residual = 0.0;   // modular condition phi(sigma_i(x) y) = phi(y x)
  double max() const {
    return std::max(std::max(s_residual, jmj_residual), std::max(flow_residual, kms_residual));
  }
};

/// Residuals of the modular identities; the flow is sampled at
/// t in {0.3, 1, pi} and the analytic continuation at t = i enters the KMS
/// boundary identity.
TomitaReport check_tomita(const ModularData& md, double tol = kDefaultTol);

struct GaloisReport {
  double center_commutant_residual = 0.0;  // Z(M)' vs M v M'
  double fixed_point_residual = 0.0;       // (M v M')^{U(M')} vs M
  bool factor = false;
  bool join_is_everything = false;  // M v M' = B(H), the ergodic case
};

/// Verifies Z(M)' = M v M', the fixed-point identity under conjugation by
/// unitaries generating M', and factoriality <=> M v M' = B(H), in the
/// concrete (faithful) representation the algebra is given in.
GaloisReport galois_identities(const FiniteDimAlgebra& m, double tol = kDefaultTol);

struct UniversalityReport {
  Index hom_dim_rep = 0;     // dim Hom(pi, sigma)
  Index hom_dim_biorth = 0;  // dim Hom(pi°°, sigma)
  bool dims_equal = false;
  double factorization_residual = 0.0;  // max over basis T of |T - (T eta*) eta|
  bool eta_invertible = false;          // eta unitary iff pi is multiplicity-free
};

/// Universality of the standard form: intertwiners T : pi -> sigma factor
/// through the canonical map eta : pi -> pi°° (the multiplicity-slice
/// coisometry, unitary when pi is multiplicity-free). pi must be in the
/// canonical block layout produced by represent().
UniversalityReport standard_universality(const Representation& pi, const ModularData& sigma,
                                         double tol = kDefaultTol);

}  // namespace opalg
