#pragma once

#include <vector>

#include "opalg/representation.hpp"

namespace opalg {

/// Normal state, stored as a density matrix against the representation it
/// was declared on (the ambient space unless said otherwise):
/// omega(a) = tr(rho a).
struct State {
  Matrix density;

  Complex operator()(const Matrix& a) const { return (density * a).trace(); }
  Index dim() const { return density.rows(); }
};

State make_state(Matrix density, double tol = kDefaultTol);
/// Vector state |xi><xi| (xi normalized).
State vector_state(const Vector& xi);
State tracial_state(Index n);
bool is_valid_state(const Matrix& density, double tol = kDefaultTol);

/// Unique density inside span(A) inducing the same functional on A; the
/// trace-preserving conditional expectation of rho onto A.
Matrix algebra_compression(const FiniteDimAlgebra& a, const Matrix& rho);

/// The q->c channel: weights[k] = omega(z_k) over the minimal central
/// projections in canonical order.
RealVector sector_distribution(const FiniteDimAlgebra& a, const State& omega);

/// Exactly one sector weight nonzero (equivalently, the GNS representation
/// generates a factor).
bool is_factor_state(const FiniteDimAlgebra& a, const State& omega, double tol = kDefaultTol);

struct CentralComponent {
  double weight = 0.0;
  State state;  // density compressed into span(A), supported on one sector
};

/// Central decomposition omega = sum_k w_k omega_k; zero-weight sectors are
/// omitted. Component densities are compressed to the algebra, so the
/// barycenter identity holds exactly against algebra_compression(a, rho).
std::vector<CentralComponent> central_decomposition(const FiniteDimAlgebra& a,
                                                    const State& omega,
                                                    double tol = kDefaultTol);

/// Conditional expectation onto the center determined by a faithful central
/// measure: Lambda(x) = sum_k omega_k(z_k x z_k) z_k. Idempotent, unital,
/// positive, and a center-bimodule map.
class CentralExpectation {
 public:
  CentralExpectation(std::vector<Matrix> projections, std::vector<State> components);

  Matrix operator()(const Matrix& x) const;
  const std::vector<Matrix>& projections() const { return projections_; }
  const std::vector<State>& components() const { return components_; }
  Index sector_count() const { return static_cast<Index>(projections_.size()); }

 private:
  std::vector<Matrix> projections_;
  std::vector<State> components_;
};

/// Throws NotFaithfulError if some sector weight vanishes (the central
/// measure must be faithful for the expectation to exist).
CentralExpectation conditional_expectation(const FiniteDimAlgebra& a, const State& omega,
                                           double tol = kDefaultTol);

/// The dual c->q channel: target distribution over sectors -> state
/// sum_k target[k] omega_k. Composing with sector_distribution returns the
/// target exactly.
State c_to_q_channel(const FiniteDimAlgebra& a, const State& omega, const RealVector& target,
                     double tol = kDefaultTol);

struct GnsResult {
  Representation rep;   // pi_omega as a representation of A
  Vector cyclic;        // Omega
  Matrix gram;          // omega(x_i* x_j) over the algebra basis
  Matrix quotient;      // algebra coordinates -> GNS coordinates
  Matrix quotient_pinv; // right inverse of the quotient map
};

/// GNS construction: the algebra modulo the null space of omega(a* b), with
/// pi acting by left multiplication and Omega the class of the unit.
GnsResult gns(const FiniteDimAlgebra& a, const State& omega, double tol = kDefaultTol);

}  // namespace opalg
