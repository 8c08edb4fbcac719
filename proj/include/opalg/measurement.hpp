#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "opalg/duality.hpp"
#include "opalg/states.hpp"

namespace opalg {

/// Coupling of a full factor M_n to the pointer space C[G] indexed by the
/// spectrum of its MASA: phi(V) = sum_gamma E(gamma) (x) lambda_gamma on
/// H_M (x) C[G]. The neutral pointer position is the group identity.
struct MeasurementSetup {
  MasaData system;
  FiniteAbelianGroup group{std::vector<int>{1}};
  Index pointer_dim = 0;
  int neutral = 0;
  Matrix coupling;  // phi(V), unitary

  Index system_dim() const { return system.factor.ambient_dim(); }
  Index total_dim() const { return system_dim() * pointer_dim; }
};

/// Assembles the coupling; |G| must equal the number of spectral
/// projections (the group order is a parameter, Z_n being the default
/// labelling choice).
MeasurementSetup build_coupling(const MasaData& masa, const FiniteAbelianGroup& g);
MeasurementSetup build_coupling(const MasaData& masa);

/// Residual of phi(V)_12 phi(V)_13 V_23 = V_23 phi(V)_12 on
/// H_M (x) C[G] (x) C[G].
double check_modified_pentagonal(const MeasurementSetup& setup);

/// The shift unitaries phi_gamma permuting the MASA eigenbasis by the group
/// law; the canonical covariant system for the setup.
std::vector<Matrix> shift_representation(const MeasurementSetup& setup);

/// Residual of the imprimitivity relations phi_g E(d) phi_g* = E(g + d) and
/// of the intertwining phi(V)(phi_g (x) 1) = (phi_g (x) lambda_g) phi(V).
double check_imprimitivity(const MeasurementSetup& setup, const std::vector<Matrix>& shift_rep);

/// phi(V)(xi (x) |neutral>); non-normalized xi is normalized first.
Vector correlate(const MeasurementSetup& setup, const Vector& xi);

/// The instrument J(Delta|omega)(B) = (omega (x) |i><i|)(phi(V)* (B (x)
/// chi_Delta) phi(V)). Linear in B, completely positive, additive in Delta.
Complex instrument_value(const MeasurementSetup& setup, const State& omega,
                         const std::vector<int>& delta, const Matrix& b);

struct InstrumentResult {
  double probability = 0.0;
  std::optional<State> post_state;  // empty when probability < tol (no outcome)
  std::vector<int> outcome_set;
};

/// Probability and normalized post-measurement state for the outcome set;
/// the post state is recovered from the instrument functional by evaluating
/// it on a trace-orthonormal basis of M.
InstrumentResult measure(const MeasurementSetup& setup, const State& omega,
                         const std::vector<int>& delta, double tol = kDefaultTol);

/// Outcome probabilities p({gamma}|omega) for every gamma.
RealVector outcome_probabilities(const MeasurementSetup& setup, const State& omega);

/// i.i.d. outcome draws from the instrument probabilities; deterministic
/// under a fixed seed (counter-based generator).
std::vector<std::int64_t> sample_outcomes(const MeasurementSetup& setup, const State& omega,
                                          std::int64_t count, std::uint64_t seed);

/// The two natural embeddings of M into M (x) L^inf(G): pointwise Ad by the
/// shift representation, and conjugation by the coupling.
Matrix embed_by_shift(const MeasurementSetup& setup, const Matrix& b);
Matrix embed_by_coupling(const MeasurementSetup& setup, const Matrix& b);

/// The crossed product M x| G: algebra generated by 1 (x) lambda(G) and the
/// chosen embedding of M.
FiniteDimAlgebra measurement_crossed_product(const MeasurementSetup& setup, bool use_coupling,
                                             double tol = kDefaultTol);

}  // namespace opalg
