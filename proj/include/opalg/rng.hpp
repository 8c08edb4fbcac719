#pragma once

#include <cstdint>

#include "opalg/types.hpp"

namespace opalg {

/// Counter-based pseudo-random generator (splitmix64 mixing). Every draw is
/// a pure function of (seed, counter), so streams can be split by deriving
/// a new seed, and sampling is reproducible under a fixed seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  /// Independent stream derived from this one.
  CounterRng split(std::uint64_t stream) const;

  double uniform();               // [0, 1)
  double normal();                // standard normal
  Complex complex_normal();       // (normal + i normal)/sqrt(2)
  std::uint64_t next_u64();

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

Matrix random_matrix(Index rows, Index cols, CounterRng& rng);
Matrix random_hermitian(Index n, CounterRng& rng);
/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
Matrix random_unitary(Index n, CounterRng& rng);
/// Random density matrix; floor > 0 mixes in floor * I/n, making it faithful.
Matrix random_density(Index n, CounterRng& rng, double floor = 0.0);
Vector random_unit_vector(Index n, CounterRng& rng);

}  // namespace opalg
