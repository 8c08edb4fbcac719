#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opalg/measurement.hpp"
#include "opalg/rng.hpp"

#include "common.hpp"

using namespace opalg;
using namespace opalg::testing;

namespace {

MeasurementSetup qubit_setup() {
  return build_coupling(verify_masa(full_matrix_algebra(2), diagonal_algebra(2)));
}

MeasurementSetup qudit_setup(Index n) {
  return build_coupling(verify_masa(full_matrix_algebra(n), diagonal_algebra(n)));
}

std::vector<int> all_outcomes(const MeasurementSetup& s) {
  std::vector<int> all;
  for (int g = 0; g < s.group.order(); ++g) all.push_back(g);
  return all;
}

}  // namespace

TEST_CASE("coupling assembly") {
  SUBCASE("qubit coupling is the controlled-NOT") {
    const auto s = qubit_setup();
    Matrix cnot = Matrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;
    CHECK((s.coupling - cnot).norm() == 0.0);
    CHECK(is_unitary(s.coupling));
  }
  SUBCASE("n = 1 gives the identity") {
    const auto s = qudit_setup(1);
    CHECK(s.coupling.rows() == 1);
    CHECK((s.coupling - Matrix::Identity(1, 1)).norm() == 0.0);
  }
  SUBCASE("qutrit coupling is the controlled cyclic shift") {
    const auto s = qudit_setup(3);
    Matrix expected = Matrix::Zero(9, 9);
    for (int g = 0; g < 3; ++g)
      for (int t = 0; t < 3; ++t) expected(3 * g + (g + t) % 3, 3 * g + t) = 1.0;
    CHECK((s.coupling - expected).norm() == 0.0);
  }
  SUBCASE("group order must match the spectrum") {
    const auto masa = verify_masa(full_matrix_algebra(2), diagonal_algebra(2));
    CHECK_THROWS_AS(build_coupling(masa, FiniteAbelianGroup({3})), DimensionError);
  }
}

TEST_CASE("modified pentagonal relation") {
  for (Index n : {2, 3, 4}) {
    CAPTURE(n);
    CHECK(check_modified_pentagonal(qudit_setup(n)) == 0.0);
  }
  SUBCASE("phase-flip coupling violates it") {
    auto s = qubit_setup();
    Matrix phase = Matrix::Identity(2, 2);
    phase(1, 1) = -1.0;
    s.coupling = kron(s.system.spectral_projections[0], Matrix::Identity(2, 2)) +
                 kron(s.system.spectral_projections[1], phase);
    CHECK(check_modified_pentagonal(s) > 0.5);
  }
}

TEST_CASE("imprimitivity") {
  for (Index n : {1, 2, 3, 4}) {
    CAPTURE(n);
    const auto s = qudit_setup(n);
    CHECK(check_imprimitivity(s, shift_representation(s)) == 0.0);
  }
  SUBCASE("a non-covariant family fails") {
    const auto s = qubit_setup();
    auto rep = shift_representation(s);
    Matrix hadamard(2, 2);
    hadamard << 1, 1, 1, -1;
    rep[1] = hadamard / std::sqrt(2.0);
    CHECK(check_imprimitivity(s, rep) > 0.1);
  }
  SUBCASE("non-unitary family is rejected") {
    const auto s = qubit_setup();
    auto rep = shift_representation(s);
    rep[1] *= 2.0;
    CHECK_THROWS(check_imprimitivity(s, rep));
  }
}

TEST_CASE("perfect correlation") {
  const auto s = qudit_setup(4);
  SUBCASE("eigenvectors pair exactly with their pointer state") {
    for (int g = 0; g < 4; ++g) {
      const Vector xi = s.system.eigenbasis.col(g);
      Vector expected = Vector::Zero(16);
      for (Index i = 0; i < 4; ++i) expected(i * 4 + g) = xi(i);
      CHECK((correlate(s, xi) - expected).norm() == 0.0);
    }
  }
  SUBCASE("superpositions correlate branch by branch") {
    const auto s2 = qubit_setup();
    Vector xi(2);
    xi << 1.0, 1.0;
    const Vector out = correlate(s2, xi);  // normalized inside
    Vector expected = Vector::Zero(4);
    expected(0) = expected(3) = 1.0 / std::sqrt(2.0);
    CHECK((out - expected).norm() < 1e-15);
  }
}

TEST_CASE("instrument values") {
  const auto s = qubit_setup();
  Vector xi(2);
  xi << std::sqrt(0.3), std::sqrt(0.7);
  const State omega = vector_state(xi);

  SUBCASE("total probability is 1") {
    CHECK(std::abs(instrument_value(s, omega, all_outcomes(s), Matrix::Identity(2, 2)) -
                   Complex(1.0, 0.0)) < 1e-12);
  }
  SUBCASE("Born rule for singletons") {
    CHECK(std::abs(instrument_value(s, omega, {0}, Matrix::Identity(2, 2)) - Complex(0.3, 0.0)) <
          1e-12);
    CHECK(std::abs(instrument_value(s, omega, {1}, Matrix::Identity(2, 2)) - Complex(0.7, 0.0)) <
          1e-12);
  }
  SUBCASE("empty outcome set gives 0") {
    CHECK(std::abs(instrument_value(s, omega, {}, Matrix::Identity(2, 2))) < 1e-15);
  }
  SUBCASE("additive over disjoint outcome sets, linear in B") {
    CounterRng rng(31);
    const auto s3 = qudit_setup(3);
    const State rho{random_density(3, rng)};
    const Matrix b = random_matrix(3, 3, rng);
    const Complex v01 = instrument_value(s3, rho, {0, 1}, b);
    const Complex v0 = instrument_value(s3, rho, {0}, b);
    const Complex v1 = instrument_value(s3, rho, {1}, b);
    CHECK(std::abs(v01 - v0 - v1) < 1e-12);
    const Matrix b2 = random_matrix(3, 3, rng);
    const Complex sum = instrument_value(s3, rho, {0}, b + b2);
    CHECK(std::abs(sum - instrument_value(s3, rho, {0}, b) -
                   instrument_value(s3, rho, {0}, b2)) < 1e-12);
  }
  SUBCASE("positive on positive observables") {
    CounterRng rng(37);
    const auto s3 = qudit_setup(3);
    for (int trial = 0; trial < 40; ++trial) {
      const Matrix g = random_matrix(3, 3, rng);
      const Matrix b = g * g.adjoint();
      const State rho{random_density(3, rng)};
      const Complex v = instrument_value(s3, rho, {trial % 3}, b);
      CHECK(v.real() > -1e-10);
      CHECK(std::abs(v.imag()) < 1e-10);
    }
  }
}

TEST_CASE("measurement results") {
  const auto s = qubit_setup();
  Vector plus(2);
  plus << 1.0, 1.0;
  const State omega = vector_state(plus);

  SUBCASE("projection postulate for a singleton") {
    const auto r = measure(s, omega, {1});
    CHECK(r.probability == doctest::Approx(0.5));
    REQUIRE(r.post_state.has_value());
    Matrix e11 = Matrix::Zero(2, 2);
    e11(1, 1) = 1.0;
    CHECK((r.post_state->density - e11).norm() < 1e-10);
  }
  SUBCASE("impossible outcome yields no post state") {
    const State ground = vector_state(Vector::Unit(2, 0));
    const auto r = measure(s, ground, {1});
    CHECK(r.probability < 1e-12);
    CHECK_FALSE(r.post_state.has_value());
  }
  SUBCASE("full outcome set decoheres the state") {
    const auto r = measure(s, omega, all_outcomes(s));
    CHECK(r.probability == doctest::Approx(1.0));
    REQUIRE(r.post_state.has_value());
    CHECK((r.post_state->density - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-10);
  }
  SUBCASE("repeatability: measuring the post state reproduces the outcome") {
    CounterRng rng(41);
    const auto s4 = qudit_setup(4);
    const State rho{random_density(4, rng)};
    for (int g = 0; g < 4; ++g) {
      const auto first = measure(s4, rho, {g});
      if (!first.post_state) continue;
      const auto again = measure(s4, *first.post_state, {g});
      CHECK(again.probability > 1.0 - 1e-9);
    }
  }
  SUBCASE("post states are valid states") {
    CounterRng rng(43);
    const auto s3 = qudit_setup(3);
    const State rho{random_density(3, rng)};
    for (int g = 0; g < 3; ++g) {
      const auto r = measure(s3, rho, {g});
      REQUIRE(r.post_state.has_value());
      CHECK(is_valid_state(r.post_state->density, 1e-9));
    }
  }
}

TEST_CASE("outcome sampling") {
  const auto s = qubit_setup();
  SUBCASE("balanced state, fixed seed, 3 sigma") {
    Vector plus(2);
    plus << 1.0, 1.0;
    const auto h = sample_outcomes(s, vector_state(plus), 10000, 2026);
    REQUIRE(h.size() == 2);
    CHECK(h[0] + h[1] == 10000);
    const double sigma = std::sqrt(10000 * 0.25);
    CHECK(std::abs(static_cast<double>(h[0]) - 5000.0) <= 3.0 * sigma);
  }
  SUBCASE("deterministic under a fixed seed") {
    Vector plus(2);
    plus << 1.0, 1.0;
    const auto h1 = sample_outcomes(s, vector_state(plus), 500, 7);
    const auto h2 = sample_outcomes(s, vector_state(plus), 500, 7);
    CHECK(h1 == h2);
  }
  SUBCASE("deterministic outcome for an eigenstate") {
    const auto h = sample_outcomes(s, vector_state(Vector::Unit(2, 0)), 1000, 5);
    CHECK(h[0] == 1000);
    CHECK(h[1] == 0);
  }
  SUBCASE("histogram tracks the instrument probabilities") {
    CounterRng rng(53);
    const auto s3 = qudit_setup(3);
    const State rho{random_density(3, rng)};
    const RealVector p = outcome_probabilities(s3, rho);
    const auto h = sample_outcomes(s3, rho, 100000, 11);
    for (int g = 0; g < 3; ++g) {
      const double sigma = std::sqrt(100000 * p(g) * (1.0 - p(g)));
      CHECK(std::abs(static_cast<double>(h[static_cast<size_t>(g)]) - 100000 * p(g)) <=
            4.0 * sigma + 1.0);
    }
  }
}

TEST_CASE("crossed product generated by the coupling") {
  for (Index n : {2, 3}) {
    CAPTURE(n);
    const auto s = qudit_setup(n);
    const auto via_coupling = measurement_crossed_product(s, true);
    const auto via_shift = measurement_crossed_product(s, false);

    // Both embeddings generate |G| copies of M_n (abstractly M_n (x) C[G]).
    CHECK(via_coupling.dim() == n * n * n);
    CHECK(via_shift.dim() == n * n * n);
    for (const Block& b : via_coupling.structure()) CHECK(b == Block{n, 1});
    for (const Block& b : via_shift.structure()) CHECK(b == Block{n, 1});

    // Only the coupling-conjugated copy contains phi(V) itself, matching
    // the role of phi(V) as the generator of the crossed product.
    CHECK(via_coupling.contains(s.coupling, 1e-8));
    CHECK_FALSE(via_shift.contains(s.coupling, 1e-8));
    CHECK_FALSE(same_span(via_coupling, via_shift, 1e-6));
  }
}

TEST_CASE("mixed states are handled by convexity") {
  const auto s = qubit_setup();
  Vector e0 = Vector::Unit(2, 0), e1 = Vector::Unit(2, 1);
  const State mix{0.25 * e0 * e0.adjoint() + 0.75 * e1 * e1.adjoint()};
  const RealVector p = outcome_probabilities(s, mix);
  CHECK(p(0) == doctest::Approx(0.25));
  CHECK(p(1) == doctest::Approx(0.75));
}
