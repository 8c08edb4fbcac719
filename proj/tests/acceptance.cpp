// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Pass the corpus manifest path as argv[1] (defaults to
// data/corpus.json relative to the working directory).

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "opalg/io.hpp"
#include "opalg/measurement.hpp"
#include "opalg/modular.hpp"
#include "opalg/rng.hpp"
#include "opalg/symmetry.hpp"

#include "common.hpp"

using namespace opalg;
using namespace opalg::testing;

namespace {

struct Harness {
  int failures = 0;

  void criterion(int number, const std::string& label, bool pass, double worst = -1.0) {
    if (worst >= 0.0)
      std::printf("[%s] criterion %2d: %s (worst residual %.3e)\n", pass ? "PASS" : "FAIL",
                  number, label.c_str(), worst);
    else
      std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", number, label.c_str());
    if (!pass) ++failures;
  }
};

MeasurementSetup diagonal_setup(Index n) {
  return build_coupling(verify_masa(full_matrix_algebra(n), diagonal_algebra(n)));
}

// 1. Pentagonal relation, exact permutation arithmetic.
void criterion_pentagonal(Harness& h) {
  double worst = 0.0;
  for (const auto& orders : std::vector<std::vector<int>>{{2}, {3}, {4}, {2, 2}, {6}})
    worst = std::max(worst, check_pentagonal(multiplicative_unitary(FiniteAbelianGroup(orders))));
  h.criterion(1, "pentagonal relation exact for Z2, Z3, Z4, Z2xZ2, Z6", worst == 0.0, worst);
}

// 2. Modified pentagonal and imprimitivity, n in {2, 3, 4}.
void criterion_modified_pentagonal(Harness& h) {
  double worst = 0.0;
  for (Index n : {2, 3, 4}) {
    const auto setup = diagonal_setup(n);
    worst = std::max(worst, check_modified_pentagonal(setup));
    worst = std::max(worst, check_imprimitivity(setup, shift_representation(setup)));
  }
  h.criterion(2, "modified pentagonal and imprimitivity < 1e-12 for n = 2, 3, 4", worst < 1e-12,
              worst);
}

// 3. Perfect correlation, exact, n <= 8.
void criterion_perfect_correlation(Harness& h) {
  double worst = 0.0;
  for (Index n = 2; n <= 8; ++n) {
    const auto setup = diagonal_setup(n);
    for (int gamma = 0; gamma < setup.group.order(); ++gamma) {
      const Vector xi = setup.system.eigenbasis.col(gamma);
      Vector expected = Vector::Zero(setup.total_dim());
      for (Index i = 0; i < n; ++i) expected(i * setup.pointer_dim + gamma) = xi(i);
      worst = std::max(worst, (correlate(setup, xi) - expected).norm());
    }
  }
  h.criterion(3, "perfect correlation exact for every MASA eigenvector, n <= 8", worst == 0.0,
              worst);
}

// 4. Born rule from the instrument on M4, plus seeded histograms.
void criterion_born(Harness& h) {
  const auto setup = diagonal_setup(4);
  CounterRng rng(0xB0121);
  double worst = 0.0;
  bool hist_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector xi = random_unit_vector(4, rng);
    const State omega = vector_state(xi);
    const RealVector p = outcome_probabilities(setup, omega);
    worst = std::max(worst, std::abs(p.sum() - 1.0));
    const Vector amplitudes = setup.system.eigenbasis.adjoint() * xi;
    for (int gamma = 0; gamma < 4; ++gamma)
      worst = std::max(worst, std::abs(p(gamma) - std::norm(amplitudes(gamma))));
    if (trial < 3) {
      const auto hist = sample_outcomes(setup, omega, 100000, 0xFEED + trial);
      for (int gamma = 0; gamma < 4; ++gamma) {
        const double mean = 100000.0 * p(gamma);
        const double sigma = std::sqrt(100000.0 * p(gamma) * (1.0 - p(gamma)));
        if (std::abs(static_cast<double>(hist[static_cast<size_t>(gamma)]) - mean) >
            4.0 * sigma)
          hist_ok = false;
      }
    }
  }
  h.criterion(4, "Born rule < 1e-10 on 100 random vectors; histograms within 4 sigma",
              worst < 1e-10 && hist_ok, worst);
}

// 5. Instrument structure: complete positivity, additivity, repeatability.
void criterion_instrument(Harness& h) {
  const auto setup = diagonal_setup(3);
  CounterRng rng(0x1257);
  double cp_worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix g = random_matrix(3, 3, rng);
    const Matrix b = g * g.adjoint();
    const State rho{random_density(3, rng)};
    const Complex v = instrument_value(setup, rho, {trial % 3}, b);
    cp_worst = std::max(cp_worst, -v.real());
  }

  double add_worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const State rho{random_density(3, rng)};
    const Matrix b = random_matrix(3, 3, rng);
    const Complex whole = instrument_value(setup, rho, {0, 1, 2}, b);
    const Complex parts = instrument_value(setup, rho, {0}, b) +
                          instrument_value(setup, rho, {1}, b) +
                          instrument_value(setup, rho, {2}, b);
    add_worst = std::max(add_worst, std::abs(whole - parts));
  }

  double repeat_worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const State rho{random_density(3, rng)};
    for (int gamma = 0; gamma < 3; ++gamma) {
      const auto r = measure(setup, rho, {gamma});
      if (!r.post_state) continue;
      const auto again = measure(setup, *r.post_state, {gamma});
      repeat_worst = std::max(repeat_worst, 1.0 - again.probability);
    }
  }
  h.criterion(5, "instrument: CP >= -1e-10, additivity < 1e-12, repeatability > 1 - 1e-9",
              cp_worst < 1e-10 && add_worst < 1e-12 && repeat_worst < 1e-9,
              std::max(std::max(cp_worst, add_worst), repeat_worst));
}

// 6. q->c / c->q section property and barycenter on random algebras.
void criterion_channels(Harness& h) {
  CounterRng rng(0xC4A);
  const std::vector<std::pair<std::vector<Index>, std::vector<Index>>> shapes = {
      {{1, 1}, {1, 2}}, {{2}, {2}},         {{1, 2}, {1, 1}},    {{2, 2}, {1, 1}},
      {{1, 1, 2}, {1, 1, 1}}, {{1, 1, 1, 1}, {1, 1, 1, 1}}, {{3, 1}, {1, 2}},
  };
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& [dims, mults] = shapes[static_cast<size_t>(trial) % shapes.size()];
    const auto a = random_block_algebra(dims, mults, rng);
    const State omega{random_density(a.ambient_dim(), rng, 0.2)};

    RealVector target(a.block_count());
    double sum = 0.0;
    for (Index k = 0; k < target.size(); ++k) sum += target(k) = 0.05 + rng.uniform();
    target /= sum;
    const RealVector back = sector_distribution(a, c_to_q_channel(a, omega, target));
    worst = std::max(worst, (back - target).norm());

    const auto comps = central_decomposition(a, omega);
    Matrix barycenter = Matrix::Zero(a.ambient_dim(), a.ambient_dim());
    for (const auto& c : comps) barycenter += c.weight * c.state.density;
    worst = std::max(worst, (barycenter - algebra_compression(a, omega.density)).norm());
  }
  h.criterion(6, "q->c / c->q section property and barycenter < 1e-9 on 50 random algebras",
              worst < 1e-9, worst);
}

// 7. Conditional expectation onto the center.
void criterion_conditional_expectation(Harness& h) {
  CounterRng rng(0x7A5);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_block_algebra({1, 2}, {2, 1}, rng);
    const State omega{random_density(a.ambient_dim(), rng, 0.2)};
    const auto lambda = conditional_expectation(a, omega);
    const auto& zs = a.central_projections();

    Vector coeffs(a.dim());
    for (Index i = 0; i < a.dim(); ++i) coeffs(i) = rng.complex_normal();
    const Matrix x = a.from_coordinates(coeffs);

    worst = std::max(worst, (lambda(lambda(x)) - lambda(x)).norm());
    worst = std::max(worst, (lambda(a.unit()) - a.unit()).norm());

    const Matrix positive = lambda(Matrix(x * x.adjoint()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(positive);
    worst = std::max(worst, std::max(0.0, -es.eigenvalues().minCoeff()));

    const Matrix z1 = 0.7 * zs[0] + Complex(0.1, 0.4) * zs[1];
    const Matrix z2 = Complex(0.0, -1.3) * zs[0] + 0.2 * zs[1];
    worst = std::max(worst, (lambda(Matrix(z1 * x * z2)) - z1 * lambda(x) * z2).norm());
  }
  h.criterion(7, "conditional expectation: idempotent, unital, positive, bimodule < 1e-9",
              worst < 1e-9, worst);
}

// 8. Bicommutant and commutant structure duality on 100 random algebras.
void criterion_bicommutant(Harness& h) {
  CounterRng rng(0xB1C);
  const std::vector<std::pair<std::vector<Index>, std::vector<Index>>> shapes = {
      {{2}, {2}},    {{1, 2}, {2, 1}},       {{2, 2}, {1, 1}}, {{1, 1, 2}, {1, 2, 1}},
      {{3}, {1}},    {{1, 1, 1}, {2, 1, 1}}, {{2, 3}, {1, 1}}, {{4}, {2}},
      {{1, 3}, {1, 1}}, {{1, 1}, {3, 2}},
  };
  double worst = 0.0;
  bool structure_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& [dims, mults] = shapes[static_cast<size_t>(trial) % shapes.size()];
    const auto a = random_block_algebra(dims, mults, rng);
    const auto c = commutant(a);
    const auto bicomm = commutant(c);
    worst = std::max(worst, subspace_distance(a.span(), bicomm.span()));

    auto sorted = [](std::vector<Block> b) {
      std::sort(b.begin(), b.end(), [](const Block& x, const Block& y) {
        return x.dim != y.dim ? x.dim < y.dim : x.multiplicity < y.multiplicity;
      });
      return b;
    };
    std::vector<Block> flipped;
    for (const Block& b : a.structure()) flipped.push_back({b.multiplicity, b.dim});
    if (sorted(flipped) != sorted(c.structure())) structure_ok = false;
  }
  h.criterion(8, "bicommutant < 1e-9 and commutant structure flip on 100 random algebras",
              worst < 1e-9 && structure_ok, worst);
}

// 9. Complement identities, exhaustively over all support patterns.
void criterion_complements(Harness& h) {
  bool ok = true;
  const auto five = std::make_shared<FiniteDimAlgebra>(diagonal_algebra(5));
  const auto two = std::make_shared<FiniteDimAlgebra>(m2_plus_m3());
  for (const auto& algebra : {five, two}) {
    const size_t blocks = static_cast<size_t>(algebra->block_count());
    const unsigned patterns = 1u << blocks;
    std::vector<Representation> reps;
    for (unsigned mask = 0; mask < patterns; ++mask) {
      std::vector<Index> mult(blocks, 0);
      for (size_t k = 0; k < blocks; ++k) mult[k] = (mask >> k) & 1u;
      reps.push_back(represent(algebra, mult));
    }
    for (const auto& pi : reps)
      if (!biorth_identities(pi).all()) ok = false;
    for (unsigned m1 = 0; m1 < patterns; ++m1)
      for (unsigned m2 = 0; m2 < patterns; ++m2) {
        // order reversal on nested supports
        if ((m1 & m2) == m1) {
          const auto c1 = disjoint_complement(reps[m1]).support();
          const auto c2 = disjoint_complement(reps[m2]).support();
          for (size_t k = 0; k < blocks; ++k)
            if (c2[k] && !c1[k]) ok = false;
        }
        if (quasi_equiv_via_biorth(reps[m1], reps[m2]) != quasi_equivalent(reps[m1], reps[m2]))
          ok = false;
      }
  }
  h.criterion(9, "complement identities exhaustive over all support patterns (<= 5 blocks)", ok);
}

// 10. Tomita-Takesaki residuals on random faithful states.
void criterion_tomita(Harness& h) {
  CounterRng rng(0x70A);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int which = trial % 3;
    const FiniteDimAlgebra a =
        which == 0 ? full_matrix_algebra(2) : which == 1 ? full_matrix_algebra(3) : m2_plus_m3();
    const auto md = standard_form(a, State{random_density(a.ambient_dim(), rng, 0.2)});
    worst = std::max(worst, check_tomita(md).max());
  }
  double tracial = 0.0;
  for (Index n : {2, 3}) {
    const auto md = standard_form(full_matrix_algebra(n), tracial_state(n));
    tracial = std::max(tracial,
                       (md.delta - Matrix::Identity(md.rep.dim, md.rep.dim)).norm());
  }
  h.criterion(10, "Tomita-Takesaki residuals < 1e-8 (20 random states); tracial Delta = 1",
              worst < 1e-8 && tracial < 1e-12, std::max(worst, tracial));
}

// 11. Galois identities in standard form.
void criterion_galois(Harness& h) {
  CounterRng rng(0x6A1);
  double worst = 0.0;
  const std::vector<FiniteDimAlgebra> algebras = {full_matrix_algebra(2), diagonal_algebra(2),
                                                  m2_plus_m3()};
  for (const auto& a : algebras) {
    const auto md = standard_form(a, State{random_density(a.ambient_dim(), rng, 0.3)});
    const auto alg = algebra_from_span(md.rep.images, md.rep.dim);
    const auto report = galois_identities(alg);
    worst = std::max(worst,
                     std::max(report.center_commutant_residual, report.fixed_point_residual));
  }
  h.criterion(11, "Galois identities < 1e-9 for M2, D2, M2+M3 in standard form", worst < 1e-9,
              worst);
}

// 12. DHR toy duality with diagonal actions.
void criterion_dhr(Harness& h) {
  double worst = 0.0;
  bool labels_ok = true;

  Matrix sz = Matrix::Zero(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  const auto r2 =
      dhr_toy(full_matrix_algebra(2), FiniteAbelianGroup({2}), {Matrix::Identity(2, 2), sz});
  worst = std::max(worst, std::max(r2.duality_residual, r2.labeling_residual));
  labels_ok = labels_ok && r2.sector_count == 2 && r2.sector_characters == std::vector<int>{0, 1};

  const Complex w = std::exp(Complex(0.0, 2.0 * M_PI / 3.0));
  Matrix u = Matrix::Zero(3, 3);
  u(0, 0) = 1.0;
  u(1, 1) = w;
  u(2, 2) = w * w;
  const auto r3 = dhr_toy(full_matrix_algebra(3), FiniteAbelianGroup({3}),
                          {Matrix::Identity(3, 3), u, u * u});
  worst = std::max(worst, std::max(r3.duality_residual, r3.labeling_residual));
  labels_ok = labels_ok && r3.sector_count == 3 &&
              r3.sector_characters == std::vector<int>{0, 1, 2};

  h.criterion(12, "DHR toy duality and character labels for (M2, Z2) and (M3, Z3)",
              worst < 1e-9 && labels_ok, worst);
}

// 13. Symmetry-breaking classification.
void criterion_breaking(Harness& h) {
  bool ok = true;

  const auto m2 = full_matrix_algebra(2);
  Matrix sz = Matrix::Zero(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  const auto inner = make_action(FiniteAbelianGroup({2}),
                                 {ad_automorphism(m2, Matrix::Identity(2, 2)),
                                  ad_automorphism(m2, sz)});
  ok = ok && !breaking_analysis(m2, inner, identity_representation(m2)).broken;

  {
    Matrix e01 = Matrix::Zero(2, 2);
    e01(0, 1) = 1.0;
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    std::vector<Matrix> gens = {block_diag({e01, Matrix::Zero(2, 2)}),
                                block_diag({d, Matrix::Zero(2, 2)}),
                                block_diag({Matrix::Zero(2, 2), e01}),
                                block_diag({Matrix::Zero(2, 2), d})};
    const auto f = generate_algebra(gens, 4);
    Matrix swap = Matrix::Zero(4, 4);
    swap.topRightCorner(2, 2) = Matrix::Identity(2, 2);
    swap.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2);
    const auto act = make_action(FiniteAbelianGroup({2}),
                                 {ad_automorphism(f, Matrix::Identity(4, 4)),
                                  ad_automorphism(f, swap)});
    const auto report = breaking_analysis(f, act, identity_representation(f));
    ok = ok && report.broken && report.ergodic_components.size() == 1 &&
         report.ergodic_components[0].size() == 2;
  }

  {
    // (M2 + M2) + M3 with the swap on the pair and nothing on M3.
    Matrix e01 = Matrix::Zero(2, 2);
    e01(0, 1) = 1.0;
    Matrix d2 = Matrix::Zero(2, 2);
    d2(0, 0) = 1.0;
    Matrix s3 = Matrix::Zero(3, 3);
    s3(1, 0) = s3(2, 1) = s3(0, 2) = 1.0;
    Matrix e3 = Matrix::Zero(3, 3);
    e3(0, 0) = 1.0;
    const Matrix z2 = Matrix::Zero(2, 2);
    const Matrix z3 = Matrix::Zero(3, 3);
    std::vector<Matrix> gens = {
        block_diag({e01, z2, z3}), block_diag({d2, z2, z3}), block_diag({z2, e01, z3}),
        block_diag({z2, d2, z3}),  block_diag({z2, z2, s3}), block_diag({z2, z2, e3})};
    const auto f = generate_algebra(gens, 7);
    Matrix swap = Matrix::Identity(7, 7);
    swap.topLeftCorner(4, 4).setZero();
    swap.block(0, 2, 2, 2) = Matrix::Identity(2, 2);
    swap.block(2, 0, 2, 2) = Matrix::Identity(2, 2);
    const auto act = make_action(FiniteAbelianGroup({2}),
                                 {ad_automorphism(f, Matrix::Identity(7, 7)),
                                  ad_automorphism(f, swap)});
    const auto report = breaking_analysis(f, act, identity_representation(f));
    bool has_pair = false, has_fixed_singleton = false;
    for (const auto& orbit : report.ergodic_components) {
      if (orbit.size() == 2) has_pair = true;
      if (orbit.size() == 1) has_fixed_singleton = true;
    }
    ok = ok && report.broken && report.ergodic_components.size() == 2 && has_pair &&
         has_fixed_singleton;
  }

  h.criterion(13, "breaking classification: inner unbroken; swap broken; mixed decomposes", ok);
}

// 14. End-to-end verify over the bundled corpus, byte-stable reports.
void criterion_verify(Harness& h, const std::string& corpus) {
  using namespace opalg::io;
  bool ok = true;
  double residual = 0.0;
  try {
    CommandFlags flags;
    const Report first = run_verify({corpus}, flags);
    const Report second = run_verify({corpus}, flags);
    ok = first.all_pass() &&
         render_report(first, "machine") == render_report(second, "machine");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verify threw: %s\n", e.what());
    ok = false;
    residual = 1.0;
  }
  h.criterion(14, "end-to-end verify over the bundled corpus, byte-stable output", ok, residual);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string corpus = argc > 1 ? argv[1] : "data/corpus.json";
  const auto start = std::chrono::steady_clock::now();

  Harness h;
  criterion_pentagonal(h);
  criterion_modified_pentagonal(h);
  criterion_perfect_correlation(h);
  criterion_born(h);
  criterion_instrument(h);
  criterion_channels(h);
  criterion_conditional_expectation(h);
  criterion_bicommutant(h);
  criterion_complements(h);
  criterion_tomita(h);
  criterion_galois(h);
  criterion_dhr(h);
  criterion_breaking(h);
  criterion_verify(h, corpus);

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  std::printf("%d/14 criteria passed in %.1f s\n", 14 - h.failures,
              static_cast<double>(elapsed.count()) / 1000.0);
  return h.failures == 0 ? 0 : 1;
}
