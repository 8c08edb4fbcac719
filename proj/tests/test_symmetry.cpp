#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opalg/symmetry.hpp"

#include "common.hpp"

using namespace opalg;
using namespace opalg::testing;

namespace {

// M2 + M2 inside M4 with the block-swap Z2 action.
struct SwapModel {
  FiniteDimAlgebra algebra;
  GroupAction action;
};

SwapModel swap_model() {
  Matrix e01 = Matrix::Zero(2, 2);
  e01(0, 1) = 1.0;
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = -1.0;
  std::vector<Matrix> gens = {block_diag({e01, Matrix::Zero(2, 2)}),
                              block_diag({Matrix::Zero(2, 2), e01}),
                              block_diag({h, Matrix::Zero(2, 2)}),
                              block_diag({Matrix::Zero(2, 2), h})};
  FiniteDimAlgebra f = generate_algebra(gens, 4);
  Matrix swap = Matrix::Zero(4, 4);
  swap.topRightCorner(2, 2) = Matrix::Identity(2, 2);
  swap.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2);
  GroupAction act = make_action(
      FiniteAbelianGroup({2}),
      {ad_automorphism(f, Matrix::Identity(4, 4)), ad_automorphism(f, swap)});
  return {std::move(f), std::move(act)};
}

GroupAction z2_sign_action(const FiniteDimAlgebra& f) {
  Matrix sz = Matrix::Zero(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  return make_action(FiniteAbelianGroup({2}),
                     {ad_automorphism(f, Matrix::Identity(2, 2)), ad_automorphism(f, sz)});
}

}  // namespace

TEST_CASE("fixed-point algebras") {
  SUBCASE("trivial action fixes everything") {
    const auto m2 = full_matrix_algebra(2);
    const auto act = make_action(FiniteAbelianGroup({1}),
                                 {ad_automorphism(m2, Matrix::Identity(2, 2))});
    CHECK(same_span(fixed_point_algebra(m2, act), m2));
  }
  SUBCASE("Z2 sign action on M2 averages to the diagonal") {
    const auto m2 = full_matrix_algebra(2);
    const auto fixed = fixed_point_algebra(m2, z2_sign_action(m2));
    CHECK(same_span(fixed, diagonal_algebra(2)));
  }
  SUBCASE("block swap on M2 + M2 leaves the diagonal embedding") {
    const auto model = swap_model();
    const auto fixed = fixed_point_algebra(model.algebra, model.action);
    CHECK(fixed.dim() == 4);
    REQUIRE(fixed.structure().size() == 1);
    CHECK(fixed.structure()[0] == Block{2, 2});
    // Galois count for the free part: dim F = |G| dim A.
    CHECK(model.algebra.dim() == 2 * fixed.dim());
  }
  SUBCASE("averaging projector is idempotent and output is pointwise invariant") {
    const auto model = swap_model();
    const auto fixed = fixed_point_algebra(model.algebra, model.action);
    for (const Matrix& x : fixed.basis())
      for (const auto& m : model.action.maps)
        CHECK((m.apply(model.algebra, x) - x).norm() < 1e-9);
  }
}

TEST_CASE("breaking analysis") {
  SUBCASE("inner actions are unbroken in every representation") {
    const auto m2 = full_matrix_algebra(2);
    const auto act = z2_sign_action(m2);
    for (const std::vector<Index>& mult : {std::vector<Index>{1}, std::vector<Index>{3}}) {
      const auto report =
          breaking_analysis(m2, act, represent(std::make_shared<FiniteDimAlgebra>(m2), mult));
      CHECK_FALSE(report.broken);
      REQUIRE(report.ergodic_components.size() == 1);
    }
  }
  SUBCASE("block swap is broken with one 2-element orbit") {
    const auto model = swap_model();
    const auto report =
        breaking_analysis(model.algebra, model.action, identity_representation(model.algebra));
    CHECK(report.broken);
    REQUIRE(report.ergodic_components.size() == 1);
    CHECK(report.ergodic_components[0].size() == 2);
    CHECK(report.sector_permutations[1] == std::vector<int>{1, 0});
  }
  SUBCASE("mixed model: swap on M2+M2, trivial on M3") {
    Matrix e01 = Matrix::Zero(2, 2);
    e01(0, 1) = 1.0;
    Matrix f01 = Matrix::Zero(3, 3);
    f01(0, 1) = 1.0;
    f01(1, 2) = 1.0;
    Matrix z2 = Matrix::Zero(2, 2);
    z2(0, 0) = 1.0;
    std::vector<Matrix> gens = {
        block_diag({e01, Matrix::Zero(2, 2), Matrix::Zero(3, 3)}),
        block_diag({z2, Matrix::Zero(2, 2), Matrix::Zero(3, 3)}),
        block_diag({Matrix::Zero(2, 2), e01, Matrix::Zero(3, 3)}),
        block_diag({Matrix::Zero(2, 2), z2, Matrix::Zero(3, 3)}),
        block_diag({Matrix::Zero(2, 2), Matrix::Zero(2, 2), f01}),
        block_diag({Matrix::Zero(2, 2), Matrix::Zero(2, 2), f01.adjoint() * f01})};
    const auto f = generate_algebra(gens, 7);
    REQUIRE(f.block_count() == 3);
    Matrix swap = Matrix::Identity(7, 7);
    swap.topLeftCorner(4, 4).setZero();
    swap.block(0, 2, 2, 2) = Matrix::Identity(2, 2);
    swap.block(2, 0, 2, 2) = Matrix::Identity(2, 2);
    const auto act = make_action(FiniteAbelianGroup({2}),
                                 {ad_automorphism(f, Matrix::Identity(7, 7)),
                                  ad_automorphism(f, swap)});
    const auto report = breaking_analysis(f, act, identity_representation(f));
    CHECK(report.broken);
    REQUIRE(report.ergodic_components.size() == 2);
    // Canonical order puts the two M2 blocks first; they form the broken
    // ergodic pair, and the M3 sector is a fixed singleton.
    CHECK(report.ergodic_components[0].size() == 2);
    CHECK(report.ergodic_components[1] == std::vector<int>{2});
  }
  SUBCASE("restricting a swapped sector out of the support is an error") {
    const auto model = swap_model();
    const auto half =
        represent(std::make_shared<FiniteDimAlgebra>(model.algebra), {1, 0});
    CHECK_THROWS(breaking_analysis(model.algebra, model.action, half));
  }
}

TEST_CASE("crossed products") {
  SUBCASE("trivial Z2 action on M2 gives M2 (x) C[Z2] = M2 + M2") {
    const auto m2 = full_matrix_algebra(2);
    const auto act = make_action(FiniteAbelianGroup({2}),
                                 {ad_automorphism(m2, Matrix::Identity(2, 2)),
                                  ad_automorphism(m2, Matrix::Identity(2, 2))});
    const auto cp = crossed_product(m2, act);
    CHECK(cp.dim() == 8);
    REQUIRE(cp.structure().size() == 2);
    CHECK(cp.structure()[0] == Block{2, 1});
    CHECK(cp.structure()[1] == Block{2, 1});
  }
  SUBCASE("Z2 shift on D2 generates a full M2") {
    const auto d2 = diagonal_algebra(2);
    Matrix flip = Matrix::Zero(2, 2);
    flip(0, 1) = flip(1, 0) = 1.0;
    const auto act = make_action(FiniteAbelianGroup({2}),
                                 {ad_automorphism(d2, Matrix::Identity(2, 2)),
                                  ad_automorphism(d2, flip)});
    const auto cp = crossed_product(d2, act);
    CHECK(cp.dim() == 4);
    REQUIRE(cp.structure().size() == 1);
    CHECK(cp.structure()[0].dim == 2);
  }
  SUBCASE("inner Z2 action on M2 gives M2 + M2") {
    const auto m2 = full_matrix_algebra(2);
    const auto cp = crossed_product(m2, z2_sign_action(m2));
    CHECK(cp.dim() == 8);
    REQUIRE(cp.structure().size() == 2);
    CHECK(cp.structure()[0].dim == 2);
    CHECK(cp.structure()[1].dim == 2);
  }
  SUBCASE("groups without abelian structure are rejected") {
    const auto m2 = full_matrix_algebra(2);
    std::vector<std::vector<int>> table = {{0, 1}, {1, 0}};
    const auto act = make_action(table, {ad_automorphism(m2, Matrix::Identity(2, 2)),
                                         ad_automorphism(m2, Matrix::Identity(2, 2))});
    CHECK_THROWS(crossed_product(m2, act));
  }
}

TEST_CASE("DHR toy duality") {
  SUBCASE("M2 with the Z2 sign representation") {
    Matrix sz = Matrix::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    const auto report =
        dhr_toy(full_matrix_algebra(2), FiniteAbelianGroup({2}), {Matrix::Identity(2, 2), sz});
    CHECK(same_span(report.fixed_points, diagonal_algebra(2)));
    CHECK(report.duality_residual < 1e-9);
    CHECK(report.bicommutant_residual < 1e-9);
    CHECK(report.sector_count == 2);
    CHECK(report.sector_characters == std::vector<int>{0, 1});
    CHECK(report.labeling_residual < 1e-9);
  }
  SUBCASE("M3 with the Z3 diagonal representation") {
    const Complex w = std::exp(Complex(0.0, 2.0 * M_PI / 3.0));
    Matrix u = Matrix::Zero(3, 3);
    u(0, 0) = 1.0;
    u(1, 1) = w;
    u(2, 2) = w * w;
    const auto report = dhr_toy(full_matrix_algebra(3), FiniteAbelianGroup({3}),
                                {Matrix::Identity(3, 3), u, u * u});
    CHECK(same_span(report.fixed_points, diagonal_algebra(3)));
    CHECK(report.duality_residual < 1e-9);
    CHECK(report.sector_count == 3);
    CHECK(report.sector_characters == std::vector<int>{0, 1, 2});
  }
  SUBCASE("trivial group: everything is fixed, one sector") {
    const auto report =
        dhr_toy(full_matrix_algebra(2), FiniteAbelianGroup({1}), {Matrix::Identity(2, 2)});
    CHECK(report.fixed_points.dim() == 4);
    CHECK(report.sector_count == 1);
  }
  SUBCASE("sector count equals the number of characters in U") {
    // U = I + sign on a 3-dimensional space: characters {0, 1} appear.
    Matrix u = Matrix::Identity(3, 3);
    u(2, 2) = -1.0;
    const auto report =
        dhr_toy(full_matrix_algebra(3), FiniteAbelianGroup({2}), {Matrix::Identity(3, 3), u});
    CHECK(report.sector_count == 2);
    CHECK(report.sector_characters.size() == 2);
  }
  SUBCASE("non-representations are rejected") {
    Matrix sz = Matrix::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = Complex(0.0, 1.0);  // order 4, not an involution
    CHECK_THROWS(dhr_toy(full_matrix_algebra(2), FiniteAbelianGroup({2}),
                         {Matrix::Identity(2, 2), sz}));
  }
}

TEST_CASE("augmented algebra") {
  SUBCASE("unbroken symmetry: trivial quotient returns the original algebra") {
    const auto m2 = full_matrix_algebra(2);
    const auto act = z2_sign_action(m2);
    const auto report = augmented_algebra(m2, act, {0, 1});
    CHECK(report.quotient_order == 1);
    CHECK(report.algebra.ambient_dim() == 2);
    CHECK(same_span(report.algebra, m2));
    CHECK(report.implementing_residual < 1e-9);
  }
  SUBCASE("block swap: doubled space, implemented unitarily, non-trivial center") {
    const auto model = swap_model();
    const auto report = augmented_algebra(model.algebra, model.action, {0});
    CHECK(report.quotient_order == 2);
    CHECK(report.algebra.ambient_dim() == 8);
    CHECK(report.center_dim >= 2);
    CHECK(report.implementing_residual < 1e-9);
    for (const Matrix& u : report.implementing_unitaries) CHECK(is_unitary(u, 1e-9));
  }
  SUBCASE("D2 with the shift action, H = {e}") {
    const auto d2 = diagonal_algebra(2);
    Matrix flip = Matrix::Zero(2, 2);
    flip(0, 1) = flip(1, 0) = 1.0;
    const auto act = make_action(FiniteAbelianGroup({2}),
                                 {ad_automorphism(d2, Matrix::Identity(2, 2)),
                                  ad_automorphism(d2, flip)});
    const auto report = augmented_algebra(d2, act, {0});
    CHECK(report.quotient_order == 2);
    CHECK(report.implementing_residual < 1e-9);
    CHECK(report.center_dim >= 2);
  }
  SUBCASE("H with non-trivial sector action is rejected") {
    const auto model = swap_model();
    CHECK_THROWS(augmented_algebra(model.algebra, model.action, {0, 1}));
  }
  SUBCASE("H must be a subgroup") {
    const auto m2 = full_matrix_algebra(2);
    const auto act = make_action(FiniteAbelianGroup({4}),
                                 {ad_automorphism(m2, Matrix::Identity(2, 2)),
                                  ad_automorphism(m2, Matrix::Identity(2, 2)),
                                  ad_automorphism(m2, Matrix::Identity(2, 2)),
                                  ad_automorphism(m2, Matrix::Identity(2, 2))});
    CHECK_THROWS(augmented_algebra(m2, act, {0, 1}));  // {0,1} not closed in Z4
  }
}

TEST_CASE("action validation") {
  const auto m2 = full_matrix_algebra(2);
  SUBCASE("composition law is enforced") {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = Complex(0.0, 1.0);  // order 4
    CHECK_THROWS(validate_action(
        m2, make_action(FiniteAbelianGroup({2}),
                        {ad_automorphism(m2, Matrix::Identity(2, 2)), ad_automorphism(m2, s)})));
  }
  SUBCASE("maps must preserve the algebra") {
    const auto d2 = diagonal_algebra(2);
    Matrix hadamard(2, 2);
    hadamard << 1, 1, 1, -1;
    hadamard /= std::sqrt(2.0);
    CHECK_THROWS_AS(ad_automorphism(d2, hadamard), NotSubalgebraError);
  }
}
