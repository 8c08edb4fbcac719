#include "opalg/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "opalg/duality.hpp"
#include "opalg/rng.hpp"

namespace opalg {

namespace {

// Match a matrix against a list, returning the index of the unique entry
// within distance tol; -1 if none.
int match_matrix(const Matrix& x, const std::vector<Matrix>& candidates, double tol) {
  for (size_t j = 0; j < candidates.size(); ++j)
    if ((x - candidates[j]).norm() < tol) return static_cast<int>(j);
  return -1;
}

}  // namespace

AlgebraAutomorphism ad_automorphism(const FiniteDimAlgebra& f, const Matrix& u, double tol) {
  if (!is_unitary(u, std::sqrt(tol)))
    throw Error("ad_automorphism: implementing matrix is not unitary");
  const Index d = f.dim();
  Matrix coord(d, d);
  for (Index j = 0; j < d; ++j) {
    const Matrix img = u * f.basis()[static_cast<size_t>(j)] * u.adjoint();
    if (!f.contains(img, std::sqrt(tol)))
      throw NotSubalgebraError("ad_automorphism: Ad u does not preserve the algebra");
    coord.col(j) = f.coordinates(img);
  }
  return AlgebraAutomorphism{std::move(coord), u};
}

AlgebraAutomorphism map_automorphism(const FiniteDimAlgebra& f,
                                     const std::vector<Matrix>& basis_images, double tol) {
  if (basis_images.size() != f.basis().size())
    throw DimensionError("map_automorphism: one image per basis element required");
  const Index d = f.dim();
  Matrix coord(d, d);
  for (Index j = 0; j < d; ++j) {
    if (!f.contains(basis_images[static_cast<size_t>(j)], std::sqrt(tol)))
      throw NotSubalgebraError("map_automorphism: image leaves the algebra");
    coord.col(j) = f.coordinates(basis_images[static_cast<size_t>(j)]);
  }
  return AlgebraAutomorphism{std::move(coord), std::nullopt};
}

int GroupAction::inverse(int g) const {
  for (int h = 0; h < order(); ++h)
    if (multiply(g, h) == 0) return h;
  throw Error("GroupAction: element has no inverse (invalid Cayley table)");
}

GroupAction make_action(const FiniteAbelianGroup& g, std::vector<AlgebraAutomorphism> maps) {
  std::vector<std::vector<int>> table(static_cast<size_t>(g.order()),
                                      std::vector<int>(static_cast<size_t>(g.order())));
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b) table[static_cast<size_t>(a)][static_cast<size_t>(b)] = g.add(a, b);
  GroupAction act;
  act.table = std::move(table);
  act.abelian = g;
  act.maps = std::move(maps);
  return act;
}

GroupAction make_action(std::vector<std::vector<int>> table,
                        std::vector<AlgebraAutomorphism> maps) {
  GroupAction act;
  act.table = std::move(table);
  act.maps = std::move(maps);
  return act;
}

void validate_action(const FiniteDimAlgebra& f, const GroupAction& act, double tol) {
  const int n = act.order();
  if (static_cast<int>(act.maps.size()) != n)
    throw DimensionError("validate_action: one automorphism per group element required");
  if (n == 0) throw DimensionError("validate_action: empty group");
  for (int g = 0; g < n; ++g) {
    if (act.multiply(0, g) != g || act.multiply(g, 0) != g)
      throw Error("validate_action: index 0 is not the identity of the Cayley table");
    act.inverse(g);
  }
  const double loose = std::sqrt(tol);
  // Identity element acts as the identity map.
  if ((act.maps[0].coord_map - Matrix::Identity(f.dim(), f.dim())).norm() > loose)
    throw Error("validate_action: identity element does not act trivially");
  // Composition law and *-compatibility.
  for (int g = 0; g < n; ++g) {
    const auto& mg = act.maps[static_cast<size_t>(g)];
    for (int h = 0; h < n; ++h) {
      const Matrix comp = mg.coord_map * act.maps[static_cast<size_t>(h)].coord_map;
      const Matrix& target = act.maps[static_cast<size_t>(act.multiply(g, h))].coord_map;
      if ((comp - target).norm() > loose)
        throw Error("validate_action: alpha_g . alpha_h != alpha_{gh}");
    }
    for (const Matrix& x : f.basis()) {
      const Matrix starred = mg.apply(f, x.adjoint()) - mg.apply(f, x).adjoint();
      if (starred.norm() > loose)
        throw Error("validate_action: automorphism does not commute with the adjoint");
    }
  }
}

FiniteDimAlgebra fixed_point_algebra(const FiniteDimAlgebra& f, const GroupAction& act,
                                     double tol) {
  validate_action(f, act, tol);
  const Index d = f.dim();
  Matrix avg = Matrix::Zero(d, d);
  for (const auto& m : act.maps) avg += m.coord_map;
  avg /= static_cast<double>(act.order());
  // Averaging projector is idempotent; its column space is the fixed
  // coordinate subspace.
  const Matrix fixed_coords = column_space(avg, tol);
  std::vector<Matrix> span;
  for (Index j = 0; j < fixed_coords.cols(); ++j)
    span.push_back(f.from_coordinates(fixed_coords.col(j)));
  return algebra_from_span(span, f.ambient_dim(), tol);
}

BreakingReport breaking_analysis(const FiniteDimAlgebra& f, const GroupAction& act,
                                 const Representation& rep, double tol) {
  validate_action(f, act, tol);
  const auto& zs = f.central_projections();
  const double match_tol = 1e-6;

  // Supported blocks of the representation, in canonical order.
  std::vector<int> supported;
  for (size_t k = 0; k < rep.multiplicities.size(); ++k)
    if (rep.multiplicities[k] > 0) supported.push_back(static_cast<int>(k));
  std::vector<int> position(zs.size(), -1);
  for (size_t s = 0; s < supported.size(); ++s) position[static_cast<size_t>(supported[s])] =
      static_cast<int>(s);

  BreakingReport report;
  report.broken = false;
  for (int g = 0; g < act.order(); ++g) {
    std::vector<int> perm(supported.size());
    for (size_t s = 0; s < supported.size(); ++s) {
      const Matrix image =
          act.maps[static_cast<size_t>(g)].apply(f, zs[static_cast<size_t>(supported[s])]);
      const int j = match_matrix(image, zs, match_tol);
      if (j < 0)
        throw Error("breaking_analysis: alpha_g does not permute the minimal central projections");
      if (position[static_cast<size_t>(j)] < 0)
        throw Error(
            "breaking_analysis: action does not map the represented algebra to itself "
            "(sector leaves the support)");
      perm[s] = position[static_cast<size_t>(j)];
      if (perm[s] != static_cast<int>(s)) report.broken = true;
    }
    report.sector_permutations.push_back(std::move(perm));
  }

  // Orbits under the permutation group generated by all alpha_g.
  std::vector<int> parent(supported.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[static_cast<size_t>(x)] == x ? x : parent[static_cast<size_t>(x)] =
                                                         find(parent[static_cast<size_t>(x)]);
  };
  for (const auto& perm : report.sector_permutations)
    for (size_t s = 0; s < perm.size(); ++s) {
      const int a = find(static_cast<int>(s));
      const int b = find(perm[s]);
      if (a != b) parent[static_cast<size_t>(a)] = b;
    }
  std::vector<std::vector<int>> orbits(supported.size());
  for (size_t s = 0; s < supported.size(); ++s)
    orbits[static_cast<size_t>(find(static_cast<int>(s)))].push_back(static_cast<int>(s));
  for (auto& o : orbits)
    if (!o.empty()) report.ergodic_components.push_back(std::move(o));
  return report;
}

FiniteDimAlgebra crossed_product(const FiniteDimAlgebra& m, const GroupAction& act, double tol) {
  if (!act.abelian)
    throw Error("crossed_product: the acting group must carry an abelian structure");
  validate_action(m, act, tol);
  const FiniteAbelianGroup& g = *act.abelian;
  const Index n = m.ambient_dim();
  const Index total = n * g.order();
  const Matrix im = Matrix::Identity(n, n);

  std::vector<Matrix> gens;
  for (int s = 0; s < g.order(); ++s) gens.push_back(kron(im, lambda_translation(g, s)));
  for (const Matrix& b : m.generators()) {
    Matrix embedded = Matrix::Zero(total, total);
    for (int gamma = 0; gamma < g.order(); ++gamma) {
      Matrix e = Matrix::Zero(g.order(), g.order());
      e(gamma, gamma) = 1.0;
      embedded += kron(act.maps[static_cast<size_t>(gamma)].apply(m, b), e);
    }
    gens.push_back(embedded);
  }
  return generate_algebra(gens, total, tol);
}

DhrReport dhr_toy(const FiniteDimAlgebra& f, const FiniteAbelianGroup& g,
                  const std::vector<Matrix>& unitaries, double tol) {
  const Index n = f.ambient_dim();
  if (f.dim() != n * n)
    throw NotSubalgebraError("dhr_toy: F must act irreducibly (full matrix algebra)");
  if (static_cast<int>(unitaries.size()) != g.order())
    throw DimensionError("dhr_toy: one unitary per group element required");
  for (int a = 0; a < g.order(); ++a) {
    if (!is_unitary(unitaries[static_cast<size_t>(a)], std::sqrt(tol)))
      throw Error("dhr_toy: U is not unitary");
    for (int b = 0; b < g.order(); ++b) {
      const Matrix prod = unitaries[static_cast<size_t>(a)] * unitaries[static_cast<size_t>(b)];
      if ((prod - unitaries[static_cast<size_t>(g.add(a, b))]).norm() > std::sqrt(tol))
        throw Error("dhr_toy: U is not a representation of G");
    }
  }

  std::vector<AlgebraAutomorphism> maps;
  for (const Matrix& u : unitaries) maps.push_back(ad_automorphism(f, u, tol));
  const GroupAction act = make_action(g, std::move(maps));

  DhrReport report;
  report.fixed_points = fixed_point_algebra(f, act, tol);

  const FiniteDimAlgebra ug = generate_algebra(unitaries, n, tol);
  const FiniteDimAlgebra ug_comm = commutant(ug, tol);
  const FiniteDimAlgebra a_comm = commutant(report.fixed_points, tol);
  report.duality_residual = subspace_distance(report.fixed_points.span(), ug_comm.span());
  report.bicommutant_residual = subspace_distance(ug.span(), a_comm.span());

  // Characters appearing in U and their isotypic projections.
  std::vector<Matrix> isotypic;
  std::vector<int> char_index;
  for (int chi = 0; chi < g.order(); ++chi) {
    Matrix p = Matrix::Zero(n, n);
    for (int s = 0; s < g.order(); ++s)
      p += std::conj(pairing(g, chi, s)) * unitaries[static_cast<size_t>(s)];
    p /= static_cast<double>(g.order());
    if (p.norm() > std::sqrt(tol)) {
      isotypic.push_back(p);
      char_index.push_back(chi);
    }
  }

  const auto& zs = report.fixed_points.central_projections();
  report.sector_count = static_cast<Index>(zs.size());
  for (const Matrix& z : zs) {
    const int j = match_matrix(z, isotypic, 1e-6);
    if (j < 0) {
      report.labeling_residual = 1.0;
      report.sector_characters.push_back(-1);
    } else {
      report.labeling_residual =
          std::max(report.labeling_residual, (z - isotypic[static_cast<size_t>(j)]).norm());
      report.sector_characters.push_back(char_index[static_cast<size_t>(j)]);
    }
  }
  return report;
}

AugmentedReport augmented_algebra(const FiniteDimAlgebra& f, const GroupAction& act,
                                  const std::vector<int>& unbroken_subgroup, double tol) {
  if (!act.abelian)
    throw Error("augmented_algebra: the acting group must carry an abelian structure");
  validate_action(f, act, tol);
  const FiniteAbelianGroup& g = *act.abelian;

  // H must be a subgroup acting trivially on the sectors.
  std::vector<bool> in_h(static_cast<size_t>(g.order()), false);
  for (int h : unbroken_subgroup) {
    if (h < 0 || h >= g.order()) throw DimensionError("augmented_algebra: H element out of range");
    in_h[static_cast<size_t>(h)] = true;
  }
  if (!in_h[0]) throw Error("augmented_algebra: H must contain the identity");
  for (int a : unbroken_subgroup)
    for (int b : unbroken_subgroup)
      if (!in_h[static_cast<size_t>(g.add(a, b))])
        throw Error("augmented_algebra: H is not closed under the group law");
  const Representation id_rep = identity_representation(f);
  const BreakingReport breaking = breaking_analysis(f, act, id_rep, tol);
  for (int h : unbroken_subgroup)
    for (size_t s = 0; s < breaking.sector_permutations[static_cast<size_t>(h)].size(); ++s)
      if (breaking.sector_permutations[static_cast<size_t>(h)][s] != static_cast<int>(s))
        throw Error("augmented_algebra: H contains an element with non-trivial sector action");

  // Cosets of H, with the smallest member as section.
  std::vector<int> coset_of(static_cast<size_t>(g.order()), -1);
  std::vector<int> section;
  for (int a = 0; a < g.order(); ++a) {
    if (coset_of[static_cast<size_t>(a)] >= 0) continue;
    const int q = static_cast<int>(section.size());
    section.push_back(a);
    for (int h : unbroken_subgroup) coset_of[static_cast<size_t>(g.add(a, h))] = q;
  }
  const int q_order = static_cast<int>(section.size());

  const Index n = f.ambient_dim();
  const Index total = n * q_order;

  // pi_hat(x) = sum_q alpha_{section(q)}^{-1}(x) (x) E_q : the fibres over
  // the coset space, twisted by the section.
  auto pi_hat = [&](const Matrix& x) {
    Matrix out = Matrix::Zero(total, total);
    for (int q = 0; q < q_order; ++q) {
      Matrix e = Matrix::Zero(q_order, q_order);
      e(q, q) = 1.0;
      const int inv = g.negate(section[static_cast<size_t>(q)]);
      out += kron(act.maps[static_cast<size_t>(inv)].apply(f, x), e);
    }
    return out;
  };

  std::vector<Matrix> gens;
  for (const Matrix& x : f.generators()) gens.push_back(pi_hat(x));
  for (int q = 0; q < q_order; ++q) {
    Matrix e = Matrix::Zero(q_order, q_order);
    e(q, q) = 1.0;
    gens.push_back(kron(Matrix::Identity(n, n), e));
  }

  AugmentedReport report;
  report.quotient_order = q_order;
  report.algebra = generate_algebra(gens, total, tol);
  report.center_dim = center(report.algebra, tol).dim();

  // Unitary implementing alpha_h in the identity representation, for
  // h in H: either the stored Ad unitary or a unitarized intertwiner.
  auto implementer = [&](int h) -> Matrix {
    if (h == 0) return Matrix::Identity(n, n);
    const auto& m = act.maps[static_cast<size_t>(h)];
    if (m.implementing_unitary) return *m.implementing_unitary;
    std::vector<Matrix> images;
    for (const Matrix& x : f.basis()) images.push_back(m.apply(f, x));
    const auto sols = intertwiner_solutions(f.basis(), images, tol);
    if (sols.empty()) throw NumericalError("augmented_algebra: alpha_h is not implementable");
    CounterRng rng(0x1117u + static_cast<std::uint64_t>(h));
    for (int attempt = 0; attempt < 8; ++attempt) {
      Matrix t = Matrix::Zero(n, n);
      for (const Matrix& s : sols) t += rng.complex_normal() * s;
      const Matrix tt = t.adjoint() * t;
      if (rank_of(tt, tol) < n) continue;
      const Matrix u = t * hermitian_power(tt, -0.5);
      if (is_unitary(u, std::sqrt(tol))) return u;
    }
    throw NumericalError("augmented_algebra: could not unitarize the intertwiner for alpha_h");
  };

  // U_hat(g) = sum_q V_{g,q} (x) |q + g.|><q| with the H-cocycle
  // h(g,q) = g + section(q) - section(q + g.).
  double residual = 0.0;
  for (int gg = 0; gg < g.order(); ++gg) {
    Matrix u_hat = Matrix::Zero(total, total);
    for (int q = 0; q < q_order; ++q) {
      const int moved = coset_of[static_cast<size_t>(g.add(gg, section[static_cast<size_t>(q)]))];
      const int h = g.add(g.add(gg, section[static_cast<size_t>(q)]),
                          g.negate(section[static_cast<size_t>(moved)]));
      Matrix hop = Matrix::Zero(q_order, q_order);
      hop(moved, q) = 1.0;
      u_hat += kron(implementer(h), hop);
    }
    for (const Matrix& x : f.basis()) {
      const Matrix lhs = u_hat * pi_hat(x) * u_hat.adjoint();
      const Matrix rhs = pi_hat(act.maps[static_cast<size_t>(gg)].apply(f, x));
      residual = std::max(residual, (lhs - rhs).norm());
    }
    report.implementing_unitaries.push_back(std::move(u_hat));
  }
  report.implementing_residual = residual;
  return report;
}

}  // namespace opalg
