#include "opalg/modular.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "opalg/rng.hpp"

namespace opalg {

namespace {

std::vector<Index> complement_multiplicities(const Representation& pi) {
  std::vector<Index> mult(pi.multiplicities.size());
  for (size_t k = 0; k < mult.size(); ++k) mult[k] = pi.multiplicities[k] > 0 ? 0 : 1;
  return mult;
}

Matrix support_projection(const FiniteDimAlgebra& a, const std::vector<bool>& support) {
  Index total = 0;
  for (const Block& b : a.structure()) total += b.dim;
  Matrix p = Matrix::Zero(total, total);
  Index offset = 0;
  for (size_t k = 0; k < a.structure().size(); ++k) {
    const Index d = a.structure()[k].dim;
    if (support[k]) p.block(offset, offset, d, d) = Matrix::Identity(d, d);
    offset += d;
  }
  return p;
}

}  // namespace

Representation reduced_universal(std::shared_ptr<const FiniteDimAlgebra> algebra) {
  return represent(algebra, std::vector<Index>(static_cast<size_t>(algebra->block_count()), 1));
}

Representation disjoint_complement(const Representation& pi) {
  return represent(pi.algebra, complement_multiplicities(pi));
}

Representation biorthogonal(const Representation& pi) {
  return disjoint_complement(disjoint_complement(pi));
}

Matrix central_support(const Representation& pi) {
  return support_projection(*pi.algebra, pi.support());
}

Matrix universal_projection(const Representation& pi) {
  return support_projection(*pi.algebra, pi.support());
}

BiorthReport biorth_identities(const Representation& pi) {
  const Representation comp = disjoint_complement(pi);
  const Representation biorth = disjoint_complement(comp);
  const Representation triple = disjoint_complement(biorth);

  const Index n = central_support(pi).rows();
  BiorthReport report;
  report.complement_projection_identity =
      (universal_projection(comp) - (Matrix::Identity(n, n) - central_support(pi))).norm() == 0.0;
  report.biorth_support_identity =
      (universal_projection(biorth) - central_support(pi)).norm() == 0.0;
  report.triple_complement_identity = comp.support() == triple.support();
  report.contained_in_biorth = [&] {
    const auto s = pi.support();
    const auto b = biorth.support();
    for (size_t k = 0; k < s.size(); ++k)
      if (s[k] && !b[k]) return false;
    return true;
  }();
  return report;
}

bool quasi_equiv_via_biorth(const Representation& pi1, const Representation& pi2) {
  if (!same_underlying_algebra(pi1, pi2))
    throw DimensionError("quasi_equiv_via_biorth: representations of different algebras");
  return biorthogonal(pi1).support() == biorthogonal(pi2).support();
}

ModularData standard_form(const FiniteDimAlgebra& a, const State& phi, double tol) {
  const Matrix rho = algebra_compression(a, phi.density);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    if (es.eigenvalues().minCoeff() < tol)
      throw NotFaithfulError("standard_form: state is not faithful on the algebra");
  }

  GnsResult g = gns(a, State{rho}, tol);
  if (g.rep.dim != a.dim())
    throw NumericalError("standard_form: GNS space dimension mismatch for a faithful state");

  const Matrix rho_inv = hermitian_power(rho, -1.0);
  const Matrix rho_half = hermitian_power(rho, 0.5);
  const Matrix rho_half_inv = hermitian_power(rho, -0.5);

  // Superoperators in the algebra's orthonormal-basis coordinates, then
  // conjugated into GNS coordinates by the quotient map.
  const Index d = a.dim();
  Matrix delta_coords(d, d), j_coords(d, d);
  for (Index j = 0; j < d; ++j) {
    const Matrix& xj = a.basis()[static_cast<size_t>(j)];
    const Vector dc = a.coordinates(rho * xj * rho_inv);
    const Vector jc = a.coordinates(rho_half * xj.adjoint() * rho_half_inv);
    delta_coords.col(j) = dc;
    j_coords.col(j) = jc;
  }
  const Matrix t = g.quotient;
  const Matrix t_inv = g.quotient_pinv;

  ModularData md;
  md.rep = std::move(g.rep);
  md.cyclic = std::move(g.cyclic);
  md.delta = t * delta_coords * t_inv;
  md.delta = (md.delta + md.delta.adjoint()) / 2.0;
  md.j_unitary = t * j_coords * t_inv.conjugate();
  md.rho = rho;
  return md;
}

TomitaReport check_tomita(const ModularData& md, double tol) {
  TomitaReport report;
  const FiniteDimAlgebra& a = *md.rep.algebra;
  const Matrix delta_half = hermitian_power(md.delta, 0.5);

  // S = J Delta^{1/2} sends x Omega to x* Omega.
  for (const Matrix& x : a.basis()) {
    const Vector lhs = md.apply_j(delta_half * (md.rep.apply(x) * md.cyclic));
    const Vector rhs = md.rep.apply(x.adjoint()) * md.cyclic;
    report.s_residual = std::max(report.s_residual, (lhs - rhs).norm());
  }

  // J M J = M'.
  std::vector<Matrix> jmj;
  for (const Matrix& img : md.rep.images)
    jmj.push_back(md.j_unitary * img.conjugate() * md.j_unitary.conjugate());
  const std::vector<Matrix> comm = commutant_of_set(md.rep.images, md.rep.dim, tol);
  report.jmj_residual = subspace_distance(column_space(span_matrix(jmj), tol),
                                          column_space(span_matrix(comm), tol));

  // Modular flow keeps the algebra invariant.
  const Matrix rep_span = column_space(span_matrix(md.rep.images), tol);
  for (double t : {0.3, 1.0, M_PI}) {
    const Matrix flow = hermitian_power_it(md.delta, t);
    for (const Matrix& img : md.rep.images) {
      const Matrix moved = flow * img * flow.adjoint();
      report.flow_residual = std::max(report.flow_residual, span_residual(rep_span, vec(moved)));
    }
  }

  // Modular (KMS) boundary condition at t = i: with sigma_z(x) =
  // rho^{iz} x rho^{-iz}, phi(sigma_i(x) y) = phi(y x).
  const Matrix rho_inv = hermitian_power(md.rho, -1.0);
  CounterRng rng(0x4B4D53u);
  for (int trial = 0; trial < 24; ++trial) {
    Vector cx(a.dim()), cy(a.dim());
    for (Index i = 0; i < a.dim(); ++i) {
      cx(i) = rng.complex_normal();
      cy(i) = rng.complex_normal();
    }
    const Matrix x = a.from_coordinates(cx);
    const Matrix y = a.from_coordinates(cy);
    const Complex lhs = (md.rho * (rho_inv * x * md.rho) * y).trace();
    const Complex rhs = (md.rho * y * x).trace();
    report.kms_residual = std::max(report.kms_residual, std::abs(lhs - rhs));
  }
  return report;
}

GaloisReport galois_identities(const FiniteDimAlgebra& m, double tol) {
  const Index n = m.ambient_dim();
  const FiniteDimAlgebra mprime = commutant(m, tol);
  const FiniteDimAlgebra z = center(m, tol);
  const FiniteDimAlgebra zprime = commutant(z, tol);
  const FiniteDimAlgebra join = join_algebra(m, mprime, tol);

  GaloisReport report;
  report.center_commutant_residual = subspace_distance(zprime.span(), join.span());
  report.factor = m.block_count() == 1;
  report.join_is_everything = join.dim() == n * n;

  // Fixed points of the join under conjugation by unitaries exp(i theta h)
  // over a Hermitian spanning set of M'; theta keeps the spectrum inside
  // (-pi, pi) so commuting with the unitary is commuting with h.
  std::vector<Matrix> herm;
  for (const Matrix& x : mprime.basis()) {
    herm.push_back((x + x.adjoint()) / 2.0);
    herm.push_back((x - x.adjoint()) / Complex(0.0, 2.0));
  }
  std::vector<Matrix> constraints;
  for (const Matrix& h : herm) {
    if (h.norm() < tol) continue;
    const double theta = 1.0 / (1.0 + h.norm());
    const Matrix u = hermitian_function(
        h, [theta](double ev) { return std::exp(Complex(0.0, theta * ev)); });
    constraints.push_back(kron(u.conjugate(), u) - Matrix::Identity(n * n, n * n));
  }
  const Matrix s = join.span();
  Matrix stacked(static_cast<Index>(constraints.size()) * n * n, s.cols());
  for (size_t c = 0; c < constraints.size(); ++c)
    stacked.middleRows(static_cast<Index>(c) * n * n, n * n) = constraints[c] * s;
  const Matrix coeff = null_space(stacked, tol);
  const Matrix fixed = column_space(s * coeff, tol);
  report.fixed_point_residual = subspace_distance(fixed, m.span());
  return report;
}

UniversalityReport standard_universality(const Representation& pi, const ModularData& sigma,
                                         double tol) {
  if (!same_underlying_algebra(pi, sigma.rep))
    throw DimensionError("standard_universality: representations of different algebras");
  const Representation biorth = biorthogonal(pi);

  UniversalityReport report;
  const auto hom_rep = intertwiner_space(pi, sigma.rep, tol);
  const auto hom_biorth = intertwiner_space(biorth, sigma.rep, tol);
  report.hom_dim_rep = static_cast<Index>(hom_rep.size());
  report.hom_dim_biorth = static_cast<Index>(hom_biorth.size());
  report.dims_equal = report.hom_dim_rep == report.hom_dim_biorth;

  // eta : H_pi -> H_pi°° selects the first multiplicity slice of every
  // supported block (unitary when pi is multiplicity-free).
  const FiniteDimAlgebra& a = *pi.algebra;
  Matrix eta = Matrix::Zero(biorth.dim, pi.dim);
  Index row = 0, col = 0;
  bool mult_free = true;
  for (size_t k = 0; k < a.structure().size(); ++k) {
    const Index d = a.structure()[k].dim;
    const Index mk = pi.multiplicities[k];
    if (mk == 0) continue;
    if (mk > 1) mult_free = false;
    for (Index i = 0; i < d; ++i) eta(row + i, col + i * mk) = 1.0;
    row += d;
    col += d * mk;
  }
  report.eta_invertible = mult_free && row == pi.dim;

  for (const Matrix& t : hom_rep) {
    const Matrix t_biorth = t * eta.adjoint();
    report.factorization_residual =
        std::max(report.factorization_residual, (t - t_biorth * eta).norm());
  }
  return report;
}

}  // namespace opalg
