#include "opalg/states.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace opalg {

State make_state(Matrix density, double tol) {
  if (!is_valid_state(density, tol))
    throw Error("make_state: density is not positive semidefinite with unit trace");
  return State{std::move(density)};
}

State vector_state(const Vector& xi) {
  const Vector v = xi / xi.norm();
  return State{v * v.adjoint()};
}

State tracial_state(Index n) {
  return State{Matrix::Identity(n, n) / static_cast<double>(n)};
}

bool is_valid_state(const Matrix& density, double tol) {
  if (!is_hermitian(density, tol)) return false;
  if (std::abs(density.trace() - Complex(1.0, 0.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(density);
  return es.eigenvalues().minCoeff() > -tol;
}

Matrix algebra_compression(const FiniteDimAlgebra& a, const Matrix& rho) {
  Matrix out = Matrix::Zero(a.ambient_dim(), a.ambient_dim());
  for (const Matrix& x : a.basis()) out += hs_inner(x, rho) * x;
  return out;
}

RealVector sector_distribution(const FiniteDimAlgebra& a, const State& omega) {
  const auto& zs = a.central_projections();
  RealVector w(static_cast<Index>(zs.size()));
  for (size_t k = 0; k < zs.size(); ++k)
    w(static_cast<Index>(k)) = omega(zs[k]).real();
  return w;
}

bool is_factor_state(const FiniteDimAlgebra& a, const State& omega, double tol) {
  const RealVector w = sector_distribution(a, omega);
  int supported = 0;
  for (Index k = 0; k < w.size(); ++k)
    if (w(k) > tol) ++supported;
  return supported == 1;
}

std::vector<CentralComponent> central_decomposition(const FiniteDimAlgebra& a,
                                                    const State& omega, double tol) {
  const auto& zs = a.central_projections();
  const RealVector w = sector_distribution(a, omega);
  std::vector<CentralComponent> comps;
  for (size_t k = 0; k < zs.size(); ++k) {
    const double wk = w(static_cast<Index>(k));
    if (wk <= tol) continue;
    const Matrix cut = zs[k] * omega.density * zs[k];
    comps.push_back({wk, State{algebra_compression(a, cut) / wk}});
  }
  return comps;
}

CentralExpectation::CentralExpectation(std::vector<Matrix> projections,
                                       std::vector<State> components)
    : projections_(std::move(projections)), components_(std::move(components)) {
  if (projections_.size() != components_.size())
    throw DimensionError("CentralExpectation: one component state per projection required");
}

Matrix CentralExpectation::operator()(const Matrix& x) const {
  const Index n = projections_.empty() ? 0 : projections_[0].rows();
  Matrix out = Matrix::Zero(n, n);
  for (size_t k = 0; k < projections_.size(); ++k) {
    const Complex value = (components_[k].density * projections_[k] * x * projections_[k]).trace();
    out += value * projections_[k];
  }
  return out;
}

CentralExpectation conditional_expectation(const FiniteDimAlgebra& a, const State& omega,
                                           double tol) {
  const auto& zs = a.central_projections();
  const RealVector w = sector_distribution(a, omega);
  std::vector<State> comps;
  for (size_t k = 0; k < zs.size(); ++k) {
    const double wk = w(static_cast<Index>(k));
    if (wk <= tol)
      throw NotFaithfulError(
          "conditional_expectation: sector " + std::to_string(k) +
          " has zero weight; the central measure must be faithful");
    const Matrix cut = zs[k] * omega.density * zs[k];
    comps.push_back(State{algebra_compression(a, cut) / wk});
  }
  return CentralExpectation(zs, std::move(comps));
}

State c_to_q_channel(const FiniteDimAlgebra& a, const State& omega, const RealVector& target,
                     double tol) {
  const CentralExpectation lambda = conditional_expectation(a, omega, tol);
  if (target.size() != lambda.sector_count())
    throw DimensionError("c_to_q_channel: target length != sector count");
  double sum = 0.0;
  for (Index k = 0; k < target.size(); ++k) {
    if (target(k) < -tol) throw Error("c_to_q_channel: negative target weight");
    sum += target(k);
  }
  if (std::abs(sum - 1.0) > std::sqrt(tol))
    throw Error("c_to_q_channel: target weights do not sum to 1");
  Matrix rho = Matrix::Zero(a.ambient_dim(), a.ambient_dim());
  for (Index k = 0; k < target.size(); ++k)
    rho += target(k) * lambda.components()[static_cast<size_t>(k)].density;
  return State{rho};
}

GnsResult gns(const FiniteDimAlgebra& a, const State& omega, double tol) {
  if (!is_valid_state(omega.density, std::sqrt(tol)))
    throw Error("gns: omega is not a positive normalized state");
  const auto& basis = a.basis();
  const Index d = a.dim();

  Matrix gram(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      gram(i, j) = omega(Matrix(basis[static_cast<size_t>(i)].adjoint() *
                                basis[static_cast<size_t>(j)]));
  gram = (gram + gram.adjoint()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double thr = tol * std::max(1.0, es.eigenvalues().maxCoeff());
  std::vector<Index> keep;
  for (Index i = 0; i < d; ++i)
    if (es.eigenvalues()(i) > thr) keep.push_back(i);
  const Index r = static_cast<Index>(keep.size());

  // Quotient map Q : basis coordinates -> GNS coordinates, Q = L^{1/2} V*.
  Matrix q(r, d), qpinv(d, r);
  for (Index i = 0; i < r; ++i) {
    const double s = std::sqrt(es.eigenvalues()(keep[static_cast<size_t>(i)]));
    q.row(i) = s * es.eigenvectors().col(keep[static_cast<size_t>(i)]).adjoint();
    qpinv.col(i) = es.eigenvectors().col(keep[static_cast<size_t>(i)]) / s;
  }

  Representation pi;
  pi.algebra = std::make_shared<FiniteDimAlgebra>(a);
  pi.dim = r;
  pi.images.reserve(static_cast<size_t>(d));
  for (Index g = 0; g < d; ++g) {
    // Left multiplication in basis coordinates, then conjugated by Q.
    Matrix lm(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j)
        lm(i, j) = hs_inner(basis[static_cast<size_t>(i)],
                            basis[static_cast<size_t>(g)] * basis[static_cast<size_t>(j)]);
    pi.images.push_back(q * lm * qpinv);
  }

  // Multiplicity of block k = rank(pi(z_k)) / n_k; the rank of a projection
  // is its trace.
  for (Index k = 0; k < a.block_count(); ++k) {
    Matrix pz = Matrix::Zero(r, r);
    const Vector c = a.coordinates(a.central_projections()[static_cast<size_t>(k)]);
    for (Index g = 0; g < d; ++g) pz += c(g) * pi.images[static_cast<size_t>(g)];
    const double tr = pz.trace().real();
    const Index nk = a.structure()[static_cast<size_t>(k)].dim;
    const Index mk = static_cast<Index>(std::llround(tr / static_cast<double>(nk)));
    if (std::abs(tr - static_cast<double>(mk * nk)) > std::sqrt(tol))
      throw NumericalError("gns: non-integral block multiplicity");
    pi.multiplicities.push_back(mk);
  }

  GnsResult out;
  out.rep = std::move(pi);
  out.cyclic = q * a.coordinates(Matrix::Identity(a.ambient_dim(), a.ambient_dim()));
  out.gram = std::move(gram);
  out.quotient = std::move(q);
  out.quotient_pinv = std::move(qpinv);
  return out;
}

}  // namespace opalg
