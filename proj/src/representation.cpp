#include "opalg/representation.hpp"

namespace opalg {

Matrix Representation::apply(const Matrix& x) const {
  const Vector c = algebra->coordinates(x);
  Matrix out = Matrix::Zero(dim, dim);
  for (size_t i = 0; i < images.size(); ++i) out += c(static_cast<Index>(i)) * images[i];
  return out;
}

std::vector<bool> Representation::support() const {
  std::vector<bool> s(multiplicities.size());
  for (size_t k = 0; k < multiplicities.size(); ++k) s[k] = multiplicities[k] > 0;
  return s;
}

Representation represent(std::shared_ptr<const FiniteDimAlgebra> algebra,
                         std::vector<Index> multiplicities) {
  if (static_cast<Index>(multiplicities.size()) != algebra->block_count())
    throw DimensionError("represent: one multiplicity per block required");
  Representation pi;
  pi.algebra = algebra;
  pi.multiplicities = std::move(multiplicities);
  pi.dim = 0;
  for (size_t k = 0; k < pi.multiplicities.size(); ++k) {
    if (pi.multiplicities[k] < 0) throw DimensionError("represent: negative multiplicity");
    pi.dim += algebra->structure()[k].dim * pi.multiplicities[k];
  }
  pi.images.reserve(algebra->basis().size());
  for (const Matrix& x : algebra->basis()) {
    Matrix img = Matrix::Zero(pi.dim, pi.dim);
    Index offset = 0;
    for (size_t k = 0; k < pi.multiplicities.size(); ++k) {
      const Index m = pi.multiplicities[k];
      if (m == 0) continue;
      const Index d = algebra->structure()[k].dim;
      img.block(offset, offset, d * m, d * m) =
          kron(algebra->block_component(x, static_cast<Index>(k)), Matrix::Identity(m, m));
      offset += d * m;
    }
    pi.images.push_back(std::move(img));
  }
  return pi;
}

Representation represent(const FiniteDimAlgebra& algebra, std::vector<Index> multiplicities) {
  return represent(std::make_shared<FiniteDimAlgebra>(algebra), std::move(multiplicities));
}

Representation identity_representation(std::shared_ptr<const FiniteDimAlgebra> algebra) {
  Representation pi;
  pi.algebra = algebra;
  for (const Block& b : algebra->structure()) pi.multiplicities.push_back(b.multiplicity);
  pi.images = algebra->basis();
  pi.dim = algebra->ambient_dim();
  return pi;
}

Representation identity_representation(const FiniteDimAlgebra& algebra) {
  return identity_representation(std::make_shared<FiniteDimAlgebra>(algebra));
}

Representation direct_sum(const Representation& a, const Representation& b) {
  if (!same_underlying_algebra(a, b))
    throw DimensionError("direct_sum: representations of different algebras");
  std::vector<Index> mult(a.multiplicities.size());
  for (size_t k = 0; k < mult.size(); ++k) mult[k] = a.multiplicities[k] + b.multiplicities[k];
  return represent(a.algebra, std::move(mult));
}

bool same_underlying_algebra(const Representation& a, const Representation& b, double tol) {
  if (a.algebra == b.algebra) return true;
  if (!a.algebra || !b.algebra) return false;
  if (a.algebra->ambient_dim() != b.algebra->ambient_dim()) return false;
  if (a.algebra->structure() != b.algebra->structure()) return false;
  return subspace_distance(a.algebra->span(), b.algebra->span()) < tol;
}

std::vector<Matrix> intertwiner_space(const Representation& pi1, const Representation& pi2,
                                      double tol) {
  if (!same_underlying_algebra(pi1, pi2, tol))
    throw DimensionError("intertwiner_space: representations of different algebras");
  if (pi1.dim == 0 || pi2.dim == 0) return {};
  return intertwiner_solutions(pi1.images, pi2.images, tol);
}

bool quasi_equivalent(const Representation& pi1, const Representation& pi2) {
  if (!same_underlying_algebra(pi1, pi2))
    throw DimensionError("quasi_equivalent: representations of different algebras");
  return pi1.support() == pi2.support();
}

bool disjoint(const Representation& pi1, const Representation& pi2) {
  if (!same_underlying_algebra(pi1, pi2))
    throw DimensionError("disjoint: representations of different algebras");
  const auto s1 = pi1.support();
  const auto s2 = pi2.support();
  for (size_t k = 0; k < s1.size(); ++k)
    if (s1[k] && s2[k]) return false;
  return true;
}

}  // namespace opalg
