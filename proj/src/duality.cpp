#include "opalg/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace opalg {

Matrix PermutationUnitary::dense() const {
  Matrix m = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) m(image[static_cast<size_t>(i)], i) = 1.0;
  return m;
}

PermutationUnitary multiplicative_unitary(const FiniteAbelianGroup& g) {
  const Index n = g.order();
  PermutationUnitary v;
  v.dim = n * n;
  v.image.resize(static_cast<size_t>(v.dim));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      v.image[static_cast<size_t>(s * n + t)] = s * n + g.add(s, t);
  return v;
}

namespace {

// Leg embeddings of a permutation on d (x) d into d (x) d (x) d.
std::vector<Index> embed_perm(const std::vector<Index>& p, Index d, int legA, int legB) {
  const Index total = d * d * d;
  std::vector<Index> out(static_cast<size_t>(total));
  for (Index i = 0; i < total; ++i) {
    Index idx[3] = {i / (d * d), (i / d) % d, i % d};
    const Index pair = idx[legA] * d + idx[legB];
    const Index q = p[static_cast<size_t>(pair)];
    idx[legA] = q / d;
    idx[legB] = q % d;
    out[static_cast<size_t>(i)] = idx[0] * d * d + idx[1] * d + idx[2];
  }
  return out;
}

std::vector<Index> compose(const std::vector<Index>& outer, const std::vector<Index>& inner) {
  std::vector<Index> out(inner.size());
  for (size_t i = 0; i < inner.size(); ++i)
    out[i] = outer[static_cast<size_t>(inner[i])];
  return out;
}

Matrix embed_dense(const Matrix& v, Index d, int legA, int legB) {
  const Index total = d * d * d;
  Matrix out = Matrix::Zero(total, total);
  for (Index col = 0; col < total; ++col) {
    Index idx[3] = {col / (d * d), (col / d) % d, col % d};
    const Index pairIn = idx[legA] * d + idx[legB];
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b) {
        const Complex val = v(a * d + b, pairIn);
        if (val == Complex(0.0, 0.0)) continue;
        Index jdx[3] = {idx[0], idx[1], idx[2]};
        jdx[legA] = a;
        jdx[legB] = b;
        out(jdx[0] * d * d + jdx[1] * d + jdx[2], col) += val;
      }
  }
  return out;
}

}  // namespace

double check_pentagonal(const PermutationUnitary& v) {
  const Index d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.dim))));
  if (d * d != v.dim) throw DimensionError("check_pentagonal: size is not a tensor square");
  const auto v12 = embed_perm(v.image, d, 0, 1);
  const auto v13 = embed_perm(v.image, d, 0, 2);
  const auto v23 = embed_perm(v.image, d, 1, 2);
  const auto lhs = compose(v12, compose(v13, v23));
  const auto rhs = compose(v23, v12);
  Index mismatches = 0;
  for (size_t i = 0; i < lhs.size(); ++i)
    if (lhs[i] != rhs[i]) ++mismatches;
  return std::sqrt(2.0 * static_cast<double>(mismatches));
}

double check_pentagonal(const Matrix& v) {
  if (!is_square(v)) throw DimensionError("check_pentagonal: matrix not square");
  const Index d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.rows()))));
  if (d * d != v.rows()) throw DimensionError("check_pentagonal: size is not a tensor square");
  const Matrix v12 = embed_dense(v, d, 0, 1);
  const Matrix v13 = embed_dense(v, d, 0, 2);
  const Matrix v23 = embed_dense(v, d, 1, 2);
  return (v12 * v13 * v23 - v23 * v12).norm();
}

Matrix lambda_translation(const FiniteAbelianGroup& g, int element) {
  const Index n = g.order();
  Matrix m = Matrix::Zero(n, n);
  for (int t = 0; t < n; ++t) m(g.add(element, t), t) = 1.0;
  return m;
}

Matrix lambda_of(const FiniteAbelianGroup& g, const Vector& weights) {
  if (weights.size() != g.order()) throw DimensionError("lambda_of: weight vector length");
  Matrix out = Matrix::Zero(g.order(), g.order());
  for (int s = 0; s < g.order(); ++s) out += weights(s) * lambda_translation(g, s);
  return out;
}

Vector convolution(const FiniteAbelianGroup& g, const Vector& w1, const Vector& w2) {
  if (w1.size() != g.order() || w2.size() != g.order())
    throw DimensionError("convolution: weight vector length");
  Vector out = Vector::Zero(g.order());
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b) out(g.add(a, b)) += w1(a) * w2(b);
  return out;
}

Matrix fourier_matrix(const FiniteAbelianGroup& g) {
  const Index n = g.order();
  Matrix f(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (int chi = 0; chi < n; ++chi)
    for (int t = 0; t < n; ++t) f(chi, t) = s * pairing(g, chi, t);
  return f;
}

MasaData verify_masa(const FiniteDimAlgebra& m, const FiniteDimAlgebra& n, double tol) {
  const Index dim = m.ambient_dim();
  if (n.ambient_dim() != dim) throw DimensionError("verify_masa: ambient dimensions differ");
  if (!(m.is_factor() && m.dim() == dim * dim))
    throw NotSubalgebraError("verify_masa: M must be a full matrix factor");
  for (const Matrix& x : n.basis())
    if (!m.contains(x, tol)) throw NotSubalgebraError("verify_masa: N is not contained in M");
  if (!n.is_commutative(tol)) throw NotCommutativeError("verify_masa: N is not commutative");

  // N' in the full factor; maximality means N' = N.
  const FiniteDimAlgebra rel = commutant(n, tol);
  if (rel.dim() != n.dim())
    throw NotMaximalError("verify_masa: N' intersect M strictly contains N (dim " +
                          std::to_string(rel.dim()) + " vs " + std::to_string(n.dim()) + ")");

  // The minimal projections of a MASA are its spectral projections; they
  // are rank one exactly when the joint spectrum is simple, and they come
  // already in canonical order, which fixes the labelling gamma = 0..n-1.
  const auto& zs = n.central_projections();
  for (const Matrix& z : zs)
    if (std::llround(z.trace().real()) != 1)
      throw NotMaximalError("verify_masa: degenerate joint spectrum");
  if (static_cast<Index>(zs.size()) != dim)
    throw NotMaximalError("verify_masa: fewer joint eigenspaces than the ambient dimension");

  MasaData out;
  out.factor = m;
  out.masa = n;
  out.eigenbasis = Matrix(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    Vector v = column_space(zs[static_cast<size_t>(j)], tol).col(0);
    // Deterministic phase: largest-magnitude entry real positive.
    Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    out.eigenbasis.col(j) = v;
    out.spectral_projections.push_back(v * v.adjoint());
  }
  return out;
}

ConditionalSectorReport conditional_sector_structure(const FiniteDimAlgebra& m,
                                                     const FiniteDimAlgebra& n, double tol) {
  if (!m.is_factor()) throw NotSubalgebraError("conditional_sector_structure: M must be a factor");
  if (m.dim() == m.ambient_dim() * m.ambient_dim())
    verify_masa(m, n, tol);  // full factor: also validates the MASA property

  const FiniteDimAlgebra tensor = tensor_algebra(m, n, tol);
  const FiniteDimAlgebra z = center(tensor, tol);

  // 1 (x) N as a span on the product space.
  const Matrix im = Matrix::Identity(m.ambient_dim(), m.ambient_dim());
  std::vector<Matrix> one_n;
  for (const Matrix& y : n.basis()) one_n.push_back(kron(im, y));

  ConditionalSectorReport report;
  report.sector_count = z.block_count();
  report.center_residual = subspace_distance(z.span(), column_space(span_matrix(one_n), tol));
  report.tensor_center = z;
  return report;
}

}  // namespace opalg
