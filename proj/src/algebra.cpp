#include "opalg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "opalg/rng.hpp"

namespace opalg {

namespace {

// Partition the columns of an isometry into joint eigenspaces of the
// commuting Hermitian matrices hs (restricted to its range).
std::vector<Matrix> joint_eigenspaces(const std::vector<Matrix>& hs, const Matrix& isometry,
                                      double tol) {
  std::vector<Matrix> parts = {isometry};
  for (const Matrix& h : hs) {
    std::vector<Matrix> refined;
    for (const Matrix& w : parts) {
      const Matrix compressed = w.adjoint() * h * w;
      Eigen::SelfAdjointEigenSolver<Matrix> es(compressed);
      const RealVector ev = es.eigenvalues();
      Index start = 0;
      for (Index i = 1; i <= ev.size(); ++i) {
        if (i == ev.size() || ev(i) - ev(i - 1) > tol * std::max(1.0, std::abs(ev(i)))) {
          refined.push_back(w * es.eigenvectors().middleCols(start, i - start));
          start = i;
        }
      }
    }
    parts = std::move(refined);
  }
  return parts;
}

// Hermitian spanning set of a *-closed span.
std::vector<Matrix> hermitian_spanning_set(const std::vector<Matrix>& basis) {
  std::vector<Matrix> hs;
  hs.reserve(basis.size() * 2);
  for (const Matrix& x : basis) {
    hs.push_back((x + x.adjoint()) / 2.0);
    hs.push_back((x - x.adjoint()) / Complex(0.0, 2.0));
  }
  return hs;
}

double rounded(double x) { return std::round(x * 1e6) / 1e6; }

// Canonical sector order: block dimension ascending, then descending
// lexicographic order of the rounded diagonal of the central projection.
bool canonical_block_less(const std::pair<Index, RealVector>& a,
                          const std::pair<Index, RealVector>& b) {
  if (a.first != b.first) return a.first < b.first;
  for (Index i = 0; i < a.second.size(); ++i) {
    const double da = rounded(a.second(i));
    const double db = rounded(b.second(i));
    if (da != db) return da > db;
  }
  return false;
}

struct BlockData {
  Matrix projection;       // minimal central projection z_k
  Matrix column_basis;     // n x (n_k * m_k), ordered (i slow, j fast)
  Index block_dim = 0;     // n_k
  Index multiplicity = 0;  // m_k
};

// Split one central summand (given by the isometry onto its range) into
// matrix-unit form. Returns block dim, multiplicity, and the ordered
// column basis b_{i,j} realizing x |-> x_k (x) 1_{m_k}.
BlockData analyze_summand(const std::vector<Matrix>& algebra_basis, const Matrix& isometry,
                          double tol) {
  const Index d = isometry.cols();
  BlockData out;
  out.projection = isometry * isometry.adjoint();

  // Compress the algebra to the summand and orthonormalize.
  std::vector<Matrix> compressed;
  compressed.reserve(algebra_basis.size());
  for (const Matrix& x : algebra_basis) compressed.push_back(isometry.adjoint() * x * isometry);
  const Matrix comp_span = column_space(span_matrix(compressed), tol);
  const Index alg_dim = comp_span.cols();
  const Index nk = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(alg_dim))));
  if (nk * nk != alg_dim)
    throw NumericalError("block decomposition: compressed algebra dimension is not a square");
  if (d % nk != 0)
    throw NumericalError("block decomposition: summand dimension not divisible by block dim");
  const Index mk = d / nk;
  out.block_dim = nk;
  out.multiplicity = mk;

  if (mk == 1) {
    out.column_basis = isometry;
    return out;
  }

  const std::vector<Matrix> comp_basis = unstack_columns(comp_span, d, d);
  const std::vector<Matrix> comm = commutant_of_set(comp_basis, d, tol);
  if (static_cast<Index>(comm.size()) != mk * mk)
    throw NumericalError("block decomposition: commutant dimension mismatch in summand");

  // Eigenspaces of a generic Hermitian element of the commutant are the
  // multiplicity slices; retry the draw if eigenvalues cluster badly.
  CounterRng rng(0x5EC702u);
  std::vector<Matrix> slices;
  for (int attempt = 0; attempt < 8 && slices.empty(); ++attempt) {
    Matrix h = Matrix::Zero(d, d);
    for (const Matrix& y : hermitian_spanning_set(comm)) h += rng.normal() * y;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const RealVector ev = es.eigenvalues();
    std::vector<Matrix> candidate;
    Index start = 0;
    bool ok = true;
    for (Index i = 1; i <= ev.size(); ++i) {
      if (i == ev.size() || ev(i) - ev(i - 1) > 1e-6 * std::max(1.0, std::abs(ev(i)))) {
        if (i - start != nk) {
          ok = false;
          break;
        }
        candidate.push_back(es.eigenvectors().middleCols(start, i - start));
        start = i;
      }
    }
    if (ok && static_cast<Index>(candidate.size()) == mk) slices = std::move(candidate);
  }
  if (slices.empty())
    throw NumericalError("block decomposition: could not split multiplicity space");

  // Restricted actions pi_j(x) = V_j* x V_j; intertwiners u_j : pi_1 -> pi_j
  // are unique up to phase (Schur), normalized to unitaries.
  std::vector<std::vector<Matrix>> pi(slices.size());
  for (size_t j = 0; j < slices.size(); ++j)
    for (const Matrix& x : comp_basis) pi[j].push_back(slices[j].adjoint() * x * slices[j]);

  std::vector<Matrix> u(slices.size());
  u[0] = Matrix::Identity(nk, nk);
  for (size_t j = 1; j < slices.size(); ++j) {
    const auto sols = intertwiner_solutions(pi[0], pi[j], tol);
    if (sols.size() != 1)
      throw NumericalError("block decomposition: intertwiner space not one-dimensional");
    Matrix t = sols[0];
    const Matrix tt = t.adjoint() * t;
    const double scale = std::sqrt(tt.trace().real() / static_cast<double>(nk));
    t /= scale;
    // Deterministic phase: largest-magnitude entry made real positive.
    Index r = 0, c = 0;
    t.cwiseAbs().maxCoeff(&r, &c);
    t *= std::conj(t(r, c)) / std::abs(t(r, c));
    u[j] = t;
  }

  Matrix cols(isometry.rows(), d);
  for (Index i = 0; i < nk; ++i)
    for (Index j = 0; j < mk; ++j)
      cols.col(i * mk + j) = isometry * (slices[static_cast<size_t>(j)] *
                                         (u[static_cast<size_t>(j)] *
                                          Vector::Unit(nk, i)));
  out.column_basis = cols;
  return out;
}

FiniteDimAlgebra analyze(Index n, std::vector<Matrix> basis, std::vector<Matrix> generators,
                         double tol) {
  // Center = span intersect commutant-of-span.
  const Matrix sp = column_space(span_matrix(basis), tol);
  const std::vector<Matrix> on_basis = unstack_columns(sp, n, n);
  const std::vector<Matrix> comm =
      commutant_of_set(generators.empty() ? on_basis : generators, n, tol);
  const Matrix center_span = intersect_spans(sp, column_space(span_matrix(comm), tol), tol);
  const std::vector<Matrix> center_basis = unstack_columns(center_span, n, n);

  // Joint eigenspaces of the (commutative) center are the ranges of the
  // minimal central projections.
  const std::vector<Matrix> parts =
      joint_eigenspaces(hermitian_spanning_set(center_basis), Matrix::Identity(n, n), tol);

  std::vector<BlockData> blocks;
  blocks.reserve(parts.size());
  for (const Matrix& w : parts) blocks.push_back(analyze_summand(on_basis, w, tol));

  std::vector<size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return canonical_block_less({blocks[a].block_dim, blocks[a].projection.diagonal().real()},
                                {blocks[b].block_dim, blocks[b].projection.diagonal().real()});
  });

  std::vector<Block> structure;
  std::vector<Matrix> central;
  Matrix unitary(n, n);
  Index col = 0;
  for (size_t idx : order) {
    const BlockData& b = blocks[idx];
    structure.push_back({b.block_dim, b.multiplicity});
    central.push_back(b.projection);
    unitary.middleCols(col, b.column_basis.cols()) = b.column_basis;
    col += b.column_basis.cols();
  }
  if (col != n) throw NumericalError("block decomposition: column count mismatch");

  Index sq = 0;
  for (const Block& b : structure) sq += b.dim * b.dim;
  if (sq != static_cast<Index>(on_basis.size()))
    throw NumericalError("block decomposition: sum of squared block dims != algebra dim");

  return FiniteDimAlgebra::from_parts(n, on_basis, std::move(generators), std::move(structure),
                                      std::move(unitary), std::move(central), tol);
}

}  // namespace

FiniteDimAlgebra FiniteDimAlgebra::from_parts(Index n, std::vector<Matrix> basis,
                                              std::vector<Matrix> generators,
                                              std::vector<Block> structure, Matrix block_unitary,
                                              std::vector<Matrix> central, double tol) {
  FiniteDimAlgebra a;
  a.n_ = n;
  a.basis_ = std::move(basis);
  a.generators_ = std::move(generators);
  a.structure_ = std::move(structure);
  a.block_unitary_ = std::move(block_unitary);
  a.central_ = std::move(central);
  a.span_ = span_matrix(a.basis_);
  a.tol_ = tol;
  return a;
}

bool FiniteDimAlgebra::contains(const Matrix& x, double tol) const {
  if (x.rows() != n_ || x.cols() != n_) return false;
  return span_residual(span_, vec(x)) < tol;
}

Matrix FiniteDimAlgebra::project(const Matrix& x) const {
  return unvec(span_ * (span_.adjoint() * vec(x)), n_, n_);
}

Vector FiniteDimAlgebra::coordinates(const Matrix& x) const {
  return span_.adjoint() * vec(x);
}

Matrix FiniteDimAlgebra::from_coordinates(const Vector& c) const {
  return unvec(span_ * c, n_, n_);
}

Matrix FiniteDimAlgebra::block_component(const Matrix& x, Index k) const {
  Index offset = 0;
  for (Index b = 0; b < k; ++b) offset += structure_[static_cast<size_t>(b)].dim *
                                          structure_[static_cast<size_t>(b)].multiplicity;
  const Block& blk = structure_[static_cast<size_t>(k)];
  const Matrix tilde = block_unitary_.adjoint() * x * block_unitary_;
  Matrix comp(blk.dim, blk.dim);
  for (Index i = 0; i < blk.dim; ++i)
    for (Index j = 0; j < blk.dim; ++j)
      comp(i, j) = tilde(offset + i * blk.multiplicity, offset + j * blk.multiplicity);
  return comp;
}

Matrix FiniteDimAlgebra::from_block_components(const std::vector<Matrix>& comps) const {
  if (comps.size() != structure_.size())
    throw DimensionError("from_block_components: one component per block required");
  Matrix tilde = Matrix::Zero(n_, n_);
  Index offset = 0;
  for (size_t k = 0; k < structure_.size(); ++k) {
    const Block& blk = structure_[k];
    if (comps[k].rows() != blk.dim || comps[k].cols() != blk.dim)
      throw DimensionError("from_block_components: component size mismatch");
    tilde.block(offset, offset, blk.dim * blk.multiplicity, blk.dim * blk.multiplicity) =
        kron(comps[k], Matrix::Identity(blk.multiplicity, blk.multiplicity));
    offset += blk.dim * blk.multiplicity;
  }
  return block_unitary_ * tilde * block_unitary_.adjoint();
}

bool FiniteDimAlgebra::is_commutative(double tol) const {
  for (size_t i = 0; i < basis_.size(); ++i)
    for (size_t j = i + 1; j < basis_.size(); ++j)
      if ((basis_[i] * basis_[j] - basis_[j] * basis_[i]).norm() > tol) return false;
  return true;
}

FiniteDimAlgebra generate_algebra(const std::vector<Matrix>& generators, Index ambient_dim,
                                  double tol) {
  std::vector<Matrix> gens;
  for (const Matrix& g : generators) {
    if (g.rows() != ambient_dim || g.cols() != ambient_dim)
      throw DimensionError("generate_algebra: generator is not " + std::to_string(ambient_dim) +
                           "x" + std::to_string(ambient_dim));
    gens.push_back(g);
    gens.push_back(g.adjoint());
  }
  gens.push_back(Matrix::Identity(ambient_dim, ambient_dim));
  const std::vector<Matrix> comm = commutant_of_set(gens, ambient_dim, tol);
  std::vector<Matrix> basis = commutant_of_set(comm, ambient_dim, tol);
  return analyze(ambient_dim, std::move(basis), std::move(gens), tol);
}

FiniteDimAlgebra algebra_from_span(const std::vector<Matrix>& spanning, Index ambient_dim,
                                   double tol) {
  const Matrix sp = column_space(span_matrix(spanning), tol);
  const std::vector<Matrix> basis = unstack_columns(sp, ambient_dim, ambient_dim);
  if (span_residual(sp, vec(Matrix::Identity(ambient_dim, ambient_dim))) > tol)
    throw NotSubalgebraError("span does not contain the ambient identity");
  for (const Matrix& x : basis) {
    if (span_residual(sp, vec(Matrix(x.adjoint()))) > tol)
      throw NotSubalgebraError("span is not closed under adjoints");
    for (const Matrix& y : basis)
      if (span_residual(sp, vec(Matrix(x * y))) > tol)
        throw NotSubalgebraError("span is not closed under products");
  }
  return analyze(ambient_dim, basis, {}, tol);
}

FiniteDimAlgebra commutant(const FiniteDimAlgebra& a, double tol) {
  std::vector<Matrix> basis = commutant_of_set(a.generators(), a.ambient_dim(), tol);
  return analyze(a.ambient_dim(), std::move(basis), {}, tol);
}

FiniteDimAlgebra center(const FiniteDimAlgebra& a, double tol) {
  const FiniteDimAlgebra comm = commutant(a, tol);
  const Matrix isect = intersect_spans(a.span(), comm.span(), tol);
  return analyze(a.ambient_dim(), unstack_columns(isect, a.ambient_dim(), a.ambient_dim()), {},
                 tol);
}

std::vector<Matrix> minimal_central_projections(const FiniteDimAlgebra& a) {
  return a.central_projections();
}

FiniteDimAlgebra full_matrix_algebra(Index n) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(n * n));
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1.0;
      basis.push_back(e);
    }
  // Cyclic shift plus a rank-one diagonal generate all matrix units.
  Matrix shift = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) shift((i + 1) % n, i) = 1.0;
  Matrix e00 = Matrix::Zero(n, n);
  e00(0, 0) = 1.0;
  std::vector<Matrix> gens = {shift, shift.adjoint(), e00, Matrix::Identity(n, n)};
  return FiniteDimAlgebra::from_parts(n, std::move(basis), std::move(gens), {Block{n, 1}},
                                      Matrix::Identity(n, n), {Matrix::Identity(n, n)},
                                      kDefaultTol);
}

FiniteDimAlgebra scalar_algebra(Index n) {
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  return FiniteDimAlgebra::from_parts(
      n, {s * Matrix::Identity(n, n)}, {Matrix::Identity(n, n)}, {Block{1, n}},
      Matrix::Identity(n, n), {Matrix::Identity(n, n)}, kDefaultTol);
}

FiniteDimAlgebra diagonal_algebra(Index n) {
  std::vector<Matrix> basis;
  std::vector<Matrix> central;
  for (Index i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    basis.push_back(e);
    central.push_back(e);
  }
  std::vector<Block> structure(static_cast<size_t>(n), Block{1, 1});
  return FiniteDimAlgebra::from_parts(n, std::move(basis), {}, std::move(structure),
                                      Matrix::Identity(n, n), std::move(central), kDefaultTol);
}

FiniteDimAlgebra tensor_algebra(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b,
                                double tol) {
  const Matrix ia = Matrix::Identity(a.ambient_dim(), a.ambient_dim());
  const Matrix ib = Matrix::Identity(b.ambient_dim(), b.ambient_dim());
  std::vector<Matrix> gens;
  for (const Matrix& x : a.generators()) gens.push_back(kron(x, ib));
  for (const Matrix& y : b.generators()) gens.push_back(kron(ia, y));
  return generate_algebra(gens, a.ambient_dim() * b.ambient_dim(), tol);
}

FiniteDimAlgebra join_algebra(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim())
    throw DimensionError("join_algebra: ambient dimensions differ");
  std::vector<Matrix> gens = a.generators();
  for (const Matrix& y : b.generators()) gens.push_back(y);
  return generate_algebra(gens, a.ambient_dim(), tol);
}

bool same_span(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) return false;
  return subspace_distance(a.span(), b.span()) < tol;
}

}  // namespace opalg
