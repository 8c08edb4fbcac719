#include "opalg/linalg.hpp"

#include <functional>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace opalg {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector vec(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

namespace {

// JacobiSVD throughout: BDCSVD in Eigen 3.4.0 mishandles complex inputs
// with highly degenerate singular values (NaNs from the deflation step),
// and commutator stacks are exactly that kind of matrix.
using Svd = Eigen::JacobiSVD<Matrix>;

double sv_threshold(const Svd& svd, double tol) {
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  return tol * std::max(1.0, top);
}

}  // namespace

Matrix null_space(const Matrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0)
    return Matrix::Identity(a.cols(), a.cols());
  Svd svd(a, Eigen::ComputeFullV);
  const double thr = sv_threshold(svd, tol);
  Index rank = 0;
  while (rank < svd.singularValues().size() && svd.singularValues()(rank) > thr) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

Matrix column_space(const Matrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.rows(), 0);
  Svd svd(a, Eigen::ComputeThinU);
  const double thr = sv_threshold(svd, tol);
  Index rank = 0;
  while (rank < svd.singularValues().size() && svd.singularValues()(rank) > thr) ++rank;
  return svd.matrixU().leftCols(rank);
}

Index rank_of(const Matrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Svd svd(a);
  const double thr = sv_threshold(svd, tol);
  Index rank = 0;
  while (rank < svd.singularValues().size() && svd.singularValues()(rank) > thr) ++rank;
  return rank;
}

double subspace_distance(const Matrix& qa, const Matrix& qb) {
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  // sin(theta_max) computed directly as the largest singular value of
  // (1 - P_A) Q_B; the sqrt(1 - cos^2) route cannot resolve angles below
  // sqrt(machine epsilon).
  const Matrix residual = qb - qa * (qa.adjoint() * qb);
  Svd svd(residual);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double span_residual(const Matrix& q, const Vector& x) {
  const Vector r = x - q * (q.adjoint() * x);
  return r.norm() / std::max(1.0, x.norm());
}

bool span_contains(const Matrix& q, const Matrix& vectors, double tol) {
  for (Index j = 0; j < vectors.cols(); ++j)
    if (span_residual(q, vectors.col(j)) > tol) return false;
  return true;
}

Matrix intersect_spans(const Matrix& qa, const Matrix& qb, double tol) {
  if (qa.cols() == 0 || qb.cols() == 0) return Matrix(qa.rows(), 0);
  Matrix stacked(qa.rows(), qa.cols() + qb.cols());
  stacked << qa, -qb;
  const Matrix ker = null_space(stacked, tol);
  if (ker.cols() == 0) return Matrix(qa.rows(), 0);
  const Matrix candidates = qa * ker.topRows(qa.cols());
  return column_space(candidates, tol);
}

Matrix span_matrix(const std::vector<Matrix>& mats) {
  if (mats.empty()) return Matrix(0, 0);
  Matrix out(mats[0].size(), static_cast<Index>(mats.size()));
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = vec(mats[static_cast<size_t>(j)]);
  return out;
}

std::vector<Matrix> unstack_columns(const Matrix& cols, Index rows, Index colsPerMat) {
  std::vector<Matrix> out;
  out.reserve(static_cast<size_t>(cols.cols()));
  for (Index j = 0; j < cols.cols(); ++j) out.push_back(unvec(cols.col(j), rows, colsPerMat));
  return out;
}

Matrix hermitian_function(const Matrix& h, const std::function<Complex(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector fv(es.eigenvalues().size());
  for (Index i = 0; i < fv.size(); ++i) fv(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix hermitian_power(const Matrix& h, double p) {
  return hermitian_function(
      h, [p](double x) { return Complex(x <= 0.0 ? 0.0 : std::pow(x, p), 0.0); });
}

Matrix hermitian_power_it(const Matrix& h, double t) {
  return hermitian_function(h, [t](double x) {
    return std::exp(Complex(0.0, t * std::log(std::max(x, 1e-300))));
  });
}

std::vector<Matrix> commutant_of_set(const std::vector<Matrix>& mats, Index n, double tol) {
  for (const Matrix& a : mats)
    if (a.rows() != n || a.cols() != n)
      throw DimensionError("commutant_of_set: matrices must be " + std::to_string(n) + "x" +
                           std::to_string(n));
  if (mats.empty()) {
    // Commutant of the empty set is everything.
    std::vector<Matrix> all;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        Matrix e = Matrix::Zero(n, n);
        e(i, j) = 1.0;
        all.push_back(e);
      }
    return all;
  }
  // X A = A X  <=>  (A^T (x) I - I (x) A) vec(X) = 0, stacked over generators.
  const Index n2 = n * n;
  Matrix stacked(static_cast<Index>(mats.size()) * n2, n2);
  const Matrix id = Matrix::Identity(n, n);
  for (size_t g = 0; g < mats.size(); ++g)
    stacked.middleRows(static_cast<Index>(g) * n2, n2) =
        kron(mats[g].transpose(), id) - kron(id, mats[g]);
  return unstack_columns(null_space(stacked, tol), n, n);
}

std::vector<Matrix> intertwiner_solutions(const std::vector<Matrix>& a,
                                          const std::vector<Matrix>& b, double tol) {
  if (a.size() != b.size())
    throw DimensionError("intertwiner_solutions: generator lists differ in length");
  if (a.empty()) return {};
  const Index n1 = a[0].rows();
  const Index n2 = b[0].rows();
  if (n1 == 0 || n2 == 0) return {};
  // T a_i = b_i T  <=>  (a_i^T (x) I_{n2} - I_{n1} (x) b_i) vec(T) = 0.
  Matrix stacked(static_cast<Index>(a.size()) * n1 * n2, n1 * n2);
  const Matrix id1 = Matrix::Identity(n1, n1);
  const Matrix id2 = Matrix::Identity(n2, n2);
  for (size_t g = 0; g < a.size(); ++g)
    stacked.middleRows(static_cast<Index>(g) * n1 * n2, n1 * n2) =
        kron(a[g].transpose(), id2) - kron(id1, b[g]);
  return unstack_columns(null_space(stacked, tol), n2, n1);
}

}  // namespace opalg
