#pragma once

#include <functional>
#include <vector>

#include "opalg/types.hpp"

namespace opalg {

Matrix kron(const Matrix& a, const Matrix& b);

/// Column-major vectorization, so vec(A X B) = (B^T (x) A) vec(X).
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Index rows, Index cols);

/// Orthonormal basis (columns) of the kernel of a, with singular values
/// below tol * max(1, sigma_max) treated as zero.
Matrix null_space(const Matrix& a, double tol = kDefaultTol);

/// Orthonormal basis (columns) of the column space of a.
Matrix column_space(const Matrix& a, double tol = kDefaultTol);

Index rank_of(const Matrix& a, double tol = kDefaultTol);

/// Operator-norm distance between the orthogonal projections onto the two
/// column spans. Inputs must have orthonormal columns. Equals sin of the
/// largest principal angle; 1.0 when the ranks differ.
double subspace_distance(const Matrix& qa, const Matrix& qb);

/// Residual of x after projecting onto the span of the orthonormal columns
/// of q, relative to max(1, |x|).
double span_residual(const Matrix& q, const Vector& x);

/// Every column of vectors lies in span(q) within tol.
bool span_contains(const Matrix& q, const Matrix& vectors, double tol = kDefaultTol);

/// Orthonormal basis of the intersection of two column spans.
Matrix intersect_spans(const Matrix& qa, const Matrix& qb, double tol = kDefaultTol);

/// Stack matrices as columns of an (r*c) x count matrix.
Matrix span_matrix(const std::vector<Matrix>& mats);
std::vector<Matrix> unstack_columns(const Matrix& cols, Index rows, Index colsPerMat);

/// f(h) for Hermitian h via eigendecomposition.
Matrix hermitian_function(const Matrix& h, const std::function<Complex(double)>& f);

/// h^p for Hermitian positive semidefinite h (eigenvalues clamped at 0).
Matrix hermitian_power(const Matrix& h, double p);

/// h^{it} for Hermitian positive definite h.
Matrix hermitian_power_it(const Matrix& h, double t);

/// Solve the joint commutation problem: orthonormal basis of
/// { X : X A_i = A_i X for all i } as matrices.
std::vector<Matrix> commutant_of_set(const std::vector<Matrix>& mats, Index n,
                                     double tol = kDefaultTol);

/// Orthonormal basis of { T (n2 x n1) : T A_i = B_i T for all i }.
std::vector<Matrix> intertwiner_solutions(const std::vector<Matrix>& a,
                                          const std::vector<Matrix>& b,
                                          double tol = kDefaultTol);

}  // namespace opalg
