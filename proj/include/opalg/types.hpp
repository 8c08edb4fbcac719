#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace opalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Single tolerance used for rank decisions (singular-value thresholding)
/// and equality-of-subspace tests throughout the library.
inline constexpr double kDefaultTol = 1e-9;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Candidate subalgebra is not contained in (or not closed inside) the
/// ambient algebra it was declared against.
class NotSubalgebraError : public Error {
 public:
  explicit NotSubalgebraError(const std::string& what) : Error(what) {}
};

class NotCommutativeError : public Error {
 public:
  explicit NotCommutativeError(const std::string& what) : Error(what) {}
};

/// Abelian subalgebra has a degenerate joint spectrum, so it is not maximal.
class NotMaximalError : public Error {
 public:
  explicit NotMaximalError(const std::string& what) : Error(what) {}
};

/// State (or central measure) fails strict positivity where required.
class NotFaithfulError : public Error {
 public:
  explicit NotFaithfulError(const std::string& what) : Error(what) {}
};

/// A rank or clustering decision could not be made stably at the tolerance.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

/// Input file/document violates the expected schema; carries a path to the
/// offending field.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Hilbert-Schmidt (trace) inner product <X,Y> = tr(X* Y).
inline Complex hs_inner(const Matrix& x, const Matrix& y) {
  return (x.adjoint() * y).trace();
}

inline double hs_norm(const Matrix& x) { return x.norm(); }

inline bool is_square(const Matrix& x) { return x.rows() == x.cols(); }

inline bool is_hermitian(const Matrix& x, double tol = kDefaultTol) {
  return is_square(x) && (x - x.adjoint()).norm() < tol;
}

inline bool is_unitary(const Matrix& x, double tol = kDefaultTol) {
  if (!is_square(x)) return false;
  return (x.adjoint() * x - Matrix::Identity(x.rows(), x.cols())).norm() < tol;
}

/// P = P* = P^2 within tolerance.
inline bool is_projection(const Matrix& x, double tol = kDefaultTol) {
  return is_hermitian(x, tol) && (x * x - x).norm() < tol;
}

}  // namespace opalg
