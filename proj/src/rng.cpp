#include "opalg/rng.hpp"

#include <cmath>

#include <Eigen/QR>

namespace opalg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng CounterRng::split(std::uint64_t stream) const {
  return CounterRng(splitmix64(seed_ ^ (0xA0761D6478BD642FULL + stream)));
}

std::uint64_t CounterRng::next_u64() { return splitmix64(seed_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  // Box-Muller; u clamped away from 0.
  const double u = std::max(uniform(), 0x1.0p-60);
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

Complex CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

Matrix random_matrix(Index rows, Index cols, CounterRng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

Matrix random_hermitian(Index n, CounterRng& rng) {
  const Matrix m = random_matrix(n, n, rng);
  return (m + m.adjoint()) / 2.0;
}

Matrix random_unitary(Index n, CounterRng& rng) {
  const Matrix m = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the distribution is Haar and the result deterministic.
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : 1.0);
  }
  return q;
}

Matrix random_density(Index n, CounterRng& rng, double floor) {
  const Matrix m = random_matrix(n, n, rng);
  Matrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  if (floor > 0.0) {
    rho = (1.0 - floor) * rho + floor * Matrix::Identity(n, n) / static_cast<double>(n);
  }
  return rho;
}

Vector random_unit_vector(Index n, CounterRng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

}  // namespace opalg
