#include "opalg/measurement.hpp"

#include <cmath>

#include "opalg/rng.hpp"

namespace opalg {

namespace {

Matrix pointer_projection(const MeasurementSetup& setup, const std::vector<int>& delta) {
  Matrix chi = Matrix::Zero(setup.pointer_dim, setup.pointer_dim);
  for (int g : delta) {
    if (g < 0 || g >= setup.group.order())
      throw DimensionError("outcome set contains an element outside G");
    chi(g, g) = 1.0;
  }
  return chi;
}

}  // namespace

MeasurementSetup build_coupling(const MasaData& masa, const FiniteAbelianGroup& g) {
  const Index n = masa.factor.ambient_dim();
  if (g.order() != static_cast<int>(masa.spectral_projections.size()))
    throw DimensionError("build_coupling: group order != number of spectral projections");
  MeasurementSetup setup;
  setup.system = masa;
  setup.group = g;
  setup.pointer_dim = g.order();
  setup.neutral = g.identity();
  setup.coupling = Matrix::Zero(n * g.order(), n * g.order());
  for (int gamma = 0; gamma < g.order(); ++gamma)
    setup.coupling += kron(masa.spectral_projections[static_cast<size_t>(gamma)],
                           lambda_translation(g, gamma));
  return setup;
}

MeasurementSetup build_coupling(const MasaData& masa) {
  return build_coupling(
      masa, FiniteAbelianGroup({static_cast<int>(masa.spectral_projections.size())}));
}

double check_modified_pentagonal(const MeasurementSetup& setup) {
  const Index n = setup.system_dim();
  const Index p = setup.pointer_dim;
  const Index total = n * p * p;

  // Legs: 1 = H_M (dim n), 2 and 3 = C[G] (dim p).
  auto idx = [p](Index a, Index b, Index c) { return (a * p + b) * p + c; };

  Matrix c12 = Matrix::Zero(total, total);
  Matrix c13 = Matrix::Zero(total, total);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < p; ++b)
      for (Index c = 0; c < p; ++c)
        for (Index a2 = 0; a2 < n; ++a2)
          for (Index g2 = 0; g2 < p; ++g2) {
            const Complex on12 = setup.coupling(a2 * p + g2, a * p + b);
            if (on12 != Complex(0.0, 0.0)) c12(idx(a2, g2, c), idx(a, b, c)) += on12;
            const Complex on13 = setup.coupling(a2 * p + g2, a * p + c);
            if (on13 != Complex(0.0, 0.0)) c13(idx(a2, b, g2), idx(a, b, c)) += on13;
          }

  const PermutationUnitary v = multiplicative_unitary(setup.group);
  const Matrix v23 = kron(Matrix::Identity(n, n), v.dense());
  return (c12 * c13 * v23 - v23 * c12).norm();
}

std::vector<Matrix> shift_representation(const MeasurementSetup& setup) {
  const Index n = setup.system_dim();
  std::vector<Matrix> rep;
  for (int g = 0; g < setup.group.order(); ++g) {
    Matrix u = Matrix::Zero(n, n);
    for (int d = 0; d < setup.group.order(); ++d)
      u += setup.system.eigenbasis.col(setup.group.add(g, d)) *
           setup.system.eigenbasis.col(d).adjoint();
    rep.push_back(u);
  }
  return rep;
}

double check_imprimitivity(const MeasurementSetup& setup, const std::vector<Matrix>& shift_rep) {
  if (shift_rep.size() != static_cast<size_t>(setup.group.order()))
    throw DimensionError("check_imprimitivity: one unitary per group element required");
  for (const Matrix& u : shift_rep)
    if (!is_unitary(u, 1e-8)) throw Error("check_imprimitivity: shift_rep is not unitary");

  double residual = 0.0;
  const Matrix ip = Matrix::Identity(setup.pointer_dim, setup.pointer_dim);
  for (int g = 0; g < setup.group.order(); ++g) {
    const Matrix& u = shift_rep[static_cast<size_t>(g)];
    for (int d = 0; d < setup.group.order(); ++d) {
      const Matrix lhs = u * setup.system.spectral_projections[static_cast<size_t>(d)] *
                         u.adjoint();
      residual = std::max(
          residual,
          (lhs - setup.system.spectral_projections[static_cast<size_t>(setup.group.add(g, d))])
              .norm());
    }
    const Matrix inter = setup.coupling * kron(u, ip) -
                         kron(u, lambda_translation(setup.group, g)) * setup.coupling;
    residual = std::max(residual, inter.norm());
  }
  return residual;
}

Vector correlate(const MeasurementSetup& setup, const Vector& xi) {
  if (xi.size() != setup.system_dim()) throw DimensionError("correlate: vector dimension");
  Vector v = xi;
  const double norm = v.norm();
  if (norm <= 0.0) throw Error("correlate: zero vector");
  v /= norm;
  Vector pointer = Vector::Zero(setup.pointer_dim);
  pointer(setup.neutral) = 1.0;
  return setup.coupling * kron(Matrix(v), Matrix(pointer));
}

Complex instrument_value(const MeasurementSetup& setup, const State& omega,
                         const std::vector<int>& delta, const Matrix& b) {
  const Index n = setup.system_dim();
  if (omega.dim() != n) throw DimensionError("instrument_value: state dimension");
  if (b.rows() != n || b.cols() != n) throw DimensionError("instrument_value: B dimension");
  Matrix pointer = Matrix::Zero(setup.pointer_dim, setup.pointer_dim);
  pointer(setup.neutral, setup.neutral) = 1.0;
  const Matrix joint = kron(omega.density, pointer);
  const Matrix op = setup.coupling.adjoint() * kron(b, pointer_projection(setup, delta)) *
                    setup.coupling;
  return (joint * op).trace();
}

InstrumentResult measure(const MeasurementSetup& setup, const State& omega,
                         const std::vector<int>& delta, double tol) {
  InstrumentResult result;
  result.outcome_set = delta;
  const Index n = setup.system_dim();
  result.probability =
      instrument_value(setup, omega, delta, Matrix::Identity(n, n)).real();
  if (result.probability < tol) return result;  // no outcome, post state undefined

  // J(Delta|omega)(.) / p is a state on M; its density is recovered from a
  // trace-orthonormal basis: rho* = sum_i f(x_i) x_i.
  Matrix rho_adj = Matrix::Zero(n, n);
  for (const Matrix& x : setup.system.factor.basis())
    rho_adj += instrument_value(setup, omega, delta, x) * x;
  Matrix rho = rho_adj.adjoint() / result.probability;
  rho = (rho + rho.adjoint()) / 2.0;
  result.post_state = State{std::move(rho)};
  return result;
}

RealVector outcome_probabilities(const MeasurementSetup& setup, const State& omega) {
  const Matrix id = Matrix::Identity(setup.system_dim(), setup.system_dim());
  RealVector p(setup.group.order());
  for (int g = 0; g < setup.group.order(); ++g)
    p(g) = instrument_value(setup, omega, {g}, id).real();
  return p;
}

std::vector<std::int64_t> sample_outcomes(const MeasurementSetup& setup, const State& omega,
                                          std::int64_t count, std::uint64_t seed) {
  if (count <= 0) throw DimensionError("sample_outcomes: count must be positive");
  RealVector p = outcome_probabilities(setup, omega);
  for (Index i = 0; i < p.size(); ++i) p(i) = std::max(p(i), 0.0);
  p /= p.sum();

  std::vector<std::int64_t> histogram(static_cast<size_t>(setup.group.order()), 0);
  CounterRng rng(seed);
  for (std::int64_t i = 0; i < count; ++i) {
    const double u = rng.uniform();
    double acc = 0.0;
    int outcome = setup.group.order() - 1;
    for (int g = 0; g < setup.group.order(); ++g) {
      acc += p(g);
      if (u < acc) {
        outcome = g;
        break;
      }
    }
    ++histogram[static_cast<size_t>(outcome)];
  }
  return histogram;
}

Matrix embed_by_shift(const MeasurementSetup& setup, const Matrix& b) {
  const auto rep = shift_representation(setup);
  Matrix out = Matrix::Zero(setup.total_dim(), setup.total_dim());
  for (int g = 0; g < setup.group.order(); ++g) {
    Matrix e = Matrix::Zero(setup.pointer_dim, setup.pointer_dim);
    e(g, g) = 1.0;
    out += kron(rep[static_cast<size_t>(g)] * b * rep[static_cast<size_t>(g)].adjoint(), e);
  }
  return out;
}

Matrix embed_by_coupling(const MeasurementSetup& setup, const Matrix& b) {
  const Matrix ip = Matrix::Identity(setup.pointer_dim, setup.pointer_dim);
  return setup.coupling * kron(b, ip) * setup.coupling.adjoint();
}

FiniteDimAlgebra measurement_crossed_product(const MeasurementSetup& setup, bool use_coupling,
                                             double tol) {
  const Matrix im = Matrix::Identity(setup.system_dim(), setup.system_dim());
  std::vector<Matrix> gens;
  for (int g = 0; g < setup.group.order(); ++g)
    gens.push_back(kron(im, lambda_translation(setup.group, g)));
  for (const Matrix& b : setup.system.factor.generators())
    gens.push_back(use_coupling ? embed_by_coupling(setup, b) : embed_by_shift(setup, b));
  return generate_algebra(gens, setup.total_dim(), tol);
}

}  // namespace opalg
