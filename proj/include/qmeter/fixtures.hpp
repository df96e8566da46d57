#pragma once

#include <vector>

#include "qmeter/measurement.hpp"

namespace qmeter::fixtures {

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix hadamard() {
  Matrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

inline DensityOperator maximally_mixed(int d) {
  return DensityOperator(Matrix::Identity(d, d) / static_cast<Real>(d));
}

inline DensityOperator computational_state(int d, int k) {
  Matrix m = Matrix::Zero(d, d);
  m(k, k) = 1.0;
  return DensityOperator(m);
}

inline DensityOperator plus_state() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return DensityOperator(m);
}

// Projective measurement in the computational basis: Kraus {|i><i|}.
inline KrausMeasurement basis_measurement(int d) {
  std::vector<Matrix> kraus;
  kraus.reserve(d);
  for (int i = 0; i < d; ++i) {
    Matrix v = Matrix::Zero(d, d);
    v(i, i) = 1.0;
    kraus.push_back(std::move(v));
  }
  return KrausMeasurement(std::move(kraus));
}

// Random-unitary qubit measurement {sqrt(0.3) I, sqrt(0.7) H}: every outcome
// leaves the state unitarily rotated, so its entropy reduction vanishes.
inline KrausMeasurement unitary_mixture_qubit() {
  return KrausMeasurement({std::sqrt(0.3) * Matrix(Matrix::Identity(2, 2)),
                           std::sqrt(0.7) * hadamard()});
}

// The distinguished range vector of the rank-one instruments below: the
// uniform unit vector, whose largest component is already real positive.
inline Vector uniform_psi(int dim) {
  return Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<Real>(dim)), 0.0));
}

// Instrument sending rho to Tr(P_i rho) |psi0><psi0| for the spectral
// projectors P_i of a measurement with `multiplicity` basis vectors per
// outcome: operation i has Kraus {|psi0><b| : b in range P_i}. With
// multiplicity 1 it is an efficient measurement; with multiplicity >= 2 the
// operations keep the common one-dimensional range but stop being efficient.
inline Instrument multiplicity_example(int outcomes, int multiplicity) {
  const int d = outcomes * multiplicity;
  const Vector psi0 = uniform_psi(d);
  std::vector<std::vector<Matrix>> ops(outcomes);
  for (int i = 0; i < outcomes; ++i)
    for (int s = 0; s < multiplicity; ++s) {
      const Vector b = basis_vector(d, i * multiplicity + s);
      ops[i].push_back(psi0 * b.adjoint());
    }
  return Instrument(std::move(ops));
}

// Single operation rho -> (Tr rho) I/2 on a qubit, realized with the four
// Kraus operators |i><j|/sqrt(2). Pure inputs come out maximally mixed, so
// the entropy reduction on any pure state is -ln 2: the canonical negative
// case outside the irreducible class.
inline Instrument reducible_instrument() {
  std::vector<Matrix> kraus;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix a = Matrix::Zero(2, 2);
      a(i, j) = 1.0 / std::sqrt(2.0);
      kraus.push_back(std::move(a));
    }
  return Instrument({std::move(kraus)}, {"mix"});
}

// Qubit depolarizing map as a single-outcome instrument.
inline Instrument depolarizing_instrument(Real p = 0.5) {
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(1.0 - 3.0 * p / 4.0) * Matrix(Matrix::Identity(2, 2)));
  kraus.push_back(std::sqrt(p / 4.0) * pauli_x());
  kraus.push_back(std::sqrt(p / 4.0) * pauli_y());
  kraus.push_back(std::sqrt(p / 4.0) * pauli_z());
  return Instrument({std::move(kraus)}, {"depol"});
}

// Amplitude damping measurement {V0, V1} with damping gamma; efficient, two
// outcomes, and analytically tractable.
inline KrausMeasurement amplitude_damping(Real gamma = 0.5) {
  Matrix v0 = Matrix::Zero(2, 2), v1 = Matrix::Zero(2, 2);
  v0(0, 0) = 1.0;
  v0(1, 1) = std::sqrt(1.0 - gamma);
  v1(0, 1) = std::sqrt(gamma);
  return KrausMeasurement({v0, v1});
}

}  // namespace qmeter::fixtures
