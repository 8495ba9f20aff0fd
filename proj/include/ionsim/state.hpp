#pragma once

#include <string_view>
#include <vector>

#include "ionsim/pauli.hpp"

namespace ionsim {

inline constexpr int kMaxPureQubits = 20;
inline constexpr int kMaxMixedQubits = 8;

/// Dense pure state of an n-qubit register (n <= 20).
class StateVector {
 public:
  explicit StateVector(int num_qubits);  // |0...0>
  StateVector(int num_qubits, Vector amplitudes);

  // bits[i] is the state of qubit i (little-endian index convention).
  static StateVector basis_state(int num_qubits, std::string_view bits);

  int num_qubits() const { return num_qubits_; }
  long long dim() const { return static_cast<long long>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Vector& amplitudes() { return amps_; }

  double norm() const;
  void normalize();

 private:
  int num_qubits_;
  Vector amps_;
};

/// Dense mixed state of an n-qubit register (n <= 8).
class DensityMatrix {
 public:
  explicit DensityMatrix(int num_qubits);  // |0...0><0...0|
  DensityMatrix(int num_qubits, Matrix elements);

  static DensityMatrix from_state(const StateVector& psi);

  int num_qubits() const { return num_qubits_; }
  long long dim() const { return elems_.rows(); }
  const Matrix& elements() const { return elems_; }
  Matrix& elements() { return elems_; }

  double trace_real() const;
  double hermiticity_defect() const;  // max |rho - rho^dagger|
  double min_eigenvalue() const;

 private:
  int num_qubits_;
  Matrix elems_;
};

void apply_pauli_string(StateVector& state, const PauliString& p);
void apply_pauli_string(DensityMatrix& rho, const PauliString& p);  // P rho P^dag

double expectation(const StateVector& state, const PauliString& p);
double expectation(const DensityMatrix& rho, const PauliString& p);

// Reduced state on `keep`; qubit k of the result is keep[k] after sorting.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

Complex inner_product(const StateVector& a, const StateVector& b);  // <a|b>
double fidelity(const StateVector& a, const StateVector& b);        // |<b|a>|^2
double fidelity(const DensityMatrix& a, const StateVector& b);      // <b|a|b>

// Applies a 2^k x 2^k unitary to the listed qubits; bit j of the operator's
// row/column index is the state of targets[j].
void apply_unitary(StateVector& state, const Matrix& u,
                   const std::vector<int>& targets);
void apply_unitary(DensityMatrix& rho, const Matrix& u,
                   const std::vector<int>& targets);

// Dense embedding of the same operator into the full register.
Matrix embed(const Matrix& u, const std::vector<int>& targets, int num_qubits);

}  // namespace ionsim
