#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ionsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Pauli : std::uint8_t { I, X, Y, Z };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);
const Matrix& pauli_matrix(Pauli p);

/// Signed tensor product of single-qubit Pauli factors.
///
/// Basis convention used everywhere in this project: indices are
/// little-endian, bit i of a basis index is the state of qubit i, and
/// qubit 0 is the ancilla whenever an ancilla is present.
/// The phase is i^k with k in {0,1,2,3}, so products of strings close.
class PauliString {
 public:
  explicit PauliString(int num_qubits);
  // Factor characters with qubit 0 first, e.g. "XXIZ".
  explicit PauliString(std::string_view factors, int phase_quarter = 0);

  static PauliString single(int num_qubits, int qubit, Pauli p);

  int num_qubits() const { return num_qubits_; }
  Pauli factor(int qubit) const;
  void set_factor(int qubit, Pauli p);

  Complex phase() const;
  int phase_quarter() const { return phase_quarter_; }
  void set_phase_quarter(int k);

  int weight() const;
  std::vector<int> support() const;
  bool is_identity() const;
  bool hermitian() const;  // phase +1 or -1
  bool commutes_with(const PauliString& other) const;

  PauliString operator*(const PauliString& other) const;
  bool operator==(const PauliString& other) const;

  // Bit masks over qubit indices; factor X/Y sets the x bit, Y/Z the z bit.
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  int y_count() const;

  // Dense 2^n x 2^n matrix assembled by Kronecker products.
  Matrix matrix() const;

  std::string to_string() const;

 private:
  int num_qubits_;
  std::vector<Pauli> factors_;
  int phase_quarter_;
};

}  // namespace ionsim
