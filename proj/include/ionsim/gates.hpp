#pragma once

#include <string>
#include <vector>

#include "ionsim/pauli.hpp"
#include "ionsim/state.hpp"

namespace ionsim {

/// Symbolic gate. Reset is the only non-unitary kind.
struct GateOp {
  enum class Kind { MS, LocalRot, Controlled, Reset };

  Kind kind = Kind::LocalRot;
  // MS: two or more ions. LocalRot/Reset: one qubit. Controlled: {control, target}.
  std::vector<int> targets;
  double theta = 0.0;
  double phi = 0.0;   // MS only
  char axis = 'z';    // LocalRot only
  int table_row = 0;  // Controlled only: stabilizer weight mod 4
};

/// Ordered gate sequence; ops are applied front to back.
struct Circuit {
  int num_qubits = 0;
  std::vector<GateOp> ops;
  std::string metadata;
};

struct HamiltonianTerm {
  double coefficient = 0.0;  // units of 1/time, hbar = 1
  PauliString string{1};
};

// Collective entangling gate exp(-i (theta/4) (cos phi Sx + sin phi Sy)^2)
// on its own register of num_ions qubits. Built by a scaled-and-squared
// Taylor series, deliberately a different algorithm than matrix_exp_oracle.
Matrix ms_matrix(double theta, double phi, int num_ions);

// Same gate embedded as identity on the non-target qubits.
Matrix ms_unitary(double theta, double phi, const std::vector<int>& targets,
                  int num_qubits);

GateOp ms_gate(double theta, double phi, std::vector<int> targets);

// exp(-iH) for Hermitian H via eigendecomposition. Shares no code with the
// gate constructors so that circuit-identity checks are not tautological.
Matrix matrix_exp_oracle(const Matrix& h);

// exp(-i angle sigma_axis / 2)
GateOp local_rotation(char axis, double angle, int qubit);
Matrix local_rotation_matrix(char axis, double angle);

// Two-qubit controlled correcting gate between ancilla and flip qubit.
// table_row = stabilizer weight mod 4 selects the control basis and the
// conditional rotation; |y+-> = (|0> +- i|1>)/sqrt(2).
GateOp correcting_gate(int table_row, double theta, int flip_qubit);
Matrix correcting_gate_matrix(int table_row, double theta);  // 4x4, bit 0 = control

GateOp reset_gate(int qubit);

// Rewrites a backward gate U_MS(-theta, phi) on num_ions ions (all of them)
// into forward gates: for an odd total ion count a single U_MS(pi - theta,
// phi); for an even count the same gate followed by a pi rotation about the
// MS axis on every ion. Equality holds up to a global phase.
Circuit backward_ms_as_forward(double theta, double phi, int num_ions);

// Dense matrix of one op on its own targets (throws for Reset).
Matrix gate_matrix(const GateOp& op);

}  // namespace ionsim
