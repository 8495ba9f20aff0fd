#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ionsim/channels.hpp"
#include "ionsim/circuits.hpp"

namespace ionsim {

struct StabilizerSpec {
  std::string name;
  PauliString string{1};
  PauliString flip{1};              // pump jump direction
  double energy_coefficient = 1.0;  // E in H = -E sum A
};

struct CodeModel {
  std::string name;
  int num_system_qubits = 0;
  std::vector<StabilizerSpec> stabilizers;  // also the cooling schedule order
  std::optional<PauliString> logical_x;
  std::optional<PauliString> logical_z;

  void validate() const;
};

// Two z-plaquettes sharing one edge plus the six reduced boundary vertex
// operators, on 7 qubits. Geometry table (qubit labels 1..7 map to indices
// 0..6):
//
//   plaquette L = Z1 Z2 Z3 Z4        flip X4
//   plaquette R = Z4 Z5 Z6 Z7        flip X6
//   vertex  TL = X1 X2               flip Z1
//   vertex  BL = X2 X3               flip Z3
//   vertex  TR = X5 X6               flip Z5
//   vertex  TM = X1 X4 X5            flip Z4
//   vertex  BM = X3 X4 X7            flip Z7
//   vertex  BR = X6 X7               flip Z6
//
// The schedule order above pumps each stabilizer with a flip that commutes
// with everything already pumped, so a single theta = pi/2 sweep cools any
// state into the ground space; the product of all six vertex operators is
// the identity, which fixes the last vertex for free.
CodeModel toric_two_plaquette();

// 7-qubit color code on three weight-4 plaquettes
//   P1 = {1,2,3,4}, P2 = {3,4,5,6}, P3 = {1,3,5,7}
// with A_i the X-type and B_i the Z-type operator on P_i, logicals
// X = prod sigma^x, Z = prod sigma^z over all seven qubits. Pump flips act
// on the qubit unique to each plaquette (2, 6, 7), B-pumps scheduled before
// A-pumps so one theta = pi/2 sweep is deterministic.
CodeModel color_code_seven();

struct CoolingTrace {
  // expectations[s][k] = <A_k> after s pump applications (row 0 = initial),
  // ordered as model.stabilizers.
  std::vector<std::vector<double>> expectations;
};

std::pair<DensityMatrix, CoolingTrace> cool_to_ground(const CodeModel& model,
                                                      const DensityMatrix& rho0,
                                                      double theta, int sweeps);

// Per-stabilizer expectations in model order; < 0 marks an excitation.
std::vector<double> syndrome(const StateVector& state, const CodeModel& model);
std::vector<double> syndrome(const DensityMatrix& rho, const CodeModel& model);

// |0L><0L| via pumping from |0...0>.
DensityMatrix logical_prepare_zero(const CodeModel& model, double theta);

enum class LogicalGate { X, Z, H, K };

// Transversal gate: the same single-qubit operation on every system qubit.
// Warns on stderr if the state is outside the code space.
void logical_gate(StateVector& state, const CodeModel& model, LogicalGate g);
void logical_gate(DensityMatrix& rho, const CodeModel& model, LogicalGate g);

// Rank of the stabilizer group over GF(2); the ground space has dimension
// 2^(n - rank).
int independent_stabilizer_count(const CodeModel& model);

// tr(P rho) with P the projector onto the joint +1 eigenspace.
double ground_space_weight(const DensityMatrix& rho, const CodeModel& model);

// c = (1/2) flip (1 - A), the jump operator whose rate-gamma Lindblad term
// is the small-angle limit of the pump channel.
Matrix pump_jump_operator(const StabilizerSpec& spec);

// H = -sum E_a A_a plus one rate-gamma jump per stabilizer.
MasterEquation pump_master_equation(const CodeModel& model, double gamma);

// Circuit-backed Trotter slices: coherent blocks at phi = E tau and pump
// channels at theta = sqrt(gamma tau).
TrotterRealizations pump_trotter_realizations(const CodeModel& model,
                                              double gamma);

std::string model_to_json(const CodeModel& model);

}  // namespace ionsim
